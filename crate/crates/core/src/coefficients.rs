//! Coefficient tables of the cylinder-sphere integrals
//!
//! ```text
//! I_jk(ρ, s) = ∫_0^h z^{2j} (z² + s²)^k dz,   h = √(ρ² − s²)
//!            = h · Σ_{l=0}^{j+k} B_l(ρ) s^{2l}
//! ```
//!
//! `I_jk` is homogeneous of degree 2(j+k)+1 in (ρ, s), so each `B_l` is a
//! monomial `β_l · ρ^{2(j+k−l)}` and a [`BTable`] only stores the β's.
//!
//! Routes to β_l:
//!
//! * [`expand_oracle`]: binomial expansion and the power rule. Uses nothing
//!   but calculus and is the reference for the others.
//! * [`b_coeff_sum`]: collapsed double sum over `n` with
//!   `max(0, l−j) ≤ n ≤ min(k, l)`.
//! * [`b_coeff_shifted`]: the same sum after the shift `m = n − (l − j)`,
//!   written with half-integer binomials.
//! * [`b_coeff_closed`]: single Γ-ratio, valid only for `l ≥ j`.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, gamma_exact, HalfInteger, SqrtPiScaled};
use crate::hypergeometric::hyp2f1_terminating;
use crate::poly::EvenPoly;
use crate::rational::Rational;

/// β_l for one `(j, k)`: `B_l(ρ) = betas[l] · ρ^{2(j+k−l)}`, `l = 0..=j+k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BTable {
    pub j: u32,
    pub k: u32,
    pub betas: Vec<Rational>,
}

impl BTable {
    pub fn degree(&self) -> u32 {
        self.j + self.k
    }

    /// β_l, zero for `l > j + k`.
    pub fn beta(&self, l: u32) -> Rational {
        self.betas
            .get(l as usize)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Power of ρ carried by `B_l`.
    pub fn rho_power(&self, l: u32) -> u32 {
        2 * (self.degree() - l)
    }

    /// `B_l(ρ)` as a polynomial in ρ² (zero past the end).
    pub fn b_poly(&self, l: u32) -> EvenPoly {
        if l > self.degree() {
            return EvenPoly::zero();
        }
        EvenPoly::monomial(self.beta(l), (self.degree() - l) as usize)
    }

    /// `B_l` at a given ρ².
    pub fn b_value(&self, l: u32, rho2: &Rational) -> Rational {
        if l > self.degree() {
            return Rational::zero();
        }
        self.beta(l) * rho2.pow(self.degree() - l)
    }

    /// `I_jk / √(ρ² − s²)` as an exact rational.
    pub fn reduced_integral(&self, rho2: &Rational, s2: &Rational) -> Rational {
        (0..=self.degree())
            .map(|l| self.b_value(l, rho2) * s2.pow(l))
            .sum()
    }
}

/// Integrate `z^{2j}(z² + s²)^k` term by term.
///
/// `(z²+s²)^k = Σ_i C(k,i) z^{2i} s^{2(k−i)}`; each `z^{2p}` with `p = j+i`
/// integrates to `h^{2p+1}/(2p+1) = h·(ρ²−s²)^p/(2p+1)`, and `(ρ²−s²)^p` is
/// expanded binomially to collect powers of s².
pub fn expand_oracle(j: u32, k: u32) -> BTable {
    let total = (j + k) as usize;
    let mut betas = vec![Rational::zero(); total + 1];
    for i in 0..=k {
        let p = j + i;
        let outer = Rational::from_bigints(binomial(k as u64, i as u64), BigInt::from(2 * p + 1));
        for r in 0..=p {
            let l = (k - i + r) as usize;
            let sign = if r % 2 == 0 { 1 } else { -1 };
            let inner = Rational::from_bigint(binomial(p as u64, r as u64) * sign);
            betas[l] += &outer * inner;
        }
    }
    BTable { j, k, betas }
}

fn g(x: HalfInteger) -> SqrtPiScaled {
    gamma_exact(x).expect("gamma argument is positive by construction")
}

fn check_index(j: u32, k: u32, l: u32) -> Result<()> {
    if l > j + k {
        return Err(Error::Index {
            what: "l",
            index: l as i64,
            lo: 0,
            hi: (j + k) as i64,
        });
    }
    Ok(())
}

/// β_l from
///
/// ```text
/// Γ(k+1)Γ(j+1) / (2Γ(k+j+3/2)) · Σ_{n=max(0,l−j)}^{min(k,l)}
///     (−1)^{l+n} Γ(k+j−n+½) / (Γ(k−n+1) Γ(j+n−l+1) Γ(l−n+1))
/// ```
pub fn b_coeff_sum(j: u32, k: u32, l: u32) -> Result<Rational> {
    check_index(j, k, l)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let prefactor = SqrtPiScaled::rational(Rational::new(1, 2))
        * g(HalfInteger::int(k + 1))
        * g(HalfInteger::int(j + 1))
        / g(HalfInteger::half(k + j + 1));

    // Every term carries exactly one √π from Γ(k+j−n+½).
    let mut sum = Rational::zero();
    for n in (l - j).max(0)..=k.min(l) {
        let term = g(HalfInteger::half(k + j - n))
            / (g(HalfInteger::int(k - n + 1))
                * g(HalfInteger::int(j + n - l + 1))
                * g(HalfInteger::int(l - n + 1)));
        if term.sqrt_pi_power != 1 {
            return Err(Error::ResidualSqrtPi(term.sqrt_pi_power - 1));
        }
        sum += Rational::sign_power(l + n) * term.value;
    }
    (prefactor * SqrtPiScaled::new(sum, 1)).to_rational()
}

/// `C(a − ½ , j − ½)` for integer `a ≥ j` written through Γ:
/// `Γ(a+½) / (Γ(j+½) Γ(a−j+1))`. Zero when `a < j`.
fn shifted_binomial(a: i64, j: i64) -> SqrtPiScaled {
    if a < j {
        return SqrtPiScaled::rational(Rational::zero());
    }
    g(HalfInteger::half(a)) / (g(HalfInteger::half(j)) * g(HalfInteger::int(a - j + 1)))
}

/// β_l after shifting the summation index, with `T = k+j−l`:
///
/// ```text
/// Γ(k+1)Γ(j+½) / (2Γ(k+j+3/2)) · Σ_{m=max(0,j−l)}^{j}
///     (−1)^{m+j} C(T−½+j−m, j−½) C(j, j−m)
/// ```
pub fn b_coeff_shifted(j: u32, k: u32, l: u32) -> Result<Rational> {
    check_index(j, k, l)?;
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let t = k + j - l;
    let prefactor = SqrtPiScaled::rational(Rational::new(1, 2))
        * g(HalfInteger::int(k + 1))
        * g(HalfInteger::half(j))
        / g(HalfInteger::half(k + j + 1));
    let mut sum = Rational::zero();
    for m in (j - l).max(0)..=j {
        let first = shifted_binomial(t + j - m, j).to_rational()?;
        let second = Rational::from_bigint(binomial(j as u64, (j - m) as u64));
        sum += Rational::sign_power(m + j) * first * second;
    }
    (prefactor.scale(&sum)).to_rational()
}

/// β_l in closed form for `j ≤ l ≤ j+k`:
///
/// ```text
/// (−1)^j Γ(k+j−l+½) Γ(k+1) Γ(j+½) / (2√π Γ(k+j+1−l) Γ(k+j+3/2))
/// ```
///
/// For `l < j` the shifted sum keeps a nonzero lower limit and has no such
/// closed form; that case is refused.
pub fn b_coeff_closed(j: u32, k: u32, l: u32) -> Result<Rational> {
    check_index(j, k, l)?;
    if l < j {
        return Err(Error::ClosedFormUnavailable { j, l });
    }
    let (j, k, l) = (j as i64, k as i64, l as i64);
    let numer = SqrtPiScaled::rational(Rational::sign_power(j))
        * g(HalfInteger::half(k + j - l))
        * g(HalfInteger::int(k + 1))
        * g(HalfInteger::half(j));
    let denom = SqrtPiScaled::new(Rational::integer(2), 1)
        * g(HalfInteger::int(k + j + 1 - l))
        * g(HalfInteger::half(k + j + 1));
    (numer / denom).to_rational()
}

/// Table through [`b_coeff_sum`].
pub fn table_by_sum(j: u32, k: u32) -> Result<BTable> {
    let betas = (0..=j + k)
        .map(|l| b_coeff_sum(j, k, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(BTable { j, k, betas })
}

/// Compare the BTable expansion of `I_jk/√(ρ²−s²)` with
///
/// ```text
/// ρ^{2k}/(2j+2k+1) · (ρ²−s²)^j · ₂F₁([1, −k]; [½−j−k]; s²/ρ²)
/// ```
///
/// at a rational point with `0 ≤ s < ρ`. Both sides are rational once the
/// common `√(ρ²−s²)` is divided out. Returns `(equal, table_side, 2f1_side)`.
pub fn check_2f1_form(
    j: u32,
    k: u32,
    rho: &Rational,
    s: &Rational,
) -> Result<(bool, Rational, Rational)> {
    if !rho.is_positive() {
        return Err(Error::Domain(format!("rho must be positive, got {rho}")));
    }
    if s.is_negative() || s >= rho {
        return Err(Error::Domain(format!(
            "need 0 <= s < rho for a real integration range, got s = {s}, rho = {rho}"
        )));
    }
    let rho2 = rho * rho;
    let s2 = s * s;

    let table_side = expand_oracle(j, k).reduced_integral(&rho2, &s2);

    let (ji, ki) = (j as i64, k as i64);
    let series = hyp2f1_terminating(
        &Rational::one(),
        &Rational::integer(-ki),
        &(Rational::new(1, 2) - Rational::integer(ji + ki)),
        &(&s2 / &rho2),
    )?;
    let hyp_side =
        rho2.pow(k) / Rational::integer(2 * (ji + ki) + 1) * (&rho2 - &s2).pow(j) * series;

    Ok((table_side == hyp_side, table_side, hyp_side))
}
