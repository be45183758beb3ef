//! Terminating ₂F₁ sums and the multiplier polynomials μ_m(ρ).
//!
//! μ_m is built two ways. [`mu`] expands the Γ-ratio series coefficient by
//! coefficient into an [`EvenPoly`]; [`mu_via_2f1`] evaluates the prefactor
//! times ₂F₁([1-m, 1/2]; [1/2-m]; ρ²) at a point. The second route exists
//! only to cross-check the first.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{gamma_exact, pochhammer, HalfInteger, SqrtPiScaled};
use crate::poly::EvenPoly;
use crate::rational::Rational;

/// Exact ₂F₁([a1, a2]; [b1]; x) for a terminating series.
///
/// The series stops at the first nonpositive-integer upper parameter. A lower
/// parameter that is a nonpositive integer `-p` is allowed only if the series
/// stops at or before index `p`.
pub fn hyp2f1_terminating(
    a1: &Rational,
    a2: &Rational,
    b1: &Rational,
    x: &Rational,
) -> Result<Rational> {
    let last = [a1, a2]
        .into_iter()
        .filter(|a| a.is_nonpositive_integer())
        .map(|a| -a.to_i64().expect("small termination index"))
        .min()
        .ok_or(Error::NonTerminating)?;

    if b1.is_nonpositive_integer() {
        let p = -b1.to_i64().expect("small lower parameter");
        if p < last {
            return Err(Error::Pole(format!(
                "lower parameter {b1} vanishes in (b1)_n for n = {} <= {last}",
                p + 1
            )));
        }
    }

    // Term ratio t_{n+1}/t_n = (a1+n)(a2+n) x / ((b1+n)(n+1)).
    let mut term = Rational::one();
    let mut sum = Rational::one();
    for n in 0..last {
        let n_r = Rational::integer(n);
        let num = (a1 + &n_r) * (a2 + &n_r) * x;
        let den = (b1 + &n_r) * Rational::integer(n + 1);
        term = term * num / den;
        sum += &term;
    }
    Ok(sum)
}

/// Reference evaluation straight from the Pochhammer definition, without the
/// term-ratio recurrence. Kept for tests and cross-checks.
pub fn hyp2f1_by_pochhammer(
    a1: &Rational,
    a2: &Rational,
    b1: &Rational,
    x: &Rational,
    terms: u32,
) -> Rational {
    (0..terms)
        .map(|n| {
            pochhammer(a1, n) * pochhammer(a2, n) * x.pow(n)
                / (pochhammer(b1, n) * pochhammer(&Rational::one(), n))
        })
        .sum()
}

/// μ_m as a polynomial in ρ², with its index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MuPoly {
    pub m: u32,
    #[serde(flatten)]
    pub poly: EvenPoly,
}

impl MuPoly {
    pub fn evaluate(&self, rho2: &Rational) -> Rational {
        self.poly.evaluate(rho2)
    }
}

fn g(x: HalfInteger) -> SqrtPiScaled {
    gamma_exact(x).expect("gamma argument is positive by construction")
}

/// μ_m(ρ) = Σ_{n=0}^{m-1} (2/π) Γ(m)Γ(n+½)Γ(m-n+½) / (Γ(m+1)Γ(m-n)Γ(n+1)) · ρ^{2n}.
pub fn mu(m: u32) -> Result<MuPoly> {
    if m == 0 {
        return Err(Error::Domain(
            "mu_0 = 2/(1 - rho^2) is not a polynomial; use mu_zero_value".into(),
        ));
    }
    let m_i = m as i64;
    let two_over_pi = SqrtPiScaled::new(Rational::integer(2), -2);
    let coeffs = (0..m_i)
        .map(|n| {
            let numer = two_over_pi.clone()
                * g(HalfInteger::int(m_i))
                * g(HalfInteger::half(n))
                * g(HalfInteger::half(m_i - n));
            let denom = g(HalfInteger::int(m_i + 1))
                * g(HalfInteger::int(m_i - n))
                * g(HalfInteger::int(n + 1));
            (numer / denom).to_rational()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MuPoly {
        m,
        poly: EvenPoly::new(coeffs),
    })
}

/// μ_1..=μ_max, index `i` holding μ_{i+1}.
pub fn mu_table(max: u32) -> Vec<MuPoly> {
    (1..=max).map(|m| mu(m).expect("m >= 1")).collect()
}

/// μ_m(ρ) from 2Γ(m+½)/(√π Γ(m+1)) · ₂F₁([1-m, ½]; [½-m]; ρ²).
pub fn mu_via_2f1(m: u32, rho2: &Rational) -> Result<Rational> {
    if m == 0 {
        return Err(Error::Domain("mu_via_2f1 requires m >= 1".into()));
    }
    let m_i = m as i64;
    let prefactor = (SqrtPiScaled::rational(Rational::integer(2)) * g(HalfInteger::half(m_i))
        / (SqrtPiScaled::sqrt_pi() * g(HalfInteger::int(m_i + 1))))
    .to_rational()?;
    let series = hyp2f1_terminating(
        &Rational::integer(1 - m_i),
        &Rational::new(1, 2),
        &(Rational::new(1, 2) - Rational::integer(m_i)),
        rho2,
    )?;
    Ok(prefactor * series)
}

/// μ_0 = 2/(1-ρ²); only meaningful in the sum that starts at m = 0.
pub fn mu_zero_value(rho2: &Rational) -> Result<Rational> {
    let gap = Rational::one() - rho2;
    if gap.is_zero() {
        return Err(Error::Pole(
            "mu_0 = 2/(1 - rho^2) is singular at rho^2 = 1".into(),
        ));
    }
    Ok(Rational::integer(2) / gap)
}
