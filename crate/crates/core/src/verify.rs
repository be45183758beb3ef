//! Exact checks of the ρ-independence theorem and its two binomial lemmas.
//!
//! The theorem is checked symbolically: for `j ≤ N ≤ j+k`
//!
//! ```text
//! R(ρ²) = B_N(ρ) + (1−ρ²)/2 · Σ_{m=1}^{j+k−N} μ_m(ρ) B_{N+m}(ρ)
//! ```
//!
//! is built as an [`EvenPoly`] and must reduce to the constant
//!
//! ```text
//! (−1)^j Γ(k+j−N+½) Γ(k+1) Γ(j+½) / (2√π Γ(k+j+1−N) Γ(k+j+3/2))
//! ```
//!
//! which is also the closed form of β_N. The (−1)^j factor is required: at
//! `(j, k, N) = (1, 0, 1)` the residual is `−1/3`.
//!
//! Coefficient tables come from [`expand_oracle`], never from the
//! proof-derived formulas, so a passing residual is not circular.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::{expand_oracle, BTable};
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::exact::{
    binomial, factorial, gamma_exact, gen_binomial, half_binom, pochhammer, HalfInteger,
    SqrtPiScaled,
};
use crate::hypergeometric::{mu_table, mu_zero_value, MuPoly};
use crate::poly::EvenPoly;
use crate::rational::Rational;

/// Both sides of
/// `Σ_{k=0}^n (−1)^{n+k} C(α+k, β+n) C(n,k) = C(α, β)` for integer β.
///
/// `C(α, β)` with negative β is zero (integer lower index convention); the
/// identity still holds there because the left side is an n-th forward
/// difference of a polynomial of degree `β+n < n`.
pub fn lemma1_sides(alpha: &Rational, beta: i64, n: u32) -> Result<(Rational, Rational)> {
    let lower = beta + n as i64;
    if lower < 0 {
        return Err(Error::Domain(format!(
            "binomial lower index beta + n = {lower} is negative"
        )));
    }
    let lower = lower as u32;
    let rhs = if beta < 0 {
        Rational::zero()
    } else {
        gen_binomial(alpha, beta as u32)
    };
    Ok((lemma1_lhs(alpha, lower, n), rhs))
}

/// `Σ_k (−1)^{n+k} C(n,k) C(α+k, m)` over the common denominator `q^m m!`
/// (α = p/q): each binomial numerator is `Π_{t=k−m+1}^{k} (p + t q)`.
fn lemma1_lhs(alpha: &Rational, m: u32, n: u32) -> Rational {
    let p = alpha.numer();
    let q = alpha.denom();
    let factor = |t: i64| p + q * t;
    let direct = |k: i64| (k - m as i64 + 1..=k).fold(BigInt::one(), |acc, t| acc * factor(t));

    let mut product = direct(0);
    let mut total = BigInt::zero();
    for k in 0..=n as i64 {
        if k > 0 {
            // Slide the window of factors by one; recompute if the outgoing factor is zero.
            let outgoing = factor(k - m as i64);
            product = if m == 0 {
                BigInt::one()
            } else if outgoing.is_zero() {
                direct(k)
            } else {
                product * factor(k) / outgoing
            };
        }
        let term = &product * binomial(n as u64, k as u64);
        if (n as i64 + k) % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    Rational::from_bigints(total, q.pow(m) * factorial(m as u64))
}

/// Termwise reference for [`lemma1_lhs`].
#[cfg(test)]
fn lemma1_lhs_naive(alpha: &Rational, m: u32, n: u32) -> Rational {
    (0..=n)
        .map(|k| {
            let sign = Rational::sign_power((n + k) as i64);
            let top = alpha + Rational::integer(k as i64);
            let choose_nk = Rational::from_bigint(binomial(n as u64, k as u64));
            sign * gen_binomial(&top, m) * choose_nk
        })
        .sum()
}

pub fn verify_lemma1(alpha: &Rational, beta: i64, n: u32) -> Result<bool> {
    let (lhs, rhs) = lemma1_sides(alpha, beta, n)?;
    Ok(lhs == rhs)
}

/// Both sides of
/// `Σ_{k=0}^n C(n−k−½, −½) C(k−½, −½) / (β+k) = Γ(β)Γ(n+β+½) / (Γ(β+½)Γ(β+n+1))`.
///
/// The right side is evaluated as `(β+½)_n / (β (β+1)_n)`, which follows
/// from `Γ(x+n) = Γ(x)(x)_n`.
pub fn lemma2_sides(beta: &Rational, n: u32) -> Result<(Rational, Rational)> {
    if let Some(k) = (0..=n as i64).find(|&k| (beta + Rational::integer(k)).is_zero()) {
        return Err(Error::Pole(format!("beta + k vanishes at k = {k}")));
    }
    let lhs = (0..=n)
        .map(|k| half_binom(n - k) * half_binom(k) / (beta + Rational::integer(k as i64)))
        .sum();
    let rhs = pochhammer(&(beta + Rational::new(1, 2)), n)
        / (beta * pochhammer(&(beta + Rational::one()), n));
    Ok((lhs, rhs))
}

pub fn verify_lemma2(beta: &Rational, n: u32) -> Result<bool> {
    let (lhs, rhs) = lemma2_sides(beta, n)?;
    Ok(lhs == rhs)
}

/// Right side of the second lemma through Γ directly, for positive
/// half-integer β. Independent of the Pochhammer rewrite.
pub fn lemma2_rhs_by_gamma(beta: HalfInteger, n: u32) -> Result<Rational> {
    let n = n as i64;
    let b2 = beta.twice();
    let numer = gamma_exact(beta)? * gamma_exact(HalfInteger::from_twice(b2 + 2 * n + 1))?;
    let denom = gamma_exact(HalfInteger::from_twice(b2 + 1))?
        * gamma_exact(HalfInteger::from_twice(b2 + 2 * n + 2))?;
    (numer / denom).to_rational()
}

/// Outcome of one `(j, k, N)` residual computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub j: u32,
    pub k: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub residual: EvenPoly,
    pub is_constant: bool,
    pub constant: Option<Rational>,
    pub closed_form_constant: Rational,
}

impl TheoremReport {
    /// Whether the theorem's hypothesis `N ≥ j` covers this tuple.
    pub fn in_hypothesis(&self) -> bool {
        self.n >= self.j
    }

    /// Constant residual equal to the closed form.
    pub fn holds(&self) -> bool {
        self.is_constant && self.constant.as_ref() == Some(&self.closed_form_constant)
    }

    /// Error if the tuple is inside the hypothesis and the identity fails.
    pub fn check(&self) -> Result<()> {
        if self.in_hypothesis() && !self.holds() {
            return Err(Error::IdentityViolation(format!(
                "(j,k,N) = ({},{},{}): residual {} is not the constant {}",
                self.j, self.k, self.n, self.residual, self.closed_form_constant
            )));
        }
        Ok(())
    }
}

fn g(x: HalfInteger) -> SqrtPiScaled {
    gamma_exact(x).expect("gamma argument is positive by construction")
}

/// `(−1)^j Γ(k+j−N+½) Γ(k+1) Γ(j+½) / (2√π Γ(k+j+1−N) Γ(k+j+3/2))`.
pub fn closed_form_constant(j: u32, k: u32, n: u32) -> Result<Rational> {
    check_n(j, k, n)?;
    let (j, k, n) = (j as i64, k as i64, n as i64);
    let numer = SqrtPiScaled::rational(Rational::sign_power(j))
        * g(HalfInteger::half(k + j - n))
        * g(HalfInteger::int(k + 1))
        * g(HalfInteger::half(j));
    let denom = SqrtPiScaled::new(Rational::integer(2), 1)
        * g(HalfInteger::int(k + j + 1 - n))
        * g(HalfInteger::half(k + j + 1));
    (numer / denom).to_rational()
}

fn check_n(j: u32, k: u32, n: u32) -> Result<()> {
    if n > j + k {
        return Err(Error::Index {
            what: "N",
            index: n as i64,
            lo: 0,
            hi: (j + k) as i64,
        });
    }
    Ok(())
}

/// `Σ_{m=1}^{j+k−N} μ_m B_{N+m}`, `mus[i]` holding μ_{i+1}.
fn multiplier_sum(table: &BTable, mus: &[MuPoly], n: u32) -> EvenPoly {
    let top = table.degree() - n;
    (1..=top).fold(EvenPoly::zero(), |acc, m| {
        &acc + &(&mus[m as usize - 1].poly * &table.b_poly(n + m))
    })
}

/// Residual polynomial from a given table and μ list.
///
/// `mus` must hold at least μ_1..=μ_{j+k−N}.
pub fn theorem_residual_with(table: &BTable, mus: &[MuPoly], n: u32) -> Result<TheoremReport> {
    let (j, k) = (table.j, table.k);
    check_n(j, k, n)?;
    let needed = (j + k - n) as usize;
    assert!(
        mus.len() >= needed,
        "need mu_1..=mu_{needed}, got {}",
        mus.len()
    );

    let half_gap = EvenPoly::one_minus_rho2().scale(&Rational::new(1, 2));
    let residual = &table.b_poly(n) + &(&half_gap * &multiplier_sum(table, mus, n));
    let (is_constant, constant) = residual.is_constant();
    Ok(TheoremReport {
        j,
        k,
        n,
        residual,
        is_constant,
        constant,
        closed_form_constant: closed_form_constant(j, k, n)?,
    })
}

/// `B_N + (1−ρ²)/2 · Σ_{m≥1} μ_m B_{N+m}` for the oracle table of `(j, k)`.
pub fn theorem_residual(j: u32, k: u32, n: u32) -> Result<TheoremReport> {
    check_n(j, k, n)?;
    let mus = mu_table(j + k - n);
    theorem_residual_with(&expand_oracle(j, k), &mus, n)
}

/// Coefficients ν_b of `Σ_{m=1}^{j+k−N} μ_m B_{N+m} = Σ_b ν_b ρ^{2b}` for
/// `b = 0..j+k−N`. Empty when `N = j+k`.
pub fn nu_sequence(j: u32, k: u32, n: u32) -> Result<Vec<Rational>> {
    check_n(j, k, n)?;
    if n < j {
        return Err(Error::Domain(format!(
            "nu_b is only defined for N >= j (got N = {n}, j = {j})"
        )));
    }
    let top = j + k - n;
    let mus = mu_table(top);
    let sum = multiplier_sum(&expand_oracle(j, k), &mus, n);
    Ok((0..top as usize).map(|b| sum.coeff(b)).collect())
}

/// ν_b is flat and equals twice the closed-form constant.
pub fn verify_nu_flat(j: u32, k: u32, n: u32) -> Result<bool> {
    let nus = nu_sequence(j, k, n)?;
    let expect = closed_form_constant(j, k, n)? * Rational::integer(2);
    Ok(nus.iter().all(|v| *v == expect))
}

/// `(1−ρ²)/2 · Σ_{m=0}^{j+k−N} μ_m B_{N+m}` with `μ_0 = 2/(1−ρ²)`, compared
/// with the residual at the same ρ². Returns `(succinct, residual)`.
pub fn succinct_form_sides(
    j: u32,
    k: u32,
    n: u32,
    rho2: &Rational,
) -> Result<(Rational, Rational)> {
    check_n(j, k, n)?;
    let mu0 = mu_zero_value(rho2)?;
    let table = expand_oracle(j, k);
    let mus = mu_table(j + k - n);
    let mut sum = mu0 * table.b_value(n, rho2);
    for m in 1..=j + k - n {
        sum += mus[m as usize - 1].evaluate(rho2) * table.b_value(n + m, rho2);
    }
    let succinct = (Rational::one() - rho2) / Rational::integer(2) * sum;
    let residual = theorem_residual_with(&table, &mus, n)?
        .residual
        .evaluate(rho2);
    Ok((succinct, residual))
}

pub fn verify_succinct_form(j: u32, k: u32, n: u32, rho2: &Rational) -> Result<bool> {
    if n < j {
        return Err(Error::Domain(format!(
            "succinct form needs N >= j (got N = {n}, j = {j})"
        )));
    }
    let (a, b) = succinct_form_sides(j, k, n, rho2)?;
    Ok(a == b)
}

/// Per-table degeneracy: `B_N(1) = B_N(ρ) + (1−ρ²)/2 Σ_m μ_m(ρ) B_{N+m}(ρ)`
/// at one ρ², `N ≥ j`.
pub fn check_b_degeneracy(j: u32, k: u32, n: u32, rho2: &Rational) -> Result<bool> {
    check_n(j, k, n)?;
    if n < j {
        return Err(Error::Domain(format!(
            "relation only claimed for N >= j (got N = {n}, j = {j})"
        )));
    }
    let table = expand_oracle(j, k);
    let mus = mu_table(j + k - n);
    let tail: Rational = (1..=j + k - n)
        .map(|m| mus[m as usize - 1].evaluate(rho2) * table.b_value(n + m, rho2))
        .sum();
    let rhs = table.b_value(n, rho2) + (Rational::one() - rho2) / Rational::integer(2) * tail;
    Ok(table.b_value(n, &Rational::one()) == rhs)
}

/// Every `(j, k, N)` with `j ≤ jmax`, `k ≤ kmax`, `j ≤ N ≤ j+k`, in
/// lexicographic order.
pub fn theorem_tuples(jmax: u32, kmax: u32) -> Vec<(u32, u32, u32)> {
    let mut out = Vec::new();
    for j in 0..=jmax {
        for k in 0..=kmax {
            for n in j..=j + k {
                out.push((j, k, n));
            }
        }
    }
    out
}

/// Residuals for the whole grid; the first violation aborts with its tuple.
pub fn theorem_sweep(jmax: u32, kmax: u32) -> Result<Vec<TheoremReport>> {
    let mus = mu_table(jmax + kmax);
    let mut reports = Vec::new();
    for j in 0..=jmax {
        for k in 0..=kmax {
            let table = expand_oracle(j, k);
            for n in j..=j + k {
                let report = theorem_residual_with(&table, &mus, n)?;
                report.check()?;
                reports.push(report);
            }
        }
    }
    Ok(reports)
}

/// Random rational with numerator in `[lo, 1000]` and denominator in `[1, 1000]`.
pub fn sample_rational(rng: &mut impl Rng, lo: i64) -> Rational {
    Rational::new(rng.gen_range(lo..=1000), rng.gen_range(1..=1000))
}

/// First lemma over `n ≤ nmax`, integer `β ∈ [0, beta_max]` and `samples`
/// seeded rational α. Returns the number of identities checked.
pub fn lemma1_sweep(nmax: u32, beta_max: i64, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let alphas: Vec<Rational> = (0..samples)
        .map(|_| sample_rational(&mut rng, -1000))
        .collect();
    let mut checked = 0;
    for alpha in &alphas {
        for beta in 0..=beta_max {
            for n in 0..=nmax {
                let (lhs, rhs) = lemma1_sides(alpha, beta, n)?;
                if lhs != rhs {
                    return Err(Error::IdentityViolation(format!(
                        "lemma 1 at alpha = {alpha}, beta = {beta}, n = {n}: {lhs} != {rhs}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

/// Second lemma over `n ≤ nmax` and `samples` seeded positive rational β.
pub fn lemma2_sweep(nmax: u32, samples: usize, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let betas: Vec<Rational> = (0..samples).map(|_| sample_rational(&mut rng, 1)).collect();
    let mut checked = 0;
    for beta in &betas {
        for n in 0..=nmax {
            let (lhs, rhs) = lemma2_sides(beta, n)?;
            if lhs != rhs {
                return Err(Error::IdentityViolation(format!(
                    "lemma 2 at beta = {beta}, n = {n}: {lhs} != {rhs}"
                )));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
