//! Exact special values: Γ at positive integers and half-integers, Pochhammer
//! symbols and binomial coefficients with rational upper index.
//!
//! Γ(n + 1/2) is a rational multiple of √π, so Γ values are carried as
//! [`SqrtPiScaled`]: a rational times an integer power of √π. Products and
//! quotients only add and subtract exponents, and converting back to a
//! [`Rational`] fails unless the exponent has cancelled to zero.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A positive or negative multiple of 1/2, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice: i64,
}

impl HalfInteger {
    pub const fn from_twice(twice: i64) -> Self {
        HalfInteger { twice }
    }

    /// The integer `n`.
    pub const fn int(n: i64) -> Self {
        HalfInteger { twice: 2 * n }
    }

    /// `n + 1/2`.
    pub const fn half(n: i64) -> Self {
        HalfInteger { twice: 2 * n + 1 }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(self.twice, 2)
    }
}

impl TryFrom<&Rational> for HalfInteger {
    type Error = Error;

    fn try_from(x: &Rational) -> Result<Self> {
        let twice = x * Rational::integer(2);
        twice
            .to_i64()
            .map(HalfInteger::from_twice)
            .ok_or_else(|| Error::Domain(format!("{x} is not an integer or half-odd-integer")))
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `value · π^(sqrt_pi_power / 2)`.
///
/// Equality compares both fields, so values with different √π exponents are
/// never equal even when one of them is zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqrtPiScaled {
    pub value: Rational,
    pub sqrt_pi_power: i32,
}

impl SqrtPiScaled {
    pub fn new(value: Rational, sqrt_pi_power: i32) -> Self {
        SqrtPiScaled {
            value,
            sqrt_pi_power,
        }
    }

    pub fn rational(value: Rational) -> Self {
        SqrtPiScaled::new(value, 0)
    }

    pub fn one() -> Self {
        SqrtPiScaled::rational(Rational::one())
    }

    /// √π itself.
    pub fn sqrt_pi() -> Self {
        SqrtPiScaled::new(Rational::one(), 1)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SqrtPiScaled::new(&self.value * c, self.sqrt_pi_power)
    }

    /// Checked conversion; fails unless every √π has cancelled.
    pub fn to_rational(&self) -> Result<Rational> {
        if self.sqrt_pi_power == 0 {
            Ok(self.value.clone())
        } else {
            Err(Error::ResidualSqrtPi(self.sqrt_pi_power))
        }
    }
}

impl Mul for SqrtPiScaled {
    type Output = SqrtPiScaled;
    fn mul(self, rhs: SqrtPiScaled) -> SqrtPiScaled {
        SqrtPiScaled::new(
            self.value * rhs.value,
            self.sqrt_pi_power + rhs.sqrt_pi_power,
        )
    }
}

impl Div for SqrtPiScaled {
    type Output = SqrtPiScaled;
    fn div(self, rhs: SqrtPiScaled) -> SqrtPiScaled {
        SqrtPiScaled::new(
            self.value / rhs.value,
            self.sqrt_pi_power - rhs.sqrt_pi_power,
        )
    }
}

impl fmt::Display for SqrtPiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sqrt_pi_power {
            0 => write!(f, "{}", self.value),
            e => write!(f, "{}·π^({e}/2)", self.value),
        }
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * i)
}

/// Integer binomial `C(n, r)`, zero when `r > n`.
pub fn binomial(n: u64, r: u64) -> BigInt {
    if r > n {
        return BigInt::from(0);
    }
    let r = r.min(n - r);
    // Running product stays integral: after step i it equals C(n - r + i, i).
    (1..=r).fold(BigInt::one(), |acc, i| acc * (n - r + i) / i)
}

/// Γ(x) for a positive integer or half-odd-integer `x`.
///
/// Γ(n) = (n-1)! with no √π; Γ(n + 1/2) = √π·(2n)!/(4ⁿ·n!).
pub fn gamma_exact(x: HalfInteger) -> Result<SqrtPiScaled> {
    if x.twice() <= 0 {
        return Err(Error::Domain(format!(
            "gamma is only defined here on positive half-integers, got {x}"
        )));
    }
    if x.is_integer() {
        let n = (x.twice() / 2) as u64;
        Ok(SqrtPiScaled::rational(Rational::from_bigint(factorial(
            n - 1,
        ))))
    } else {
        let n = ((x.twice() - 1) / 2) as u64;
        let numer = factorial(2 * n);
        let denom = BigInt::from(4).pow(n as u32) * factorial(n);
        Ok(SqrtPiScaled::new(Rational::from_bigints(numer, denom), 1))
    }
}

/// Rising factorial `x (x+1) ⋯ (x+n-1)`; one when `n = 0`.
pub fn pochhammer(x: &Rational, n: u32) -> Rational {
    // Work over a common denominator: x = p/q gives Π (p + i q) / qⁿ.
    let p = x.numer();
    let q = x.denom();
    let mut numer = BigInt::one();
    for i in 0..n {
        numer *= p + q * BigInt::from(i);
    }
    Rational::from_bigints(numer, q.pow(n))
}

/// Binomial coefficient `C(x, m) = x (x-1) ⋯ (x-m+1) / m!` for rational `x`.
pub fn gen_binomial(x: &Rational, m: u32) -> Rational {
    let p = x.numer();
    let q = x.denom();
    let mut numer = BigInt::one();
    for i in 0..m {
        numer *= p - q * BigInt::from(i);
    }
    Rational::from_bigints(numer, q.pow(m) * factorial(m as u64))
}

/// `C(k - 1/2, -1/2) = Γ(k+1/2) / (Γ(1/2) k!) = C(2k, k) / 4ᵏ`.
pub fn half_binom(k: u32) -> Rational {
    let k = k as u64;
    Rational::from_bigints(binomial(2 * k, k), BigInt::from(4).pow(k as u32))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gamma_spot_values() {
        assert_eq!(
            gamma_exact(HalfInteger::half(0)).unwrap(),
            SqrtPiScaled::new(Rational::one(), 1)
        );
        assert_eq!(
            gamma_exact(HalfInteger::half(2)).unwrap(),
            SqrtPiScaled::new(Rational::new(3, 4), 1)
        );
        assert_eq!(
            gamma_exact(HalfInteger::int(4)).unwrap(),
            SqrtPiScaled::rational(Rational::integer(6))
        );
        assert_eq!(
            gamma_exact(HalfInteger::int(1)).unwrap(),
            SqrtPiScaled::one()
        );
    }

    #[test]
    fn gamma_rejects_nonpositive() {
        assert!(matches!(
            gamma_exact(HalfInteger::int(0)),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            gamma_exact(HalfInteger::half(-1)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn half_integer_from_rational() {
        assert_eq!(
            HalfInteger::try_from(&Rational::new(5, 2)).unwrap(),
            HalfInteger::half(2)
        );
        assert_eq!(
            HalfInteger::try_from(&Rational::integer(3)).unwrap(),
            HalfInteger::int(3)
        );
        assert!(matches!(
            HalfInteger::try_from(&Rational::new(1, 3)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn sqrt_pi_bookkeeping() {
        let g = gamma_exact(HalfInteger::half(0)).unwrap();
        let sq = g.clone() * g.clone();
        assert_eq!(sq.sqrt_pi_power, 2);
        assert!(matches!(sq.to_rational(), Err(Error::ResidualSqrtPi(2))));
        assert_eq!((g.clone() / g).to_rational().unwrap(), Rational::one());
        // Zero with a stray √π is still not a rational zero.
        assert_ne!(
            SqrtPiScaled::new(Rational::zero(), 1),
            SqrtPiScaled::rational(Rational::zero())
        );
    }

    #[test]
    fn pochhammer_spot_values() {
        assert_eq!(pochhammer(&Rational::new(1, 2), 0), Rational::one());
        assert_eq!(pochhammer(&Rational::new(1, 2), 3), Rational::new(15, 8));
        assert_eq!(pochhammer(&Rational::integer(-2), 4), Rational::zero());
    }

    #[test]
    fn gen_binomial_spot_values() {
        assert_eq!(gen_binomial(&Rational::new(5, 2), 2), Rational::new(15, 8));
        assert_eq!(gen_binomial(&Rational::new(-7, 3), 0), Rational::one());
        assert_eq!(gen_binomial(&Rational::integer(3), 5), Rational::zero());
        assert_eq!(
            gen_binomial(&Rational::integer(10), 3),
            Rational::integer(120)
        );
    }

    #[test]
    fn half_binom_spot_values() {
        assert_eq!(half_binom(0), Rational::one());
        // Γ(3/2) / (Γ(1/2)·1!) through the gamma route.
        let via_gamma = (gamma_exact(HalfInteger::half(1)).unwrap()
            / gamma_exact(HalfInteger::half(0)).unwrap())
        .to_rational()
        .unwrap();
        assert_eq!(half_binom(1), via_gamma);
        assert_eq!(half_binom(1), Rational::new(1, 2));
        // C(6,3)/64 by hand.
        assert_eq!(half_binom(3), Rational::new(20, 64));
    }

    #[test]
    fn integer_binomial_matches_factorials() {
        for n in 0..30u64 {
            for r in 0..=n + 1 {
                let expect = if r > n {
                    BigInt::from(0)
                } else {
                    factorial(n) / (factorial(r) * factorial(n - r))
                };
                assert_eq!(binomial(n, r), expect, "C({n},{r})");
            }
        }
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-1000i64..=1000, 1i64..=1000).prop_map(|(p, q)| Rational::new(p, q))
    }

    #[test]
    fn gamma_recurrence_on_half_integers() {
        // x ranges over (0, 20] in steps of 1/2.
        for twice in 1..=40 {
            let x = HalfInteger::from_twice(twice);
            let next = HalfInteger::from_twice(twice + 2);
            let lhs = gamma_exact(next).unwrap();
            let rhs = gamma_exact(x).unwrap().scale(&x.to_rational());
            assert_eq!(lhs, rhs, "Γ({next}) vs {x}·Γ({x})");
        }
    }

    #[test]
    fn half_binom_is_pochhammer_over_factorial() {
        for k in 0..=50u32 {
            let expect =
                pochhammer(&Rational::new(1, 2), k) / Rational::from_bigint(factorial(k as u64));
            assert_eq!(half_binom(k), expect, "k = {k}");
        }
    }

    proptest! {
        #[test]
        fn pochhammer_splits(x in small_rational(), m in 0u32..=20, n in 0u32..=20) {
            let shifted = &x + Rational::integer(m as i64);
            prop_assert_eq!(
                pochhammer(&x, m + n),
                pochhammer(&x, m) * pochhammer(&shifted, n)
            );
        }

        #[test]
        fn pascal_rule(x in small_rational(), m in 1u32..=30) {
            let xm1 = &x - Rational::one();
            prop_assert_eq!(
                gen_binomial(&x, m),
                gen_binomial(&xm1, m) + gen_binomial(&xm1, m - 1)
            );
        }
    }
}
