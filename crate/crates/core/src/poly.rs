//! Dense polynomials in ρ².
//!
//! Every polynomial this crate manipulates is even in ρ, so [`EvenPoly`]
//! stores coefficients of powers of ρ² only: index `i` holds the coefficient
//! of ρ^(2i). **Degrees are reported in ρ² units**: `1 + ρ⁴` has degree 2.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::rational::Rational;

/// Polynomial in ρ² with exact coefficients. The zero polynomial has no
/// coefficients; otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "EvenPolyRepr", into = "EvenPolyRepr")]
pub struct EvenPoly {
    coeffs: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct EvenPolyRepr {
    rho2_coeffs: Vec<Rational>,
}

impl From<EvenPolyRepr> for EvenPoly {
    fn from(r: EvenPolyRepr) -> Self {
        EvenPoly::new(r.rho2_coeffs)
    }
}

impl From<EvenPoly> for EvenPolyRepr {
    fn from(p: EvenPoly) -> Self {
        EvenPolyRepr {
            rho2_coeffs: p.coeffs,
        }
    }
}

impl EvenPoly {
    /// Trailing zero coefficients are dropped.
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        EvenPoly { coeffs }
    }

    pub fn zero() -> Self {
        EvenPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        EvenPoly::new(vec![c])
    }

    /// `c · ρ^(2·power)`.
    pub fn monomial(c: Rational, power: usize) -> Self {
        if c.is_zero() {
            return EvenPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = c;
        EvenPoly { coeffs }
    }

    /// `1 - ρ²`.
    pub fn one_minus_rho2() -> Self {
        EvenPoly::new(vec![Rational::one(), Rational::integer(-1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of ρ^(2i), zero past the end.
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in ρ²; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return EvenPoly::zero();
        }
        EvenPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiply by ρ^(2·power).
    pub fn shift(&self, power: usize) -> Self {
        if self.is_zero() {
            return EvenPoly::zero();
        }
        let mut coeffs = vec![Rational::zero(); power];
        coeffs.extend(self.coeffs.iter().cloned());
        EvenPoly { coeffs }
    }

    /// Substitute a value for ρ² (Horner).
    pub fn evaluate(&self, rho2: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * rho2 + c)
    }

    /// The constant value if the polynomial does not depend on ρ.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.coeffs.len() {
            0 => Some(Rational::zero()),
            1 => Some(self.coeffs[0].clone()),
            _ => None,
        }
    }

    /// ρ-independence test: `(true, c)` for a constant, `(false, None)` otherwise.
    pub fn is_constant(&self) -> (bool, Option<Rational>) {
        let c = self.as_constant();
        (c.is_some(), c)
    }

    /// `1 + ρ² + ⋯ + ρ^(2d)`.
    pub fn geometric_sum(d: usize) -> Self {
        EvenPoly {
            coeffs: vec![Rational::one(); d + 1],
        }
    }
}

impl Add<&EvenPoly> for &EvenPoly {
    type Output = EvenPoly;
    fn add(self, rhs: &EvenPoly) -> EvenPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        EvenPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Add for EvenPoly {
    type Output = EvenPoly;
    fn add(self, rhs: EvenPoly) -> EvenPoly {
        &self + &rhs
    }
}

impl Sub<&EvenPoly> for &EvenPoly {
    type Output = EvenPoly;
    fn sub(self, rhs: &EvenPoly) -> EvenPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        EvenPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Sub for EvenPoly {
    type Output = EvenPoly;
    fn sub(self, rhs: EvenPoly) -> EvenPoly {
        &self - &rhs
    }
}

impl Mul<&EvenPoly> for &EvenPoly {
    type Output = EvenPoly;
    fn mul(self, rhs: &EvenPoly) -> EvenPoly {
        if self.is_zero() || rhs.is_zero() {
            return EvenPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        EvenPoly::new(out)
    }
}

impl Mul for EvenPoly {
    type Output = EvenPoly;
    fn mul(self, rhs: EvenPoly) -> EvenPoly {
        &self * &rhs
    }
}

impl Neg for &EvenPoly {
    type Output = EvenPoly;
    fn neg(self) -> EvenPoly {
        EvenPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for EvenPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})ρ^2")?,
                _ => write!(f, "({c})ρ^{}", 2 * i)?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn difference_of_squares() {
        let p = EvenPoly::one_minus_rho2();
        let q = EvenPoly::new(vec![r(1, 1), r(1, 1)]);
        assert_eq!(&p * &q, EvenPoly::new(vec![r(1, 1), r(0, 1), r(-1, 1)]));
    }

    #[test]
    fn evaluate_at_inner_radius() {
        let rho2 = r(7, 20) * r(7, 20);
        assert_eq!(rho2, r(49, 400));
        assert_eq!(EvenPoly::one_minus_rho2().evaluate(&rho2), r(351, 400));
    }

    #[test]
    fn scale_by_zero_is_zero() {
        let p = EvenPoly::new(vec![r(1, 2), r(3, 4)]);
        assert!(p.scale(&Rational::zero()).is_zero());
        assert_eq!(p.scale(&Rational::zero()).degree(), None);
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        let p = EvenPoly::new(vec![r(1, 1), r(0, 1), r(0, 1)]);
        assert_eq!(p.degree(), Some(0));
        let a = EvenPoly::new(vec![r(0, 1), r(1, 1)]);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn constancy() {
        assert_eq!(
            EvenPoly::constant(r(-1, 15)).is_constant(),
            (true, Some(r(-1, 15)))
        );
        let p = EvenPoly::new(vec![r(-1, 20), r(0, 1), r(1, 4)]);
        assert_eq!(p.is_constant(), (false, None));
        assert_eq!(
            EvenPoly::zero().is_constant(),
            (true, Some(Rational::zero()))
        );
    }

    #[test]
    fn geometric_sums() {
        assert_eq!(
            EvenPoly::geometric_sum(0),
            EvenPoly::constant(Rational::one())
        );
        assert_eq!(
            EvenPoly::geometric_sum(2),
            EvenPoly::new(vec![r(1, 1), r(1, 1), r(1, 1)])
        );
        let telescoped = &EvenPoly::one_minus_rho2() * &EvenPoly::geometric_sum(3);
        assert_eq!(
            telescoped,
            &EvenPoly::constant(Rational::one()) - &EvenPoly::monomial(Rational::one(), 4)
        );
    }

    #[test]
    fn json_shape() {
        let p = EvenPoly::new(vec![r(3, 4), r(1, 4)]);
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"rho2_coeffs":["3/4","1/4"]}"#);
        let back: EvenPoly = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
        // Non-canonical input is normalized on the way in.
        let padded: EvenPoly = serde_json::from_str(r#"{"rho2_coeffs":["1","0"]}"#).unwrap();
        assert_eq!(padded.degree(), Some(0));
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-50i64..=50, 1i64..=20).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn poly() -> impl Strategy<Value = EvenPoly> {
        prop::collection::vec(rational(), 0..=40).prop_map(EvenPoly::new)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn ring_axioms(a in poly(), b in poly(), c in poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
        }

        #[test]
        fn evaluation_is_multiplicative(a in poly(), b in poly(), x in rational()) {
            prop_assert_eq!((&a * &b).evaluate(&x), a.evaluate(&x) * b.evaluate(&x));
        }
    }
}
