//! Fixtures shared by the criterion benches.

use cylsphere_core::{ConstraintSystem, ConstraintTerm, Rational};

/// Every `(j, k)` with `j + k <= degree`, all coefficients one, default radii.
pub fn triangular_system(degree: u32) -> ConstraintSystem {
    let terms = (0..=degree)
        .flat_map(|j| (0..=degree - j).map(move |k| (j, k)))
        .map(|(j, k)| ConstraintTerm {
            j,
            k,
            a: Rational::one(),
        })
        .collect();
    ConstraintSystem::with_default_radii(terms).expect("nonempty, unique terms")
}
