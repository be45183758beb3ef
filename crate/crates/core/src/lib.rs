//! Exact coefficient tables and identities for the integrals
//! `I_jk(ρ, s) = ∫_0^{√(ρ²−s²)} z^{2j} (z² + s²)^k dz`.
//!
//! * [`rational`], [`exact`]: big rationals, Γ at half-integers with √π
//!   bookkeeping, Pochhammer symbols and binomials.
//! * [`poly`]: polynomials in ρ² ([`EvenPoly`]).
//! * [`coefficients`]: the β_l tables of `I_jk / √(ρ²−s²)` by independent routes.
//! * [`hypergeometric`]: terminating ₂F₁ and the multiplier polynomials μ_m.
//! * [`verify`]: ρ-independence residuals, ν_b flatness and the binomial lemmas.
//! * [`dedup`]: constraint rows at two radii, redundancy witnesses and exact rank.
//!
//! Everything is exact; no check in this crate has a tolerance.

pub mod coefficients;
pub mod dedup;
pub mod error;
pub mod exact;
pub mod hypergeometric;
pub mod poly;
pub mod rational;
pub mod verify;

pub use coefficients::{
    b_coeff_closed, b_coeff_shifted, b_coeff_sum, check_2f1_form, expand_oracle, BTable,
};
pub use dedup::{
    assemble_a, check_degeneracy, dedup, rank, ConstraintSystem, ConstraintTerm, DedupReport,
    Radius, RowTag,
};
pub use error::{Error, ParseRationalError, Result};
pub use exact::{gamma_exact, gen_binomial, half_binom, pochhammer, HalfInteger, SqrtPiScaled};
pub use hypergeometric::{hyp2f1_terminating, mu, mu_table, mu_via_2f1, mu_zero_value, MuPoly};
pub use poly::EvenPoly;
pub use rational::Rational;
pub use verify::{
    closed_form_constant, nu_sequence, theorem_residual, theorem_sweep, verify_lemma1,
    verify_lemma2, verify_succinct_form, TheoremReport,
};
