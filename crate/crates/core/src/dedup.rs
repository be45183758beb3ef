//! Constraint rows for `Q(ρ, s) = Σ a_jk I_jk(ρ, s)` at two radii, and the
//! count of independent rows.
//!
//! For each radius, `Q/√(ρ²−s²) = Σ_l A_l(ρ) s^{2l}` with `l = 0..=L`,
//! `L = max(j+k)`. Row `l` maps the unknowns `(a_jk)` to `A_l(ρ)`. Stacking
//! both radii gives `2(L+1)` rows. Every outer row with `l ≥ max j` is an
//! exact combination of inner rows `l..=L`, so those rows are redundant.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::coefficients::{expand_oracle, BTable};
use crate::error::{Error, Result};
use crate::hypergeometric::mu_table;
use crate::rational::Rational;
use crate::verify::sample_rational;

/// One `a_jk I_jk` term of Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstraintTerm {
    pub j: u32,
    pub k: u32,
    pub a: Rational,
}

/// Terms plus the two radii.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawSystem")]
pub struct ConstraintSystem {
    terms: Vec<ConstraintTerm>,
    rho_inner: Rational,
    rho_outer: Rational,
}

#[derive(Deserialize)]
struct RawSystem {
    terms: Vec<ConstraintTerm>,
    rho_inner: Option<Rational>,
    rho_outer: Option<Rational>,
}

impl TryFrom<RawSystem> for ConstraintSystem {
    type Error = Error;

    fn try_from(raw: RawSystem) -> Result<Self> {
        ConstraintSystem::new(
            raw.terms,
            raw.rho_inner
                .unwrap_or_else(ConstraintSystem::default_inner),
            raw.rho_outer.unwrap_or_else(Rational::one),
        )
    }
}

impl ConstraintSystem {
    /// Inner boundary radius used when none is given.
    pub fn default_inner() -> Rational {
        Rational::new(7, 20)
    }

    /// Requires nonempty terms with unique `(j, k)` and `0 < ρ_inner ≤ ρ_outer`.
    /// Equal radii are accepted as a degenerate input.
    pub fn new(
        terms: Vec<ConstraintTerm>,
        rho_inner: Rational,
        rho_outer: Rational,
    ) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSystem("no terms".into()));
        }
        let mut seen = HashSet::new();
        for t in &terms {
            if !seen.insert((t.j, t.k)) {
                return Err(Error::InvalidSystem(format!(
                    "duplicate term (j,k) = ({},{})",
                    t.j, t.k
                )));
            }
        }
        if !rho_inner.is_positive() {
            return Err(Error::InvalidSystem(format!(
                "rho_inner must be positive, got {rho_inner}"
            )));
        }
        if rho_inner > rho_outer {
            return Err(Error::InvalidSystem(format!(
                "rho_inner = {rho_inner} exceeds rho_outer = {rho_outer}"
            )));
        }
        Ok(ConstraintSystem {
            terms,
            rho_inner,
            rho_outer,
        })
    }

    /// Default radii 7/20 and 1.
    pub fn with_default_radii(terms: Vec<ConstraintTerm>) -> Result<Self> {
        ConstraintSystem::new(terms, ConstraintSystem::default_inner(), Rational::one())
    }

    /// All `a_jk = 1`.
    pub fn from_pairs(pairs: &[(u32, u32)]) -> Result<Self> {
        ConstraintSystem::with_default_radii(
            pairs
                .iter()
                .map(|&(j, k)| ConstraintTerm {
                    j,
                    k,
                    a: Rational::one(),
                })
                .collect(),
        )
    }

    pub fn terms(&self) -> &[ConstraintTerm] {
        &self.terms
    }

    pub fn rho_inner(&self) -> &Rational {
        &self.rho_inner
    }

    pub fn rho_outer(&self) -> &Rational {
        &self.rho_outer
    }

    pub fn with_radii(&self, rho_inner: Rational, rho_outer: Rational) -> Result<Self> {
        ConstraintSystem::new(self.terms.clone(), rho_inner, rho_outer)
    }

    /// Replace every `a_jk` with a seeded random rational.
    pub fn with_random_coefficients(&self, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = self.clone();
        for t in &mut out.terms {
            t.a = sample_rational(&mut rng, -1000);
        }
        out
    }

    /// L = max(j + k).
    pub fn max_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|t| t.j + t.k)
            .max()
            .expect("nonempty")
    }

    pub fn max_j(&self) -> u32 {
        self.terms.iter().map(|t| t.j).max().expect("nonempty")
    }

    fn tables(&self) -> Vec<BTable> {
        self.terms.iter().map(|t| expand_oracle(t.j, t.k)).collect()
    }
}

/// Rows `l = 0..=L` at radius ρ; entry `t` of row `l` is `β_l^{(j,k)} ρ^{2(j+k−l)}`
/// for term `t`, zero where `l > j+k`.
pub fn assemble_a(system: &ConstraintSystem, rho: &Rational) -> Vec<Vec<Rational>> {
    rows_from_tables(&system.tables(), system.max_degree(), &(rho * rho))
}

fn rows_from_tables(tables: &[BTable], max_degree: u32, rho2: &Rational) -> Vec<Vec<Rational>> {
    (0..=max_degree)
        .map(|l| tables.iter().map(|t| t.b_value(l, rho2)).collect())
        .collect()
}

/// `A_l(ρ)` for the system's own coefficients.
pub fn a_values(system: &ConstraintSystem, rho: &Rational) -> Vec<Rational> {
    assemble_a(system, rho)
        .iter()
        .map(|row| row.iter().zip(&system.terms).map(|(x, t)| x * &t.a).sum())
        .collect()
}

fn half_gap(rho: &Rational) -> Rational {
    (Rational::one() - rho * rho) / Rational::integer(2)
}

/// Degeneracy relation for row `N ≥ max j`, evaluated with the system's
/// `a_jk`:
///
/// ```text
/// A_N(ρ_o) = A_N(ρ_i) + h(ρ_i) Σ_m μ_m(ρ_i) A_{N+m}(ρ_i)
///                     − h(ρ_o) Σ_m μ_m(ρ_o) A_{N+m}(ρ_o),   h(ρ) = (1−ρ²)/2
/// ```
///
/// With `ρ_o = 1` the last sum vanishes.
pub fn check_degeneracy(system: &ConstraintSystem, n: u32) -> Result<bool> {
    let (max_j, big_l) = (system.max_j(), system.max_degree());
    if n < max_j {
        return Err(Error::Domain(format!(
            "the degeneracy relation is only claimed for N >= max j = {max_j}, got N = {n}"
        )));
    }
    if n > big_l {
        return Err(Error::Index {
            what: "N",
            index: n as i64,
            lo: max_j as i64,
            hi: big_l as i64,
        });
    }
    let mus = mu_table(big_l - n);
    let side = |rho: &Rational| -> Rational {
        let a = a_values(system, rho);
        let rho2 = rho * rho;
        let tail: Rational = (1..=big_l - n)
            .map(|m| mus[m as usize - 1].evaluate(&rho2) * &a[(n + m) as usize])
            .sum();
        &a[n as usize] + half_gap(rho) * tail
    };
    let lhs = a_values(system, &system.rho_outer)[n as usize].clone();
    let outer_tail = side(&system.rho_outer) - &lhs;
    Ok(lhs == side(&system.rho_inner) - outer_tail)
}

/// Which radius a row belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Radius {
    Inner,
    Outer,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RowTag {
    pub radius: Radius,
    pub l: u32,
}

/// `outer row l = Σ_i inner_coeffs[i] · inner row i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub l: u32,
    pub inner_coeffs: Vec<Rational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankStatus {
    EqualsPrediction,
    /// Degenerate coefficients or too few terms to reach the bound.
    BelowPrediction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DedupReport {
    pub total_rows: usize,
    pub rank: usize,
    pub redundant_rows: Vec<RowTag>,
    pub predicted_independent: usize,
    pub status: RankStatus,
    pub witnesses: Vec<Witness>,
}

/// Coefficients over inner rows `0..=L` reproducing outer row `l` for every
/// `l ≥ max j`, built from `L` downward since each outer row also leans on
/// the outer rows above it.
pub fn degeneracy_witnesses(system: &ConstraintSystem) -> Vec<Witness> {
    let big_l = system.max_degree();
    let max_j = system.max_j();
    let mus = mu_table(big_l);
    let rho2_in = &system.rho_inner * &system.rho_inner;
    let rho2_out = &system.rho_outer * &system.rho_outer;
    let mu_in: Vec<Rational> = mus.iter().map(|m| m.evaluate(&rho2_in)).collect();
    let mu_out: Vec<Rational> = mus.iter().map(|m| m.evaluate(&rho2_out)).collect();
    let (h_in, h_out) = (half_gap(&system.rho_inner), half_gap(&system.rho_outer));

    let width = big_l as usize + 1;
    // by_l[l] holds the witness for outer row l once computed.
    let mut by_l: Vec<Option<Vec<Rational>>> = vec![None; width];
    for n in (max_j..=big_l).rev() {
        let mut c = vec![Rational::zero(); width];
        c[n as usize] = Rational::one();
        for m in 1..=big_l - n {
            let idx = (n + m) as usize;
            c[idx] += &h_in * &mu_in[m as usize - 1];
            let above = by_l[idx].as_ref().expect("computed on an earlier pass");
            let w = &h_out * &mu_out[m as usize - 1];
            for (ci, ai) in c.iter_mut().zip(above) {
                *ci -= &(&w * ai);
            }
        }
        by_l[n as usize] = Some(c);
    }
    (max_j..=big_l)
        .map(|l| Witness {
            l,
            inner_coeffs: by_l[l as usize].take().expect("filled above"),
        })
        .collect()
}

/// Apply a witness to the inner rows.
pub fn combine_rows(inner: &[Vec<Rational>], coeffs: &[Rational]) -> Vec<Rational> {
    let width = inner.first().map_or(0, Vec::len);
    (0..width)
        .map(|t| inner.iter().zip(coeffs).map(|(row, c)| c * &row[t]).sum())
        .collect()
}

/// Stack both radii, verify every witness exactly, and compute the rank.
pub fn dedup(system: &ConstraintSystem) -> Result<DedupReport> {
    let big_l = system.max_degree();
    let max_j = system.max_j();
    let tables = system.tables();
    let inner = rows_from_tables(&tables, big_l, &(system.rho_inner() * system.rho_inner()));
    let outer = rows_from_tables(&tables, big_l, &(system.rho_outer() * system.rho_outer()));

    let witnesses = degeneracy_witnesses(system);
    for w in &witnesses {
        if combine_rows(&inner, &w.inner_coeffs) != outer[w.l as usize] {
            return Err(Error::IdentityViolation(format!(
                "outer row l = {} is not reproduced by its degeneracy combination",
                w.l
            )));
        }
    }

    let stacked: Vec<Vec<Rational>> = inner.iter().chain(&outer).cloned().collect();
    let total_rows = stacked.len();
    let rank = rank(&stacked);
    let redundant_rows: Vec<RowTag> = (max_j..=big_l)
        .map(|l| RowTag {
            radius: Radius::Outer,
            l,
        })
        .collect();
    let predicted_independent = system.terms.len().min(total_rows - redundant_rows.len());
    if rank > predicted_independent {
        return Err(Error::IdentityViolation(format!(
            "rank {rank} exceeds the predicted bound {predicted_independent}"
        )));
    }
    let status = if rank == predicted_independent {
        RankStatus::EqualsPrediction
    } else {
        RankStatus::BelowPrediction
    };
    Ok(DedupReport {
        total_rows,
        rank,
        redundant_rows,
        predicted_independent,
        status,
        witnesses,
    })
}

/// Scale a rational row to integers by the lcm of its denominators.
fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let lcm = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect()
}

/// Exact rank by fraction-free (Bareiss) elimination.
///
/// Rows are first scaled to integers. Each step picks, among the remaining
/// rows, the nonzero pivot of least magnitude; every division by the
/// previous pivot is exact.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut m: Vec<Vec<BigInt>> = rows.iter().map(|r| clear_denominators(r)).collect();
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut r = 0;
    for col in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(p) = (r..nrows)
            .filter(|&i| !m[i][col].is_zero())
            .min_by(|&a, &b| m[a][col].abs().cmp(&m[b][col].abs()))
        else {
            continue;
        };
        m.swap(r, p);
        let (head, tail) = m.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = &pivot_row[col];
        for row in tail.iter_mut() {
            let factor = row[col].clone();
            for c in col + 1..ncols {
                let num = pivot * &row[c] - &factor * &pivot_row[c];
                debug_assert!((&num % &prev).is_zero(), "Bareiss division must be exact");
                row[c] = num / &prev;
            }
            row[col] = BigInt::zero();
        }
        prev = pivot.clone();
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    /// Plain Gauss-Jordan over rationals, the reference for [`rank`].
    fn rank_by_rational_elimination(rows: &[Vec<Rational>]) -> usize {
        let mut m = rows.to_vec();
        let ncols = m.first().map_or(0, Vec::len);
        let mut r = 0;
        for col in 0..ncols {
            let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else {
                continue;
            };
            m.swap(r, p);
            let inv = m[r][col].recip();
            let pivot_row: Vec<Rational> = m[r].iter().map(|x| x * &inv).collect();
            for (i, row) in m.iter_mut().enumerate() {
                if i != r && !row[col].is_zero() {
                    let f = row[col].clone();
                    for (x, p) in row.iter_mut().zip(&pivot_row) {
                        *x -= &(&f * p);
                    }
                }
            }
            m[r] = pivot_row;
            r += 1;
        }
        r
    }

    #[test]
    fn rows_for_single_constant_term() {
        let sys = ConstraintSystem::from_pairs(&[(0, 0)]).unwrap();
        assert_eq!(assemble_a(&sys, &Rational::one()), vec![vec![r(1, 1)]]);
    }

    #[test]
    fn rows_for_three_terms() {
        let sys = ConstraintSystem::from_pairs(&[(0, 0), (0, 1), (1, 0)]).unwrap();
        let rho = r(7, 20);
        let rho2 = &rho * &rho;
        let third = &rho2 / r(3, 1);
        assert_eq!(
            assemble_a(&sys, &rho),
            vec![
                vec![r(1, 1), third.clone(), third],
                vec![r(0, 1), r(2, 3), r(-1, 3)],
            ]
        );
    }

    #[test]
    fn rows_for_11() {
        let sys = ConstraintSystem::from_pairs(&[(1, 1)]).unwrap();
        assert_eq!(
            assemble_a(&sys, &Rational::one()),
            vec![vec![r(1, 5)], vec![r(-1, 15)], vec![r(-2, 15)]]
        );
    }

    #[test]
    fn degeneracy_examples() {
        let sys = ConstraintSystem::from_pairs(&[(0, 0)]).unwrap();
        assert!(check_degeneracy(&sys, 0).unwrap());

        let sys = ConstraintSystem::from_pairs(&[(0, 1), (1, 0)])
            .unwrap()
            .with_random_coefficients(3);
        assert!(check_degeneracy(&sys, 1).unwrap());
        let a = &sys.terms()[0].a;
        let b = &sys.terms()[1].a;
        let expect = (r(2, 1) * a - b) / r(3, 1);
        assert_eq!(a_values(&sys, &r(7, 20))[1], expect);
        assert_eq!(a_values(&sys, &Rational::one())[1], expect);

        let sys = ConstraintSystem::from_pairs(&[(1, 1)]).unwrap();
        assert!(check_degeneracy(&sys, 1).unwrap());
        assert!(matches!(check_degeneracy(&sys, 0), Err(Error::Domain(_))));
        assert!(matches!(
            check_degeneracy(&sys, 3),
            Err(Error::Index { .. })
        ));
    }

    #[test]
    fn degeneracy_with_general_outer_radius() {
        let sys = ConstraintSystem::new(
            vec![
                ConstraintTerm {
                    j: 1,
                    k: 3,
                    a: r(2, 7),
                },
                ConstraintTerm {
                    j: 0,
                    k: 4,
                    a: r(-5, 3),
                },
                ConstraintTerm {
                    j: 2,
                    k: 2,
                    a: r(11, 2),
                },
            ],
            r(1, 3),
            r(9, 5),
        )
        .unwrap();
        for n in 2..=4 {
            assert!(check_degeneracy(&sys, n).unwrap());
        }
    }

    #[test]
    fn dedup_examples() {
        let rep = dedup(&ConstraintSystem::from_pairs(&[(0, 0)]).unwrap()).unwrap();
        assert_eq!(
            (rep.total_rows, rep.rank, rep.predicted_independent),
            (2, 1, 1)
        );
        assert_eq!(
            rep.redundant_rows,
            vec![RowTag {
                radius: Radius::Outer,
                l: 0
            }]
        );

        let rep = dedup(&ConstraintSystem::from_pairs(&[(0, 0), (0, 1), (1, 0)]).unwrap()).unwrap();
        assert_eq!(
            (rep.total_rows, rep.rank, rep.predicted_independent),
            (4, 3, 3)
        );
        assert_eq!(
            rep.redundant_rows,
            vec![RowTag {
                radius: Radius::Outer,
                l: 1
            }]
        );
        assert_eq!(rep.status, RankStatus::EqualsPrediction);

        let rep = dedup(&ConstraintSystem::from_pairs(&[(1, 1)]).unwrap()).unwrap();
        assert_eq!(
            (rep.total_rows, rep.rank, rep.predicted_independent),
            (6, 1, 1)
        );
    }

    #[test]
    fn equal_radii_collapse_rank() {
        let pairs: Vec<(u32, u32)> = (0..=3).flat_map(|j| (0..=3).map(move |k| (j, k))).collect();
        let sys = ConstraintSystem::from_pairs(&pairs).unwrap();
        let flat = sys.with_radii(r(1, 2), r(1, 2)).unwrap();
        let rep = dedup(&flat).unwrap();
        assert!(rep.rank <= flat.max_degree() as usize + 1);
        assert!(dedup(&sys).unwrap().rank > rep.rank);
    }

    #[test]
    fn system_validation() {
        assert!(matches!(
            ConstraintSystem::from_pairs(&[]),
            Err(Error::InvalidSystem(_))
        ));
        assert!(matches!(
            ConstraintSystem::from_pairs(&[(1, 2), (1, 2)]),
            Err(Error::InvalidSystem(_))
        ));
        let t = vec![ConstraintTerm {
            j: 0,
            k: 0,
            a: r(1, 1),
        }];
        assert!(ConstraintSystem::new(t.clone(), r(3, 2), r(1, 1)).is_err());
        assert!(ConstraintSystem::new(t, r(0, 1), r(1, 1)).is_err());
    }

    #[test]
    fn system_json_defaults() {
        let sys: ConstraintSystem =
            serde_json::from_str(r#"{"terms":[{"j":0,"k":1,"a":"2/3"}]}"#).unwrap();
        assert_eq!(sys.rho_inner(), &r(7, 20));
        assert_eq!(sys.rho_outer(), &r(1, 1));
        let bad = serde_json::from_str::<ConstraintSystem>(
            r#"{"terms":[{"j":0,"k":1,"a":"2/3"}],"rho_inner":"2","rho_outer":"1"}"#,
        );
        assert!(bad.is_err());
    }

    fn rational() -> impl Strategy<Value = Rational> {
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n, d))
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<Rational>>> {
        (1usize..=7, 1usize..=7).prop_flat_map(|(rows, cols)| {
            prop::collection::vec(prop::collection::vec(rational(), cols), rows)
        })
    }

    fn random_system() -> impl Strategy<Value = ConstraintSystem> {
        prop::collection::hash_set((0u32..=4, 0u32..=4), 1..=8).prop_map(|set| {
            let mut pairs: Vec<_> = set.into_iter().collect();
            pairs.sort();
            ConstraintSystem::from_pairs(&pairs).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bareiss_matches_gauss_jordan(m in matrix()) {
            prop_assert_eq!(rank(&m), rank_by_rational_elimination(&m));
        }

        #[test]
        fn rank_invariant_under_column_scaling_and_row_permutation(
            sys in random_system(),
            scale in (1i64..=9, 1i64..=9),
            rot in 0usize..16,
        ) {
            let inner = assemble_a(&sys, sys.rho_inner());
            let outer = assemble_a(&sys, sys.rho_outer());
            let mut rows: Vec<Vec<Rational>> = inner.into_iter().chain(outer).collect();
            let base = rank(&rows);
            let c = Rational::new(scale.0, scale.1);
            for row in &mut rows {
                row[0] = &row[0] * &c;
            }
            let len = rows.len();
            rows.rotate_left(rot % len);
            rows.swap(0, len - 1);
            prop_assert_eq!(rank(&rows), base);
        }

        #[test]
        fn witnesses_reproduce_outer_rows(sys in random_system()) {
            let inner = assemble_a(&sys, sys.rho_inner());
            let outer = assemble_a(&sys, sys.rho_outer());
            for w in degeneracy_witnesses(&sys) {
                prop_assert_eq!(combine_rows(&inner, &w.inner_coeffs), outer[w.l as usize].clone());
            }
        }
    }
}
