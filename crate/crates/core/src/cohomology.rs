//! Degreewise cohomology of Sullivan models by exact linear algebra.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Degree, Monomial, Polynomial, SullivanModel};
use crate::linalg::{self, Echelon, SparseVec};

/// Matrix of `d: (ΛV)^k → (ΛV)^{k+1}` in the monomial bases, stored by column.
#[derive(Clone, Debug)]
pub struct CochainMatrix {
    pub degree: Degree,
    pub source_basis: Vec<Monomial>,
    pub target_basis: Vec<Monomial>,
    /// Column `j` is `d(source_basis[j])` in target coordinates.
    pub columns: Vec<SparseVec>,
}

impl CochainMatrix {
    pub fn rows(&self) -> usize {
        self.target_basis.len()
    }

    pub fn cols(&self) -> usize {
        self.source_basis.len()
    }

    pub fn rank(&self) -> usize {
        linalg::rank(&self.columns)
    }
}

pub(crate) fn coordinates(p: &Polynomial, index: &HashMap<&Monomial, usize>) -> SparseVec {
    let mut v: SparseVec = p
        .terms()
        .map(|(m, c)| {
            (
                *index.get(m).expect("monomial of the expected degree"),
                c.clone(),
            )
        })
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

pub fn cochain_matrix(model: &SullivanModel, degree: Degree) -> CochainMatrix {
    let source_basis = model.monomial_basis(degree);
    let target_basis = model.monomial_basis(degree + 1);
    let index: HashMap<&Monomial, usize> = target_basis
        .iter()
        .enumerate()
        .map(|(i, m)| (m, i))
        .collect();
    let columns = source_basis
        .iter()
        .map(|m| coordinates(&model.d_monomial(m), &index))
        .collect();
    CochainMatrix {
        degree,
        source_basis,
        target_basis,
        columns,
    }
}

fn rank_of_d(model: &SullivanModel, degree: Degree) -> usize {
    cochain_matrix(model, degree).rank()
}

/// `dim H^k`.
pub fn betti_number(model: &SullivanModel, k: Degree) -> usize {
    let dim = model.monomial_basis(k).len();
    let outgoing = rank_of_d(model, k);
    let incoming = if k == 0 { 0 } else { rank_of_d(model, k - 1) };
    dim - outgoing - incoming
}

/// Whether the table ends because cohomology vanished or because the cap cut it off.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CapStatus {
    /// `betti(cap) = 0`; the top nonzero degree lies strictly below the cap.
    BelowCap,
    /// `betti(cap) != 0`; higher cohomology was not examined.
    NonzeroAtCap,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiTable {
    /// `betti[k] = dim H^k` for `0 <= k <= cap`.
    pub betti: Vec<usize>,
    pub cap: Degree,
    /// Largest `k <= cap` with `betti[k] != 0`.
    pub formal_dimension: Degree,
    pub total: usize,
    pub status: CapStatus,
}

impl BettiTable {
    pub fn get(&self, k: Degree) -> usize {
        self.betti.get(k as usize).copied().unwrap_or(0)
    }

    /// `Σ (-1)^k betti(k)`.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }

    /// Nonzero entries as `(degree, betti)`.
    pub fn nonzero(&self) -> Vec<(Degree, usize)> {
        self.betti
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(k, &b)| (k as Degree, b))
            .collect()
    }
}

/// All Betti numbers in degrees `0..=cap`. Ranks of `d` are computed once per
/// degree, in parallel.
pub fn betti_table(model: &SullivanModel, cap: Degree) -> BettiTable {
    let data: Vec<(usize, usize)> = (0..=cap)
        .into_par_iter()
        .map(|k| {
            let m = cochain_matrix(model, k);
            (m.cols(), m.rank())
        })
        .collect();
    let betti: Vec<usize> = (0..data.len())
        .map(|k| {
            let incoming = if k == 0 { 0 } else { data[k - 1].1 };
            data[k].0 - data[k].1 - incoming
        })
        .collect();
    let formal_dimension = betti.iter().rposition(|&b| b != 0).unwrap_or(0) as Degree;
    let status = if betti[cap as usize] != 0 {
        CapStatus::NonzeroAtCap
    } else {
        CapStatus::BelowCap
    };
    BettiTable {
        total: betti.iter().sum(),
        betti,
        cap,
        formal_dimension,
        status,
    }
}

/// `betti(k) = betti(n-k)` for all `k`, with `n` the formal dimension.
pub fn poincare_check(table: &BettiTable) -> bool {
    let n = table.formal_dimension;
    (0..=n).all(|k| table.get(k) == table.get(n - k))
}

/// Cocycles representing a basis of `H^k`.
pub fn cohomology_representatives(model: &SullivanModel, k: Degree) -> Vec<Polynomial> {
    let matrix = cochain_matrix(model, k);
    let mut boundaries = Echelon::new();
    if k > 0 {
        for col in cochain_matrix(model, k - 1).columns {
            boundaries.insert(&col);
        }
    }
    let basis = &matrix.source_basis;
    let mut reps = Vec::new();
    for z in linalg::kernel(&matrix.columns) {
        if boundaries.insert(&z) {
            reps.push(polynomial_from(model, basis, &z));
        }
    }
    reps
}

pub(crate) fn polynomial_from(
    model: &SullivanModel,
    basis: &[Monomial],
    v: &SparseVec,
) -> Polynomial {
    Polynomial::from_terms(
        model.algebra(),
        v.iter().map(|(j, c)| (basis[*j].clone(), c.clone())),
    )
}

/// Outcome of comparing the image of `H(total) → H(target)` with `H(target)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurjectivityReport {
    pub surjective: bool,
    /// `(degree, dim of image, dim H^k(target))` for every degree examined.
    pub per_degree: Vec<(Degree, usize, usize)>,
}

/// Checks whether the algebra map `total → target` given by `images` (one
/// polynomial over `target` per generator of `total`, commuting with `d`)
/// is surjective in cohomology through `max_degree`.
pub fn cohomology_surjects(
    total: &SullivanModel,
    target: &SullivanModel,
    images: &[Polynomial],
    max_degree: Degree,
) -> SurjectivityReport {
    let per_degree: Vec<(Degree, usize, usize)> = (0..=max_degree)
        .into_par_iter()
        .map(|k| {
            let target_basis = target.monomial_basis(k);
            let index: HashMap<&Monomial, usize> = target_basis
                .iter()
                .enumerate()
                .map(|(i, m)| (m, i))
                .collect();
            let mut span = Echelon::new();
            if k > 0 {
                for col in cochain_matrix(target, k - 1).columns {
                    span.insert(&col);
                }
            }
            let boundary_rank = span.rank();
            for rep in cohomology_representatives(total, k) {
                let image = rep.substitute(target.algebra(), images);
                span.insert(&coordinates(&image, &index));
            }
            (k, span.rank() - boundary_rank, betti_number(target, k))
        })
        .collect();
    SurjectivityReport {
        surjective: per_degree.iter().all(|(_, image, dim)| image == dim),
        per_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{FreeAlgebra, Generator};

    fn model(gens: &[(&str, Degree)], diff: &[&str]) -> SullivanModel {
        let alg =
            FreeAlgebra::new(gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect()).unwrap();
        let d = diff
            .iter()
            .map(|s| crate::dsl::parse_polynomial(&alg, s).unwrap())
            .collect();
        SullivanModel::new("t", alg, d).unwrap()
    }

    #[test]
    fn sphere_and_cp3() {
        let s7 = model(&[("y", 7)], &["0"]);
        assert_eq!(betti_number(&s7, 7), 1);
        assert_eq!(betti_number(&s7, 3), 0);
        let cp3 = model(&[("x", 2), ("y", 7)], &["0", "x^4"]);
        let t = betti_table(&cp3, 6);
        assert_eq!(t.nonzero(), vec![(0, 1), (2, 1), (4, 1), (6, 1)]);
        assert_eq!(t.total, 4);
        assert_eq!(t.status, CapStatus::NonzeroAtCap);
        assert!(poincare_check(&t));
    }

    #[test]
    fn even_sphere_and_odd_product() {
        let s4 = model(&[("x", 4), ("y", 7)], &["0", "x^2"]);
        let t = betti_table(&s4, 8);
        assert_eq!(t.nonzero(), vec![(0, 1), (4, 1)]);
        assert_eq!(
            (t.total, t.formal_dimension, t.status),
            (2, 4, CapStatus::BelowCap)
        );
        let s3s5 = model(&[("a", 3), ("b", 5)], &["0", "0"]);
        let t = betti_table(&s3s5, 8);
        assert_eq!(t.nonzero(), vec![(0, 1), (3, 1), (5, 1), (8, 1)]);
    }

    #[test]
    fn non_minimal_hopf_total() {
        let m = model(&[("f", 3), ("b", 4), ("c", 7)], &["b", "0", "b^2"]);
        let t = betti_table(&m, 7);
        assert_eq!(t.nonzero(), vec![(0, 1), (7, 1)]);
        let reps = cohomology_representatives(&m, 7);
        assert_eq!(reps.len(), 1);
        assert!(m.d(&reps[0]).is_zero());
    }

    #[test]
    fn hyperbolic_truncation_breaks_duality() {
        let m = model(&[("x", 2), ("w", 2), ("y", 3)], &["0", "0", "x*w"]);
        assert_eq!(betti_number(&m, 2), 2);
        let t = betti_table(&m, 6);
        assert!(!poincare_check(&t));
    }
}
