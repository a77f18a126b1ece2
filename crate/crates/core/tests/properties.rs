use std::sync::Arc;

use hilali_core::algebra::{Degree, FreeAlgebra, Generator, Polynomial, SullivanModel};
use hilali_core::asymptotics::{case_bounds, two_stage_bound};
use hilali_core::catalog::{self, RandomOptions, TwoStageParams};
use hilali_core::cohomology;
use hilali_core::linalg::{self, SparseVec};
use hilali_core::rational::q;
use num_bigint::BigInt;
use num_traits::Zero;
use proptest::prelude::*;

fn params() -> impl Strategy<Value = TwoStageParams> {
    (0usize..=2, 0usize..=2, 0usize..=2).prop_map(|(n, m, r)| match (n, m) {
        (0, 0) => TwoStageParams { n: 0, m: 1, r: 0 },
        (0, 1) => TwoStageParams { n: 0, m: 1, r: 0 },
        _ => TwoStageParams { n, m, r },
    })
}

fn two_stage(seed: u64, p: TwoStageParams) -> SullivanModel {
    catalog::random_two_stage(seed, p, &RandomOptions::default())
        .unwrap()
        .model
}

fn poly(m: &SullivanModel, degree: Degree, coeffs: &[i64]) -> Polynomial {
    let basis = m.monomial_basis(degree);
    Polynomial::from_terms(
        m.algebra(),
        basis
            .into_iter()
            .zip(coeffs.iter().cycle())
            .map(|(mono, &c)| (mono, q(c))),
    )
}

fn sign(a: Degree, b: Degree) -> i64 {
    if a % 2 == 1 && b % 2 == 1 {
        -1
    } else {
        1
    }
}

/// Coefficients of `∏_even (1 − t^d)^{-1} · ∏_odd (1 + t^d)` up to `t^top`.
fn hilbert_series(degrees: &[Degree], top: usize) -> Vec<u64> {
    let mut series = vec![0u64; top + 1];
    series[0] = 1;
    for &d in degrees {
        let d = d as usize;
        if d.is_multiple_of(2) {
            for k in d..=top {
                series[k] += series[k - d];
            }
        } else {
            for k in (d..=top).rev() {
                series[k] += series[k - d];
            }
        }
    }
    series
}

fn det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(c, _)| c != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][j] * det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Largest `k` with a nonzero `k × k` minor.
fn minor_rank(m: &[Vec<i64>]) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let sub: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&r| cs.iter().map(|&c| BigInt::from(m[r][c])).collect())
                    .collect();
                if !det(&sub).is_zero() {
                    return k;
                }
            }
        }
    }
    0
}

fn sparse(m: &[Vec<i64>]) -> Vec<SparseVec> {
    m.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, &x)| x != 0)
                .map(|(c, &x)| (c, q(x)))
                .collect()
        })
        .collect()
}

fn matrix(entry: impl Strategy<Value = i64> + Clone) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..=6, 1usize..=6).prop_flat_map(move |(r, c)| {
        prop::collection::vec(prop::collection::vec(entry.clone(), c), r)
    })
}

fn free_algebra() -> impl Strategy<Value = Arc<FreeAlgebra>> {
    prop::collection::vec(2u32..=7, 1..=5).prop_map(|degrees| {
        let gens = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| Generator::new(format!("g{i}"), d))
            .collect();
        FreeAlgebra::new(gens).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn koszul_antisymmetry(
        alg in free_algebra(),
        (da, db) in (0u32..=9, 0u32..=9),
        ca in prop::collection::vec(-3i64..=3, 1..8),
        cb in prop::collection::vec(-3i64..=3, 1..8),
    ) {
        let m = SullivanModel::free("F", alg);
        let a = poly(&m, da, &ca);
        let b = poly(&m, db, &cb);
        let ab = &a * &b;
        let ba = &b * &a;
        prop_assert_eq!(ab, ba.scale(&q(sign(da, db))));
    }

    #[test]
    fn differential_squares_to_zero(
        seed in any::<u64>(),
        p in params(),
        k in 0u32..=12,
        c in prop::collection::vec(-3i64..=3, 1..8),
    ) {
        let m = two_stage(seed, p);
        let x = poly(&m, k, &c);
        prop_assert!(m.d(&m.d(&x)).is_zero());
    }

    #[test]
    fn leibniz_rule(
        seed in any::<u64>(),
        p in params(),
        (da, db) in (0u32..=8, 0u32..=8),
        ca in prop::collection::vec(-3i64..=3, 1..6),
        cb in prop::collection::vec(-3i64..=3, 1..6),
    ) {
        let m = two_stage(seed, p);
        let a = poly(&m, da, &ca);
        let b = poly(&m, db, &cb);
        let lhs = m.d(&(&a * &b));
        let rhs = &(&m.d(&a) * &b) + &(&a * &m.d(&b)).scale(&q(sign(da, 1)));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_count_matches_hilbert_series(seed in any::<u64>(), p in params()) {
        let m = two_stage(seed, p);
        let degrees: Vec<Degree> = m.generators().iter().map(|g| g.degree).collect();
        let series = hilbert_series(&degrees, 24);
        for (k, &expected) in series.iter().enumerate() {
            prop_assert_eq!(m.monomial_basis(k as Degree).len() as u64, expected, "degree {}", k);
        }
    }

    #[test]
    fn cochain_matrices_compose_to_zero(seed in any::<u64>(), p in params(), k in 0u32..=10) {
        let m = two_stage(seed, p);
        let first = cohomology::cochain_matrix(&m, k);
        let second = cohomology::cochain_matrix(&m, k + 1);
        prop_assert_eq!(first.cols(), m.monomial_basis(k).len());
        prop_assert_eq!(first.rows(), second.cols());
        for column in &first.columns {
            let mut image = vec![q(0); second.rows()];
            for (j, c) in column {
                for (i, e) in &second.columns[*j] {
                    image[*i] += c * e;
                }
            }
            prop_assert!(image.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn rank_matches_minors(mat in matrix(prop_oneof![3 => Just(0i64), 2 => -3i64..=3])) {
        prop_assert_eq!(linalg::rank(&sparse(&mat)), minor_rank(&mat));
    }

    #[test]
    fn rank_matches_minors_with_large_entries(
        mat in matrix(prop_oneof![1 => Just(0i64), 1 => -(1i64 << 60)..(1i64 << 60)]),
    ) {
        prop_assert_eq!(linalg::rank(&sparse(&mat)), minor_rank(&mat));
    }

    #[test]
    fn explicit_bound_below_case_bounds(n in 0usize..80, m in 0usize..80, r in 0usize..80) {
        let p = TwoStageParams { n, m, r };
        let bound = two_stage_bound(p);
        let (case1, case2) = case_bounds(p);
        prop_assert!(case1.is_some() || case2.is_some());
        if let Some(c) = case1 {
            prop_assert!(bound <= c);
        }
        if let Some(c) = case2 {
            prop_assert!(bound <= c);
        }
    }
}

#[test]
fn rank_oracle_sanity() {
    assert_eq!(minor_rank(&[vec![1, 2], vec![2, 4]]), 1);
    assert_eq!(minor_rank(&[vec![0, 0, 0]]), 0);
    assert_eq!(hilbert_series(&[2, 3], 6), vec![1, 0, 1, 1, 1, 1, 1]);
}
