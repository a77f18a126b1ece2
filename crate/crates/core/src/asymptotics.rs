//! The explicit upper bound on `h` for two-stage spaces, the threshold in
//! `dim π` beyond which it drops below a given value, and seeded experiments.

use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::catalog::{self, RandomOptions, TwoStageParams};
use crate::elliptic;
use crate::rational::{decimal_string, fraction_string, from_usize, Q};

fn pow2(k: usize) -> Q {
    Q::from_integer((BigUint::one() << k).into())
}

/// `½(n² + n + m² + m + 2nm + 2 − 2r)`, the word-length lower bound on `dim H`.
pub fn word_length_bound(p: TwoStageParams) -> Q {
    let (n, m, r) = (p.n as i64, p.m as i64, p.r as i64);
    Q::new(
        (n * n + n + m * m + m + 2 * n * m + 2 - 2 * r).into(),
        2.into(),
    )
}

/// `2^r`, the lower bound on `dim H` from the excess of odd generators.
pub fn exponential_bound(p: TwoStageParams) -> Q {
    pow2(p.r)
}

/// `(2n + m + r) / max(½(n² + n + m² + m + 2nm + 2 − 2r), 2^r)`.
pub fn two_stage_bound(p: TwoStageParams) -> Q {
    let denominator = std::cmp::max(word_length_bound(p), exponential_bound(p));
    from_usize(p.dim_pi()) / denominator
}

/// `(5n + 3m)/(n² + m² + 2nm + 2)` when `2r <= n + m`, and `5r/2^r` when
/// `2r >= n + m`.
pub fn case_bounds(p: TwoStageParams) -> (Option<Q>, Option<Q>) {
    let (n, m, r) = (p.n, p.m, p.r);
    let case1 = (2 * r <= n + m).then(|| {
        Q::new(
            (5 * n + 3 * m).into(),
            (n * n + m * m + 2 * n * m + 2).into(),
        )
    });
    let case2 = (2 * r >= n + m).then(|| from_usize(5 * r) / pow2(r));
    (case1, case2)
}

/// All triples with `2n + m + r = total`.
pub fn triples_with_total(total: usize) -> impl Iterator<Item = TwoStageParams> {
    (0..=total / 2).flat_map(move |n| {
        let rest = total - 2 * n;
        (0..=rest).map(move |m| TwoStageParams { n, m, r: rest - m })
    })
}

/// Length of the run of good totals required before the search stops.
pub const THRESHOLD_WINDOW: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Threshold {
    /// Every triple with total in `[n, n + window)` has bound `< epsilon`.
    pub n: usize,
    pub window: usize,
    /// A triple with total `n − 1` whose bound is `>= epsilon`.
    pub witness: Option<TwoStageParams>,
    pub witness_bound: Option<crate::rational::Frac>,
}

/// Smallest `N` after which the bound stays below `epsilon` for
/// [`THRESHOLD_WINDOW`] consecutive totals.
pub fn threshold(epsilon: &Q) -> Threshold {
    assert!(epsilon > &Q::zero(), "epsilon must be positive");
    let mut last_bad: Option<(usize, TwoStageParams, Q)> = None;
    let mut total = 0;
    loop {
        let start = last_bad.as_ref().map_or(0, |b| b.0 + 1);
        if total >= start + THRESHOLD_WINDOW {
            return Threshold {
                n: start,
                window: THRESHOLD_WINDOW,
                witness: last_bad.as_ref().map(|b| b.1),
                witness_bound: last_bad.map(|b| crate::rational::Frac(b.2)),
            };
        }
        if let Some((p, b)) = triples_with_total(total)
            .map(|p| (p, two_stage_bound(p)))
            .find(|(_, b)| b >= epsilon)
        {
            last_bad = Some((total, p, b));
        }
        total += 1;
    }
}

/// Knobs of [`run_experiment`]. Each sample is a product of random two-stage
/// factors; parameters add and cohomology multiplies.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub samples: usize,
    pub seed: u64,
    pub max_factors: usize,
    /// Inclusive upper limits of the per-factor `n`, `m`, `r`.
    pub factor_limits: TwoStageParams,
    pub options: RandomOptions,
}

impl ExperimentConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        ExperimentConfig {
            samples,
            seed,
            max_factors: 12,
            factor_limits: TwoStageParams { n: 2, m: 2, r: 2 },
            options: RandomOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExperimentRecord {
    pub sample_index: usize,
    pub seed: u64,
    pub params: TwoStageParams,
    pub dim_pi: usize,
    pub dim_h: BigUint,
    pub h: Q,
    pub bound: Q,
}

impl ExperimentRecord {
    pub fn within_bound(&self) -> bool {
        self.h <= self.bound
    }

    /// Both ingredient lower bounds on `dim H` hold.
    pub fn lower_bounds_hold(&self) -> bool {
        let dim_h = Q::from_integer(self.dim_h.clone().into());
        dim_h >= word_length_bound(self.params) && dim_h >= exponential_bound(self.params)
    }
}

#[derive(Serialize)]
struct CsvRow {
    sample_index: usize,
    seed: u64,
    n: usize,
    m: usize,
    r: usize,
    dim_pi: usize,
    #[serde(rename = "dim_H")]
    dim_h: String,
    h_exact: String,
    h_decimal: String,
    bound_exact: String,
    bound_decimal: String,
}

pub const CSV_HEADER: [&str; 11] = [
    "sample_index",
    "seed",
    "n",
    "m",
    "r",
    "dim_pi",
    "dim_H",
    "h_exact",
    "h_decimal",
    "bound_exact",
    "bound_decimal",
];

fn sample_seed(seed: u64, index: usize) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng.next_u64()
}

fn factor_params(rng: &mut ChaCha8Rng, limits: TwoStageParams) -> TwoStageParams {
    let n = rng.gen_range(0..=limits.n);
    let m = rng.gen_range(0..=limits.m);
    let mut r = rng.gen_range(0..=limits.r);
    // an odd sphere is the smallest nonempty factor
    if n == 0 && m == 0 {
        return TwoStageParams { n: 0, m: 1, r: 0 };
    }
    // without even generators, decomposable even-degree targets need two closed odd ones
    if n == 0 && m < 2 {
        r = 0;
    }
    TwoStageParams { n, m, r }
}

/// One sample, or `None` if some factor could not be generated.
pub fn experiment_sample(config: &ExperimentConfig, index: usize) -> Option<ExperimentRecord> {
    let seed = sample_seed(config.seed, index);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let factors = rng.gen_range(1..=config.max_factors.max(1));
    let mut params = TwoStageParams { n: 0, m: 0, r: 0 };
    let mut dim_pi = 0;
    let mut dim_h = BigUint::one();
    for _ in 0..factors {
        let p = factor_params(&mut rng, config.factor_limits);
        let factor_seed = rng.next_u64();
        let model = match catalog::random_two_stage(factor_seed, p, &config.options) {
            Ok(m) => m,
            Err(e) => {
                log::warn!("sample {index}: factor {p:?} with seed {factor_seed} failed: {e}");
                return None;
            }
        };
        let inv = match elliptic::invariants(&model.model) {
            Ok(inv) => inv,
            Err(e) => {
                log::warn!("sample {index}: {e}");
                return None;
            }
        };
        params.n += p.n;
        params.m += p.m;
        params.r += p.r;
        dim_pi += inv.dim_pi;
        dim_h *= BigUint::from(inv.dim_h);
    }
    Some(ExperimentRecord {
        sample_index: index,
        seed,
        params,
        dim_pi,
        h: Q::new(dim_pi.into(), dim_h.clone().into()),
        dim_h,
        bound: two_stage_bound(params),
    })
}

/// Runs all samples in parallel; records come back in sample order.
pub fn run_experiment(config: &ExperimentConfig) -> Vec<ExperimentRecord> {
    (0..config.samples)
        .into_par_iter()
        .map(|i| experiment_sample(config, i))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect()
}

pub fn write_csv<W: Write>(records: &[ExperimentRecord], out: W) -> Result<(), csv::Error> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(CSV_HEADER)?;
    for rec in records {
        w.serialize(CsvRow {
            sample_index: rec.sample_index,
            seed: rec.seed,
            n: rec.params.n,
            m: rec.params.m,
            r: rec.params.r,
            dim_pi: rec.dim_pi,
            dim_h: rec.dim_h.to_string(),
            h_exact: fraction_string(&rec.h),
            h_decimal: decimal_string(&rec.h, 6),
            bound_exact: fraction_string(&rec.bound),
            bound_decimal: decimal_string(&rec.bound, 6),
        })?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_csv_file(records: &[ExperimentRecord], path: &Path) -> Result<(), csv::Error> {
    let file = std::fs::File::create(path)?;
    write_csv(records, file)
}

/// Largest `h` among records with `dim π >= from`.
pub fn max_h_from(records: &[ExperimentRecord], from: usize) -> Option<Q> {
    records
        .iter()
        .filter(|r| r.dim_pi >= from)
        .map(|r| r.h.clone())
        .max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;

    fn p(n: usize, m: usize, r: usize) -> TwoStageParams {
        TwoStageParams { n, m, r }
    }

    #[test]
    fn bound_values() {
        assert_eq!(two_stage_bound(p(0, 1, 0)), frac(1, 2));
        assert_eq!(two_stage_bound(p(0, 0, 0)), frac(0, 1));
        assert_eq!(two_stage_bound(p(1, 0, 1)), frac(3, 2));
        assert_eq!(case_bounds(p(3, 1, 1)), (Some(frac(1, 1)), None));
        assert_eq!(case_bounds(p(0, 0, 5)), (None, Some(frac(25, 32))));
        assert_eq!(
            case_bounds(p(2, 2, 2)),
            (Some(frac(16, 18)), Some(frac(10, 4)))
        );
    }

    #[test]
    fn thresholds() {
        let t = threshold(&frac(1, 4));
        assert_eq!(t.n, 44);
        assert_eq!(t.witness, Some(p(18, 0, 7)));
        assert_eq!(t.witness_bound.unwrap().0, frac(43, 165));
        assert_eq!(threshold(&frac(1, 1)).n, 14);
        assert_eq!(threshold(&frac(1, 2)).n, 24);
        assert_eq!(threshold(&frac(1, 10)).n, 96);
        let t = threshold(&frac(2, 1));
        assert_eq!((t.n, t.witness), (0, None));
    }

    #[test]
    fn triples_enumerate_every_split() {
        let all: Vec<_> = triples_with_total(3).collect();
        assert_eq!(all.len(), 6);
        assert!(all.iter().all(|q| q.dim_pi() == 3));
    }

    #[test]
    fn small_experiment_is_deterministic() {
        let mut cfg = ExperimentConfig::new(6, 7);
        cfg.max_factors = 2;
        let a = run_experiment(&cfg);
        let b = run_experiment(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
        assert!(a.iter().all(|r| r.within_bound() && r.lower_bounds_hold()));
        let mut buf = Vec::new();
        write_csv(&a, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("sample_index,seed,n,m,r,dim_pi,dim_H,h_exact"));
        assert_eq!(text.lines().count(), 7);
    }
}
