//! Minimal-model reduction, ellipticity, and the numerical invariants of
//! elliptic Sullivan models.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use num_traits::One;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Degree, FreeAlgebra, Monomial, Polynomial, SullivanModel};
use crate::cohomology::{self, BettiTable};
use crate::linalg::{self, SparseVec};
use crate::rational::{from_usize, Frac, Q};

/// Result of cancelling the contractible part of a Sullivan model.
#[derive(Clone, Debug)]
pub struct PureReduction {
    /// Minimal model, on a subset of the original generators.
    pub minimal: SullivanModel,
    /// Same generators as `minimal`; odd generators keep only the part of
    /// their differential in `Λ(V^even)`, even generators are closed.
    pub pure: SullivanModel,
    /// `(source, target)` names: the linear part of `d(source)` was used to
    /// eliminate `target`.
    pub cancelled_pairs: Vec<(String, String)>,
    /// `dim π_k = dim H^k(V, d₀)` for every degree with nonzero homotopy.
    pub homotopy_by_degree: BTreeMap<Degree, usize>,
}

impl PureReduction {
    pub fn dim_pi(&self) -> usize {
        self.homotopy_by_degree.values().sum()
    }
}

/// `dim H^k(V, d₀)` for every `k`, where `d₀` is the linear part of `d`.
pub fn homotopy_dimensions(m: &SullivanModel) -> BTreeMap<Degree, usize> {
    let by_degree = |k: Degree| -> Vec<usize> {
        (0..m.len())
            .filter(|&i| m.algebra().degree(i) == k)
            .collect()
    };
    let linear_rank = |k: Degree| -> usize {
        let targets: HashMap<usize, usize> = by_degree(k + 1)
            .into_iter()
            .enumerate()
            .map(|(a, b)| (b, a))
            .collect();
        let rows: Vec<SparseVec> = by_degree(k)
            .into_iter()
            .map(|i| {
                let mut v: SparseVec = m
                    .d_generator(i)
                    .linear_part()
                    .into_iter()
                    .map(|(j, c)| (targets[&j], c))
                    .collect();
                v.sort_by_key(|e| e.0);
                v
            })
            .collect();
        linalg::rank(&rows)
    };
    let mut out = BTreeMap::new();
    let degrees: std::collections::BTreeSet<Degree> =
        m.generators().iter().map(|g| g.degree).collect();
    for k in degrees {
        let dim = by_degree(k).len() - linear_rank(k) - linear_rank(k - 1);
        if dim > 0 {
            out.insert(k, dim);
        }
    }
    out
}

/// Cancels contractible pairs until the differential is decomposable, then
/// forms the associated pure model.
///
/// Each step takes the first generator `g` whose differential has a linear
/// part `Σ cᵢwᵢ`, picks the first `w = w_j` and passes to the quotient by the
/// differential ideal `(g, dg)`, which is free on the remaining generators:
/// `g ↦ 0`, `w ↦ -(dg - c_j w)/c_j`.
pub fn linear_part_reduction(m: &SullivanModel) -> PureReduction {
    let homotopy_by_degree = homotopy_dimensions(m);
    let mut current = m.clone();
    let mut cancelled = Vec::new();
    while let Some(g) =
        (0..current.len()).find(|&i| !current.d_generator(i).linear_part().is_empty())
    {
        let dg = current.d_generator(g).clone();
        let (w, c) = dg.linear_part()[0].clone();
        cancelled.push((
            current.generators()[g].name.clone(),
            current.generators()[w].name.clone(),
        ));
        current = cancel_pair(&current, g, w, &c);
    }
    debug_assert!(current.check_d_squared().is_ok());
    let reduced: BTreeMap<Degree, usize> =
        current
            .generators()
            .iter()
            .fold(BTreeMap::new(), |mut acc, g| {
                *acc.entry(g.degree).or_insert(0) += 1;
                acc
            });
    assert_eq!(
        reduced, homotopy_by_degree,
        "generator counts of the reduced model disagree with H(V, d0)"
    );
    let pure = associated_pure(&current);
    PureReduction {
        minimal: current,
        pure,
        cancelled_pairs: cancelled,
        homotopy_by_degree,
    }
}

fn cancel_pair(m: &SullivanModel, g: usize, w: usize, c: &Q) -> SullivanModel {
    let keep: Vec<usize> = (0..m.len()).filter(|&i| i != g && i != w).collect();
    let alg = FreeAlgebra::new(keep.iter().map(|&i| m.generators()[i].clone()).collect())
        .expect("subset of valid generators");
    let mut map = vec![None; m.len()];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = Some(new);
    }
    let dg = m.d_generator(g);
    let rest = dg.filter_terms(|mono| mono.as_generator() != Some(w));
    let w_image = rest.reindex(&alg, &map).scale(&(-c.recip()));
    let images: Vec<Polynomial> = (0..m.len())
        .map(|i| {
            if i == g {
                Polynomial::zero(&alg)
            } else if i == w {
                w_image.clone()
            } else {
                Polynomial::generator(&alg, map[i].expect("kept"))
            }
        })
        .collect();
    let differential = keep
        .iter()
        .map(|&i| m.d_generator(i).substitute(&alg, &images))
        .collect();
    SullivanModel::new_unchecked_d2(m.name(), alg, differential)
        .expect("quotient differential has correct degrees")
}

/// `d_σ`: zero on even generators, the `Λ(V^even)` component of `d` on odd ones.
pub fn associated_pure(m: &SullivanModel) -> SullivanModel {
    let alg = m.algebra().clone();
    let odd: Vec<usize> = m.odd_indices();
    let differential = (0..m.len())
        .map(|i| {
            if alg.is_odd(i) {
                m.d_generator(i)
                    .filter_terms(|mono| odd.iter().all(|&j| mono.exponent(j) == 0))
            } else {
                Polynomial::zero(&alg)
            }
        })
        .collect();
    SullivanModel::new_unchecked_d2(m.name(), alg, differential).expect("same degrees")
}

/// `Σ odd degrees − Σ (even degree − 1)` over the generators of `m`.
///
/// Equals the formal dimension only when `m` is minimal (or pure).
pub fn dimension_formula(m: &SullivanModel) -> i64 {
    m.generators()
        .iter()
        .map(|g| {
            if g.is_odd() {
                g.degree as i64
            } else {
                -(g.degree as i64 - 1)
            }
        })
        .sum()
}

/// Dimension formula applied to `m` itself, without reducing first.
pub fn naive_formal_dimension(m: &SullivanModel) -> i64 {
    dimension_formula(m)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Elliptic,
    NotElliptic,
    /// The search cap was too small to decide.
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub verdict: Verdict,
    /// Largest degree of `ℚ[V^even]/(d_σ V^odd)` that was examined.
    pub cap: Degree,
    /// Cap that always decides: the dimension formula plus one window length.
    pub decisive_cap: Degree,
    /// Window `[start, end]` on which the quotient vanishes, when found.
    pub window: Option<(Degree, Degree)>,
}

/// Decides ellipticity with the cap that always gives an answer.
pub fn ellipticity_check(m: &SullivanModel) -> EllipticityReport {
    ellipticity_check_with_cap(m, None)
}

/// Decides whether `H(m)` is finite-dimensional.
///
/// On the minimal model, the quotient `A = ℚ[V^even]/(d_σ V^odd)` is tested
/// for vanishing on a window of consecutive degrees as long as the largest
/// even generator degree; every monomial of higher degree factors through the
/// window, so `A` is then finite. If the model is elliptic, `A` vanishes above
/// the dimension-formula degree, so a search up to that degree plus one
/// window length is decisive. A smaller user cap can return `Undecided`.
pub fn ellipticity_check_with_cap(m: &SullivanModel, cap: Option<Degree>) -> EllipticityReport {
    let reduction = linear_part_reduction(m);
    ellipticity_of_minimal(&reduction.minimal, cap)
}

fn ellipticity_of_minimal(minimal: &SullivanModel, cap: Option<Degree>) -> EllipticityReport {
    let even: Vec<usize> = minimal.even_indices();
    let window_len = even
        .iter()
        .map(|&i| minimal.algebra().degree(i))
        .max()
        .unwrap_or(0);
    let n = dimension_formula(minimal);
    let decisive_cap = n.max(0) as Degree + window_len;
    let cap = cap.unwrap_or(decisive_cap);
    if even.is_empty() {
        return EllipticityReport {
            verdict: Verdict::Elliptic,
            cap,
            decisive_cap,
            window: None,
        };
    }
    let ring = FreeAlgebra::new(
        even.iter()
            .map(|&i| minimal.generators()[i].clone())
            .collect(),
    )
    .expect("valid generators");
    let mut map = vec![None; minimal.len()];
    for (new, &old) in even.iter().enumerate() {
        map[old] = Some(new);
    }
    let pure = associated_pure(minimal);
    let relations: Vec<Polynomial> = minimal
        .odd_indices()
        .into_iter()
        .map(|i| pure.d_generator(i).reindex(&ring, &map))
        .filter(|p| !p.is_zero())
        .collect();
    let dims: Vec<usize> = (0..=cap)
        .into_par_iter()
        .map(|k| quotient_dimension(&ring, &relations, k))
        .collect();
    let mut run = 0;
    let mut window = None;
    for (k, &dim) in dims.iter().enumerate() {
        if dim == 0 {
            run += 1;
            if run == window_len {
                window = Some((k as Degree + 1 - window_len, k as Degree));
                break;
            }
        } else {
            run = 0;
        }
    }
    let verdict = if window.is_some() {
        Verdict::Elliptic
    } else if n < 0 || cap >= decisive_cap {
        Verdict::NotElliptic
    } else {
        Verdict::Undecided
    };
    EllipticityReport {
        verdict,
        cap,
        decisive_cap,
        window,
    }
}

/// `dim (ℚ[x]/I)_k` for the ideal `I` generated by homogeneous `relations`.
pub fn quotient_dimension(ring: &Arc<FreeAlgebra>, relations: &[Polynomial], k: Degree) -> usize {
    let basis = ring.monomial_basis(k);
    if basis.is_empty() {
        return 0;
    }
    let index: HashMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rows = Vec::new();
    for f in relations {
        let Some(deg) = f.degree() else { continue };
        if deg > k {
            continue;
        }
        for mono in ring.monomial_basis(k - deg) {
            let shifted = f.mul_monomials(&mono, &Monomial::unit(ring.len()));
            rows.push(cohomology::coordinates(&shifted, &index));
        }
    }
    basis.len() - linalg::rank(&rows)
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantsError {
    #[error("model `{0}` is not elliptic: its cohomology is infinite-dimensional")]
    NotElliptic(String),
    #[error("ellipticity of `{name}` undecided at cap {cap}; the decisive cap is {decisive_cap}")]
    Undecided {
        name: String,
        cap: Degree,
        decisive_cap: Degree,
    },
}

/// Numerical invariants of an elliptic model, read off its minimal model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticInvariants {
    pub name: String,
    /// Degrees of the even generators of the minimal model.
    pub even_degrees: Vec<Degree>,
    /// Degrees of the odd generators of the minimal model.
    pub odd_degrees: Vec<Degree>,
    /// `aᵢ = deg/2`.
    pub even_exponents: Vec<Degree>,
    /// `bᵢ = (deg+1)/2`.
    pub odd_exponents: Vec<Degree>,
    pub dim_pi_even: usize,
    pub dim_pi_odd: usize,
    pub dim_pi: usize,
    pub chi_pi: i64,
    pub chi: i64,
    /// From the dimension formula.
    pub formal_dimension: Degree,
    /// Largest degree with nonzero cohomology, computed.
    pub top_degree: Degree,
    #[serde(rename = "dim_H")]
    pub dim_h: usize,
    pub betti: Vec<(Degree, usize)>,
    #[serde(rename = "h")]
    pub hilali: Frac,
}

impl EllipticInvariants {
    pub fn h(&self) -> &Q {
        &self.hilali.0
    }

    pub fn is_f0(&self) -> bool {
        self.chi > 0
    }
}

/// Everything computed for one elliptic model.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub reduction: PureReduction,
    pub ellipticity: EllipticityReport,
    pub betti: BettiTable,
    pub invariants: EllipticInvariants,
}

pub fn invariants(m: &SullivanModel) -> Result<EllipticInvariants, InvariantsError> {
    analyze(m, None).map(|a| a.invariants)
}

/// Reduces, decides ellipticity (with an optional search cap), and computes
/// cohomology of the minimal model up to its formal dimension.
pub fn analyze(m: &SullivanModel, cap: Option<Degree>) -> Result<Analysis, InvariantsError> {
    let reduction = linear_part_reduction(m);
    let ellipticity = ellipticity_of_minimal(&reduction.minimal, cap);
    match ellipticity.verdict {
        Verdict::Elliptic => {}
        Verdict::NotElliptic => return Err(InvariantsError::NotElliptic(m.name().to_string())),
        Verdict::Undecided => {
            return Err(InvariantsError::Undecided {
                name: m.name().to_string(),
                cap: ellipticity.cap,
                decisive_cap: ellipticity.decisive_cap,
            })
        }
    }
    let minimal = &reduction.minimal;
    let formal_dimension = dimension_formula(minimal) as Degree;
    let betti = cohomology::betti_table(minimal, formal_dimension);
    let degrees = |odd: bool| -> Vec<Degree> {
        let mut v: Vec<Degree> = minimal
            .generators()
            .iter()
            .filter(|g| g.is_odd() == odd)
            .map(|g| g.degree)
            .collect();
        v.sort_unstable();
        v
    };
    let even_degrees = degrees(false);
    let odd_degrees = degrees(true);
    let dim_h = betti.total;
    let dim_pi = minimal.len();
    let invariants = EllipticInvariants {
        name: m.name().to_string(),
        even_exponents: even_degrees.iter().map(|d| d / 2).collect(),
        odd_exponents: odd_degrees.iter().map(|d| d.div_ceil(2)).collect(),
        dim_pi_even: even_degrees.len(),
        dim_pi_odd: odd_degrees.len(),
        dim_pi,
        chi_pi: odd_degrees.len() as i64 - even_degrees.len() as i64,
        chi: betti.euler_characteristic(),
        formal_dimension,
        top_degree: betti.formal_dimension,
        dim_h,
        betti: betti.nonzero(),
        hilali: Frac(Q::new(dim_pi.into(), dim_h.into())),
        even_degrees,
        odd_degrees,
    };
    Ok(Analysis {
        reduction,
        ellipticity,
        betti,
        invariants,
    })
}

/// `χ > 0`, and the product `∏ bᵢ / ∏ aᵢ` over the exponents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F0Check {
    pub is_f0: bool,
    pub predicted_dim_h: Frac,
    /// `predicted_dim_h == dim_H`; only meaningful when `is_f0`.
    pub matches: bool,
}

pub fn f0_check_and_formula(inv: &EllipticInvariants) -> F0Check {
    let mut predicted = Q::one();
    for b in &inv.odd_exponents {
        predicted *= from_usize(*b as usize);
    }
    for a in &inv.even_exponents {
        predicted /= from_usize(*a as usize);
    }
    F0Check {
        is_f0: inv.is_f0(),
        matches: predicted == from_usize(inv.dim_h),
        predicted_dim_h: Frac(predicted),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassPredicates {
    pub is_pure: bool,
    pub is_two_stage: bool,
    /// Closed odd generators.
    pub w0: Vec<String>,
    /// Remaining odd generators.
    pub w1: Vec<String>,
}

/// Pure and (greedy) two-stage tests, applied to `m` as given.
pub fn class_predicates(m: &SullivanModel) -> ClassPredicates {
    let alg = m.algebra();
    let even = m.even_indices();
    let odd = m.odd_indices();
    let even_closed = even.iter().all(|&i| m.d_generator(i).is_zero());
    let (w0, w1): (Vec<usize>, Vec<usize>) = odd.iter().partition(|&&i| m.d_generator(i).is_zero());
    let lands_in =
        |p: &Polynomial, allowed: &dyn Fn(usize) -> bool| p.support().into_iter().all(allowed);
    let is_pure = even_closed
        && odd
            .iter()
            .all(|&i| lands_in(m.d_generator(i), &|j| !alg.is_odd(j)));
    let is_two_stage = even_closed
        && w1
            .iter()
            .all(|&i| lands_in(m.d_generator(i), &|j| !alg.is_odd(j) || w0.contains(&j)));
    let names = |v: &[usize]| v.iter().map(|&i| m.generators()[i].name.clone()).collect();
    ClassPredicates {
        is_pure,
        is_two_stage,
        w0: names(&w0),
        w1: names(&w1),
    }
}

/// One even and two odd generators in the minimal model.
pub fn star_type_check(inv: &EllipticInvariants) -> bool {
    inv.dim_pi_even == 1 && inv.dim_pi_odd == 2
}

/// Sufficient conditions for formality that can be read off a minimal model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormalityCertificate {
    /// Positive Euler characteristic.
    F0,
    /// One even and two odd generators.
    StarType,
    /// Pure, with as many even generators as non-closed odd ones: a product
    /// of an `F0` model with odd spheres.
    OddSpheresTimesF0,
}

pub fn formality_certificate(
    minimal: &SullivanModel,
    inv: &EllipticInvariants,
) -> Option<FormalityCertificate> {
    if inv.is_f0() {
        return Some(FormalityCertificate::F0);
    }
    if star_type_check(inv) {
        return Some(FormalityCertificate::StarType);
    }
    let preds = class_predicates(minimal);
    if preds.is_pure && preds.w1.len() == inv.dim_pi_even {
        return Some(FormalityCertificate::OddSpheresTimesF0);
    }
    None
}

/// Splitting of a formal elliptic minimal model into a part `T` of closed odd
/// generators and an `F0` part `V`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalDecomposition {
    pub t: Vec<String>,
    pub v: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("generators must be split exactly once between T and V")]
    NotAPartition,
    #[error("T generator `{0}` is not a closed odd generator")]
    TNotClosedOdd(String),
    #[error("d(V) is not contained in the subalgebra on V")]
    VNotSubalgebra,
    #[error("the V part is not positively elliptic")]
    VNotF0,
}

/// Closed odd generators form `T`; everything else forms `V`.
pub fn infer_decomposition(minimal: &SullivanModel) -> FormalDecomposition {
    let mut dec = FormalDecomposition {
        t: Vec::new(),
        v: Vec::new(),
    };
    for (i, g) in minimal.generators().iter().enumerate() {
        if g.is_odd() && minimal.d_generator(i).is_zero() {
            dec.t.push(g.name.clone());
        } else {
            dec.v.push(g.name.clone());
        }
    }
    dec
}

/// Checks that `T` is closed odd, `ΛV` is a sub-dga, and `(ΛV, d)` is `F0`.
pub fn validate_decomposition(
    minimal: &SullivanModel,
    dec: &FormalDecomposition,
) -> Result<(), DecompositionError> {
    let alg = minimal.algebra();
    let idx = |name: &String| {
        alg.index_of(name)
            .ok_or_else(|| DecompositionError::UnknownGenerator(name.clone()))
    };
    let t: Vec<usize> = dec.t.iter().map(idx).collect::<Result<_, _>>()?;
    let v: Vec<usize> = dec.v.iter().map(idx).collect::<Result<_, _>>()?;
    let mut all: Vec<usize> = t.iter().chain(&v).copied().collect();
    all.sort_unstable();
    if all != (0..minimal.len()).collect::<Vec<_>>() {
        return Err(DecompositionError::NotAPartition);
    }
    for (&i, name) in t.iter().zip(&dec.t) {
        if !alg.is_odd(i) || !minimal.d_generator(i).is_zero() {
            return Err(DecompositionError::TNotClosedOdd(name.clone()));
        }
    }
    if v.iter().any(|&i| {
        minimal
            .d_generator(i)
            .support()
            .iter()
            .any(|j| t.contains(j))
    }) {
        return Err(DecompositionError::VNotSubalgebra);
    }
    let sub_alg = FreeAlgebra::new(v.iter().map(|&i| minimal.generators()[i].clone()).collect())
        .expect("valid generators");
    let mut map = vec![None; minimal.len()];
    for (new, &old) in v.iter().enumerate() {
        map[old] = Some(new);
    }
    let sub = SullivanModel::new_unchecked_d2(
        "V",
        sub_alg.clone(),
        v.iter()
            .map(|&i| minimal.d_generator(i).reindex(&sub_alg, &map))
            .collect(),
    )
    .expect("restriction keeps degrees");
    match invariants(&sub) {
        Ok(inv) if inv.is_f0() => Ok(()),
        _ => Err(DecompositionError::VNotF0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::dsl::parse_model;
    use crate::rational::frac;

    fn m(text: &str) -> SullivanModel {
        parse_model(text).unwrap()
    }

    #[test]
    fn contractible_pair_cancels_completely() {
        let c = m("model c\ngen x 2\ngen y 3\nd x = y\n");
        let r = linear_part_reduction(&c);
        assert_eq!(r.dim_pi(), 0);
        assert!(r.minimal.is_empty());
        assert_eq!(naive_formal_dimension(&c), 2);
        assert_eq!(dimension_formula(&r.minimal), 0);
    }

    #[test]
    fn hopf_total_reduces_to_s7() {
        let t = m("model t\ngen f 3\ngen b 4\ngen c 7\nd f = b\nd c = b^2\n");
        let r = linear_part_reduction(&t);
        assert_eq!(r.minimal.generators(), &[Generator::new("c", 7)]);
        assert!(r.minimal.d_generator(0).is_zero());
        assert_eq!(r.cancelled_pairs, vec![("f".to_string(), "b".to_string())]);
        let inv = invariants(&t).unwrap();
        assert_eq!((inv.dim_pi, inv.dim_h), (1, 2));
    }

    #[test]
    fn ellipticity_verdicts() {
        let cp3 = m("model cp\ngen x 2\ngen y 7\nd y = x^4\n");
        assert_eq!(ellipticity_check(&cp3).verdict, Verdict::Elliptic);
        let hyp = m("model h\ngen x 2\ngen w 2\ngen y 3\nd y = x*w\n");
        assert_eq!(ellipticity_check(&hyp).verdict, Verdict::NotElliptic);
        let tight = ellipticity_check_with_cap(&cp3, Some(3));
        assert_eq!(tight.verdict, Verdict::Undecided);
        assert!(matches!(
            analyze(&cp3, Some(3)),
            Err(InvariantsError::Undecided { .. })
        ));
    }

    #[test]
    fn projective_space_invariants() {
        let cp3 = m("model cp\ngen x 2\ngen y 7\nd y = x^4\n");
        let inv = invariants(&cp3).unwrap();
        assert_eq!(
            (inv.dim_pi, inv.dim_h, inv.formal_dimension, inv.chi),
            (2, 4, 6, 4)
        );
        assert_eq!(inv.h(), &frac(1, 2));
        let f0 = f0_check_and_formula(&inv);
        assert!(f0.is_f0 && f0.matches);
    }

    #[test]
    fn two_stage_but_not_pure() {
        let w = m("model w\ngen x 2\ngen u 3\ngen v 3\ngen z 5\nd z = u*v + x^3\n");
        let p = class_predicates(&w);
        assert!(p.is_two_stage && !p.is_pure);
        assert_eq!(p.w0, vec!["u", "v"]);
        assert_eq!(p.w1, vec!["z"]);
        assert!(invariants(&w).is_ok());
    }

    #[test]
    fn decomposition_of_star_type() {
        let s = m("model s\ngen x 2\ngen z 3\ngen y 7\nd z = x^2\n");
        let dec = infer_decomposition(&s);
        assert_eq!(dec.t, vec!["y"]);
        assert_eq!(dec.v, vec!["x", "z"]);
        assert!(validate_decomposition(&s, &dec).is_ok());
        let bad = FormalDecomposition {
            t: vec!["z".into()],
            v: vec!["x".into(), "y".into()],
        };
        assert_eq!(
            validate_decomposition(&s, &bad),
            Err(DecompositionError::TNotClosedOdd("z".into()))
        );
    }
}
