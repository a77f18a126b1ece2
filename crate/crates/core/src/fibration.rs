//! Relative Sullivan models of fibrations `F → X → B` and exact checks of the
//! inequalities relating the invariants of fiber, base and total space.

use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, Degree, FreeAlgebra, Polynomial, SullivanModel};
use crate::cohomology::{self, SurjectivityReport};
use crate::dsl::{self, DslError};
use crate::elliptic::{
    self, Analysis, EllipticInvariants, FormalDecomposition, FormalityCertificate, InvariantsError,
};
use crate::linalg::{Echelon, SparseVec};
use crate::rational::{from_usize, Frac, Q};

/// `ΛW → ΛW ⊗ ΛV → ΛV`. Generators of `total` are those of `base` followed by
/// those of `fiber`, in order.
#[derive(Clone, Debug)]
pub struct FibrationModel {
    pub name: String,
    pub base: SullivanModel,
    pub fiber: SullivanModel,
    pub total: SullivanModel,
    /// Optional user-supplied splittings used by the halving bound.
    pub fiber_decomposition: Option<FormalDecomposition>,
    pub base_decomposition: Option<FormalDecomposition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FibrationError {
    #[error("the {0} model must be minimal")]
    NotMinimal(&'static str),
    #[error("generator `{0}` occurs in both base and fiber")]
    NameClash(String),
    #[error("perturbation given for unknown fiber generator `{0}`")]
    UnknownFiberGenerator(String),
    #[error("perturbation of d({generator}) must have degree {expected}")]
    PerturbationDegree { generator: String, expected: Degree },
    #[error("perturbation of d({0}) has a term without base generators, so projecting to the fiber changes its differential")]
    PerturbationOutsideIdeal(String),
    #[error("total differential: {0}")]
    Total(AlgebraError),
    #[error("cannot parse perturbation of d({generator}): {source}")]
    Parse { generator: String, source: DslError },
    #[error(transparent)]
    Invariants(#[from] InvariantsError),
    #[error("invalid {which} decomposition: {message}")]
    Decomposition {
        which: &'static str,
        message: String,
    },
}

impl FibrationModel {
    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    /// Index in `total` of the `j`-th fiber generator.
    pub fn fiber_index(&self, j: usize) -> usize {
        self.base.len() + j
    }

    pub fn with_decompositions(
        mut self,
        fiber: FormalDecomposition,
        base: FormalDecomposition,
    ) -> Self {
        self.fiber_decomposition = Some(fiber);
        self.base_decomposition = Some(base);
        self
    }
}

/// Builds the total model `d(w) = d_B(w)`, `d(v) = d_F(v) + perturbation(v)`.
///
/// `perturbation[j]` is a polynomial over `total_algebra(base, fiber)` lying
/// in the ideal generated by the base generators.
pub fn build_fibration(
    name: impl Into<String>,
    base: &SullivanModel,
    fiber: &SullivanModel,
    perturbation: &[(String, Polynomial)],
) -> Result<FibrationModel, FibrationError> {
    if !base.is_minimal() {
        return Err(FibrationError::NotMinimal("base"));
    }
    if !fiber.is_minimal() {
        return Err(FibrationError::NotMinimal("fiber"));
    }
    let alg = total_algebra(base, fiber)?;
    let nb = base.len();
    let base_map: Vec<Option<usize>> = (0..nb).map(Some).collect();
    let fiber_map: Vec<Option<usize>> = (0..fiber.len()).map(|j| Some(nb + j)).collect();
    let mut differential: Vec<Polynomial> = base
        .differential()
        .iter()
        .map(|p| p.reindex(&alg, &base_map))
        .collect();
    differential.extend(
        fiber
            .differential()
            .iter()
            .map(|p| p.reindex(&alg, &fiber_map)),
    );
    for (gen, p) in perturbation {
        let j = fiber
            .algebra()
            .index_of(gen)
            .ok_or_else(|| FibrationError::UnknownFiberGenerator(gen.clone()))?;
        let p = p.reindex(&alg, &(0..alg.len()).map(Some).collect::<Vec<_>>());
        if p.is_zero() {
            continue;
        }
        let expected = fiber.algebra().degree(j) + 1;
        if p.degree() != Some(expected) {
            return Err(FibrationError::PerturbationDegree {
                generator: gen.clone(),
                expected,
            });
        }
        if p.terms()
            .any(|(m, _)| m.exponents()[..nb].iter().all(|&e| e == 0))
        {
            return Err(FibrationError::PerturbationOutsideIdeal(gen.clone()));
        }
        differential[nb + j] = &differential[nb + j] + &p;
    }
    let name = name.into();
    let total =
        SullivanModel::new(name.clone(), alg, differential).map_err(FibrationError::Total)?;
    Ok(FibrationModel {
        name,
        base: base.clone(),
        fiber: fiber.clone(),
        total,
        fiber_decomposition: None,
        base_decomposition: None,
    })
}

/// Free algebra on the base generators followed by the fiber generators.
pub fn total_algebra(
    base: &SullivanModel,
    fiber: &SullivanModel,
) -> Result<Arc<FreeAlgebra>, FibrationError> {
    for g in fiber.generators() {
        if base.algebra().index_of(&g.name).is_some() {
            return Err(FibrationError::NameClash(g.name.clone()));
        }
    }
    let gens = base
        .generators()
        .iter()
        .chain(fiber.generators())
        .cloned()
        .collect();
    FreeAlgebra::new(gens).map_err(FibrationError::Total)
}

/// [`build_fibration`] with perturbations written in the model DSL over the
/// combined generators.
pub fn build_fibration_from_text(
    name: impl Into<String>,
    base: &SullivanModel,
    fiber: &SullivanModel,
    perturbation: &[(&str, &str)],
) -> Result<FibrationModel, FibrationError> {
    let alg = total_algebra(base, fiber)?;
    let parsed = perturbation
        .iter()
        .map(|(g, text)| {
            dsl::parse_polynomial(&alg, text)
                .map(|p| (g.to_string(), p))
                .map_err(|source| FibrationError::Parse {
                    generator: g.to_string(),
                    source,
                })
        })
        .collect::<Result<Vec<_>, _>>()?;
    build_fibration(name, base, fiber, &parsed)
}

/// Reads perturbation lines `d NAME = POLYNOMIAL`; `#` starts a comment.
pub fn parse_perturbation(text: &str) -> Result<Vec<(String, String)>, DslError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let parsed = content
            .strip_prefix("d ")
            .and_then(|rest| rest.split_once('='))
            .map(|(g, e)| (g.trim().to_string(), e.trim().to_string()));
        match parsed {
            Some((g, e)) if !g.is_empty() => out.push((g, e)),
            _ => return Err(DslError::new(idx + 1, 1, "expected `d NAME = POLYNOMIAL`")),
        }
    }
    Ok(out)
}

/// The transgression `d₀ : V → W`, the linear part of the total differential
/// on fiber generators, written in base coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransgressionAnalysis {
    /// One row per fiber generator with nonzero `d₀`: `(fiber, [(base, coefficient)])`.
    pub d0_rows: Vec<(String, Vec<(String, Frac)>)>,
    /// `(fiber generator, base generator)` after a change of basis making `d₀`
    /// a partial matching.
    pub contracted_pairs: Vec<(String, String)>,
    /// `rank d₀`.
    pub rank: usize,
    pub surviving_even: usize,
    pub surviving_odd: usize,
    /// Every contracted pair sends an odd fiber generator to an even base generator.
    pub odd_to_even_only: bool,
}

impl TransgressionAnalysis {
    pub fn surviving(&self) -> usize {
        self.surviving_even + self.surviving_odd
    }
}

fn d0_row(f: &FibrationModel, j: usize) -> SparseVec {
    let nb = f.base_len();
    let mut v: SparseVec = f
        .total
        .d_generator(f.fiber_index(j))
        .linear_part()
        .into_iter()
        .filter(|(i, _)| *i < nb)
        .collect();
    v.sort_by_key(|e| e.0);
    v
}

pub fn transgression_analysis(f: &FibrationModel) -> TransgressionAnalysis {
    let names = f.total.generators();
    let mut echelon = Echelon::new();
    let mut d0_rows = Vec::new();
    let mut contracted_pairs = Vec::new();
    let mut odd_to_even_only = true;
    let mut removed_even = 0;
    let mut removed_odd = 0;
    for j in 0..f.fiber.len() {
        let row = d0_row(f, j);
        if row.is_empty() {
            continue;
        }
        let fiber_name = names[f.fiber_index(j)].name.clone();
        d0_rows.push((
            fiber_name.clone(),
            row.iter()
                .map(|(i, c)| (names[*i].name.clone(), Frac(c.clone())))
                .collect(),
        ));
        let reduced = echelon.reduce(&row);
        if let Some(&(lead, _)) = reduced.first() {
            echelon.insert(&row);
            let fiber_odd = f.fiber.algebra().is_odd(j);
            let base_odd = f.base.algebra().is_odd(lead);
            odd_to_even_only &= fiber_odd && !base_odd;
            // one fiber and one base generator of opposite parity disappear
            if fiber_odd {
                removed_odd += 1;
            } else {
                removed_even += 1;
            }
            if base_odd {
                removed_odd += 1;
            } else {
                removed_even += 1;
            }
            contracted_pairs.push((fiber_name, names[lead].name.clone()));
        }
    }
    let count =
        |m: &SullivanModel, odd: bool| m.generators().iter().filter(|g| g.is_odd() == odd).count();
    let surviving_even = count(&f.base, false) + count(&f.fiber, false) - removed_even;
    let surviving_odd = count(&f.base, true) + count(&f.fiber, true) - removed_odd;
    let by_degree = elliptic::homotopy_dimensions(&f.total);
    let (mut even, mut odd) = (0, 0);
    for (deg, n) in by_degree {
        if deg % 2 == 0 {
            even += n;
        } else {
            odd += n;
        }
    }
    assert_eq!(
        (surviving_even, surviving_odd),
        (even, odd),
        "transgression count disagrees with the linear part of the total model"
    );
    TransgressionAnalysis {
        d0_rows,
        rank: contracted_pairs.len(),
        contracted_pairs,
        surviving_even,
        surviving_odd,
        odd_to_even_only,
    }
}

/// Whether `H(X) → H(F)` is onto, checked through the formal dimension of `F`.
pub fn restriction_to_fiber(f: &FibrationModel, fiber_top: Degree) -> SurjectivityReport {
    let nb = f.base_len();
    let falg = f.fiber.algebra();
    let images: Vec<Polynomial> = (0..f.total.len())
        .map(|i| {
            if i < nb {
                Polynomial::zero(falg)
            } else {
                Polynomial::generator(falg, i - nb)
            }
        })
        .collect();
    cohomology::cohomology_surjects(&f.total, &f.fiber, &images, fiber_top)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "==")]
    Eq,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Relation::Le => "<=",
            Relation::Lt => "<",
            Relation::Eq => "==",
        })
    }
}

/// `lhs relation rhs` with `slack = rhs − lhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InequalityCheck {
    pub id: String,
    pub description: String,
    pub lhs: Frac,
    pub rhs: Frac,
    pub relation: Relation,
    pub slack: Frac,
    pub holds: bool,
    /// A failing asserted check is an error; unasserted ones are diagnostics.
    pub asserted: bool,
    /// When the check is expected to hold.
    pub scope: String,
}

impl InequalityCheck {
    fn new(
        id: &str,
        description: &str,
        lhs: Q,
        relation: Relation,
        rhs: Q,
        asserted: bool,
        scope: &str,
    ) -> Self {
        let holds = match relation {
            Relation::Le => lhs <= rhs,
            Relation::Lt => lhs < rhs,
            Relation::Eq => lhs == rhs,
        };
        InequalityCheck {
            id: id.to_string(),
            description: description.to_string(),
            slack: Frac(&rhs - &lhs),
            lhs: Frac(lhs),
            rhs: Frac(rhs),
            relation,
            holds,
            asserted,
            scope: scope.to_string(),
        }
    }

    pub fn failed_assertion(&self) -> bool {
        self.asserted && !self.holds
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormalityFlags {
    pub fiber: Option<FormalityCertificate>,
    pub base: Option<FormalityCertificate>,
    pub total: Option<FormalityCertificate>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub name: String,
    pub fiber: EllipticInvariants,
    pub base: EllipticInvariants,
    pub total: EllipticInvariants,
    pub transgression: TransgressionAnalysis,
    pub pi_trivial: bool,
    pub tnhz: bool,
    pub restriction: SurjectivityReport,
    pub formality: FormalityFlags,
    /// `(dim π(F) + dim π(B)) / (dim H(F) · dim H(B))`.
    pub h_product: Frac,
    /// `dim im(d₀|T_F)` when a valid splitting of the fiber is known.
    pub halving_exponent: Option<usize>,
    pub checks: Vec<InequalityCheck>,
}

impl FibrationReport {
    pub fn check(&self, id: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn asserted_failures(&self) -> Vec<&InequalityCheck> {
        self.checks
            .iter()
            .filter(|c| c.failed_assertion())
            .collect()
    }

    pub fn all_asserted_hold(&self) -> bool {
        self.asserted_failures().is_empty()
    }
}

fn decomposition_for(
    which: &'static str,
    minimal: &SullivanModel,
    supplied: Option<&FormalDecomposition>,
) -> Result<Option<FormalDecomposition>, FibrationError> {
    match supplied {
        Some(dec) => {
            elliptic::validate_decomposition(minimal, dec).map_err(|e| {
                FibrationError::Decomposition {
                    which,
                    message: e.to_string(),
                }
            })?;
            Ok(Some(dec.clone()))
        }
        None => {
            let dec = elliptic::infer_decomposition(minimal);
            Ok(elliptic::validate_decomposition(minimal, &dec)
                .ok()
                .map(|_| dec))
        }
    }
}

fn n(x: usize) -> Q {
    from_usize(x)
}

fn pow2(k: i64) -> Q {
    let two = Q::from_integer(2.into());
    if k >= 0 {
        num_traits::pow(two, k as usize)
    } else {
        Q::one() / num_traits::pow(two, (-k) as usize)
    }
}

/// Computes invariants of `F`, `B`, `X` and evaluates every fibration check.
pub fn analyze_fibration(f: &FibrationModel) -> Result<FibrationReport, FibrationError> {
    let fa: Analysis = elliptic::analyze(&f.fiber, None)?;
    let ba: Analysis = elliptic::analyze(&f.base, None)?;
    let xa: Analysis = elliptic::analyze(&f.total, None)?;
    let (fi, bi, xi) = (&fa.invariants, &ba.invariants, &xa.invariants);
    let tr = transgression_analysis(f);
    let restriction = restriction_to_fiber(f, fi.formal_dimension);
    let tnhz = restriction.surjective;
    let pi_trivial = tr.rank == 0;
    let formality = FormalityFlags {
        fiber: elliptic::formality_certificate(&f.fiber, fi),
        base: elliptic::formality_certificate(&f.base, bi),
        total: elliptic::formality_certificate(&xa.reduction.minimal, xi),
    };
    let fiber_dec = decomposition_for("fiber", &f.fiber, f.fiber_decomposition.as_ref())?;
    let base_dec = decomposition_for("base", &f.base, f.base_decomposition.as_ref())?;
    let halving_exponent = match (&fiber_dec, &base_dec) {
        (Some(dec), Some(_)) => {
            let mut e = Echelon::new();
            for name in &dec.t {
                let j = f.fiber.algebra().index_of(name).expect("validated");
                e.insert(&d0_row(f, j));
            }
            Some(e.rank())
        }
        _ => None,
    };

    let (hf, hb, hx) = (fi.h().clone(), bi.h().clone(), xi.h().clone());
    let h_product = Q::new((fi.dim_pi + bi.dim_pi).into(), (fi.dim_h * bi.dim_h).into());
    let fiber_f0 = fi.is_f0();
    let formal_scope =
        (formality.fiber.is_some() && formality.base.is_some() && formality.total.is_some())
            || xi.is_f0()
            || (fiber_f0 && tnhz);

    let mut checks = Vec::new();
    let mut add =
        |id: &str, desc: &str, lhs: Q, rel: Relation, rhs: Q, asserted: bool, scope: &str| {
            checks.push(InequalityCheck::new(
                id, desc, lhs, rel, rhs, asserted, scope,
            ));
        };
    use Relation::*;
    add(
        "homotopy_odd_total_ge_odd_base",
        "dim π_odd(B) <= dim π_odd(X)",
        n(bi.dim_pi_odd),
        Le,
        n(xi.dim_pi_odd),
        true,
        "elliptic",
    );
    add(
        "homotopy_odd_base_ge_even_base",
        "dim π_even(B) <= dim π_odd(B)",
        n(bi.dim_pi_even),
        Le,
        n(bi.dim_pi_odd),
        true,
        "elliptic",
    );
    add(
        "homotopy_odd_total_ge_even_total",
        "dim π_even(X) <= dim π_odd(X)",
        n(xi.dim_pi_even),
        Le,
        n(xi.dim_pi_odd),
        true,
        "elliptic",
    );
    add(
        "homotopy_even_total_ge_even_fiber",
        "dim π_even(F) <= dim π_even(X)",
        n(fi.dim_pi_even),
        Le,
        n(xi.dim_pi_even),
        true,
        "elliptic",
    );
    add(
        "homotopy_odd_total_ge_odd_fiber",
        "dim π_odd(F) <= dim π_odd(X)",
        n(fi.dim_pi_odd),
        Le,
        n(xi.dim_pi_odd),
        true,
        "elliptic",
    );
    add(
        "homotopy_summed",
        "dim π(F) + dim π(B) <= dim π(X) + 2 dim π_odd(X)",
        n(fi.dim_pi + bi.dim_pi),
        Le,
        n(xi.dim_pi + 2 * xi.dim_pi_odd),
        true,
        "elliptic",
    );
    add(
        "homotopy_triple",
        "dim π(F) + dim π(B) <= 3 dim π(X)",
        n(fi.dim_pi + bi.dim_pi),
        Le,
        n(3 * xi.dim_pi),
        true,
        "elliptic",
    );
    add(
        "homotopy_double",
        "dim π(F) + dim π(B) <= 2 dim π(X)",
        n(fi.dim_pi + bi.dim_pi),
        Le,
        n(2 * xi.dim_pi),
        fiber_f0,
        "fiber has positive Euler characteristic",
    );
    add(
        "cohomology_product_bound",
        "dim H(X) <= dim H(F) dim H(B)",
        n(xi.dim_h),
        Le,
        n(fi.dim_h * bi.dim_h),
        true,
        "elliptic",
    );
    add(
        "quotient_triple_bound",
        "h(F x B) <= 3 h(X)",
        h_product.clone(),
        Le,
        &hx * Q::from_integer(3.into()),
        true,
        "elliptic",
    );
    add(
        "quotient_double_bound",
        "h(F x B) <= 2 h(X)",
        h_product.clone(),
        Le,
        &hx * Q::from_integer(2.into()),
        fiber_f0,
        "fiber has positive Euler characteristic",
    );
    let formal_desc = "fiber, base and total formal; or total positively elliptic; or positively elliptic fiber with surjective restriction";
    add(
        "conjecture_lower",
        "h(F x B) / 2 <= h(X)",
        &h_product / Q::from_integer(2.into()),
        Le,
        hx.clone(),
        formal_scope,
        formal_desc,
    );
    add(
        "conjecture_upper_strict",
        "h(X) < h(F) + h(B) + 1/4",
        hx.clone(),
        Lt,
        &hf + &hb + Q::new(1.into(), 4.into()),
        formal_scope,
        formal_desc,
    );
    add(
        "tnhz_implied",
        "h(X) <= h(F) + h(B)",
        hx.clone(),
        Le,
        &hf + &hb,
        tnhz,
        "restriction to the fiber is onto in cohomology",
    );
    add(
        "pi_trivial_implied",
        "h(F x B) <= h(X)",
        h_product.clone(),
        Le,
        hx.clone(),
        pi_trivial,
        "transgression vanishes",
    );
    if let Some(c) = halving_exponent {
        add(
            "contraction_halving",
            "dim H(X) 2^c <= dim H(F) dim H(B), c = dim im d0 on the odd-sphere part of F",
            n(xi.dim_h) * pow2(c as i64),
            Le,
            n(fi.dim_h * bi.dim_h),
            true,
            "fiber and base split as odd spheres times a positively elliptic part",
        );
    }
    add(
        "base_exponential_diagnostic",
        "2^(χπ(B) + dim π_even(B)) dim H(F) <= dim H(X)",
        pow2(bi.chi_pi + bi.dim_pi_even as i64) * n(fi.dim_h),
        Le,
        n(xi.dim_h),
        false,
        "diagnostic only",
    );
    add(
        "formal_dimension_additivity",
        "formal dim X == formal dim F + formal dim B",
        n(xi.formal_dimension as usize),
        Eq,
        n((fi.formal_dimension + bi.formal_dimension) as usize),
        true,
        "elliptic",
    );
    add(
        "chi_pi_additivity",
        "χπ(X) == χπ(F) + χπ(B)",
        Q::from_integer(xi.chi_pi.into()),
        Eq,
        Q::from_integer((fi.chi_pi + bi.chi_pi).into()),
        true,
        "elliptic",
    );
    add(
        "transgression_odd_to_even",
        "contracted pairs of the wrong parity == 0",
        if tr.odd_to_even_only {
            Q::zero()
        } else {
            Q::one()
        },
        Eq,
        Q::zero(),
        true,
        "elliptic",
    );

    Ok(FibrationReport {
        name: f.name.clone(),
        fiber: fi.clone(),
        base: bi.clone(),
        total: xi.clone(),
        transgression: tr,
        pi_trivial,
        tnhz,
        restriction,
        formality,
        h_product: Frac(h_product),
        halving_exponent,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_model;
    use crate::rational::frac;

    fn m(text: &str) -> SullivanModel {
        parse_model(text).unwrap()
    }

    fn hopf() -> FibrationModel {
        let base = m("model S4\ngen b 4\ngen c 7\nd c = b^2\n");
        let fiber = m("model S3\ngen f 3\n");
        build_fibration_from_text("hopf", &base, &fiber, &[("f", "b")]).unwrap()
    }

    fn slack(r: &FibrationReport, id: &str) -> Q {
        r.check(id).unwrap().slack.0.clone()
    }

    #[test]
    fn hopf_checks() {
        let r = analyze_fibration(&hopf()).unwrap();
        assert_eq!(
            r.transgression.contracted_pairs,
            vec![("f".to_string(), "b".to_string())]
        );
        assert_eq!(r.total.dim_pi, 1);
        assert_eq!(r.total.dim_h, 2);
        assert_eq!(slack(&r, "homotopy_summed"), Q::zero());
        let double = r.check("homotopy_double").unwrap();
        assert_eq!(
            (double.lhs.0.clone(), double.rhs.0.clone()),
            (frac(3, 1), frac(2, 1))
        );
        assert!(!double.holds && !double.asserted);
        assert_eq!(r.halving_exponent, Some(1));
        let halving = r.check("contraction_halving").unwrap();
        assert!(halving.holds && halving.slack.0.is_zero());
        let diag = r.check("base_exponential_diagnostic").unwrap();
        assert_eq!(
            (diag.lhs.0.clone(), diag.rhs.0.clone()),
            (frac(4, 1), frac(2, 1))
        );
        assert!(!diag.holds);
        assert!(!r.tnhz && !r.pi_trivial);
        assert_eq!(r.h_product.0, frac(3, 4));
        assert!(r.all_asserted_hold(), "{:?}", r.asserted_failures());
    }

    #[test]
    fn product_is_trivial_both_ways() {
        let base = m("model S4\ngen b 4\ngen c 7\nd c = b^2\n");
        let fiber = m("model S3\ngen f 3\n");
        let r = analyze_fibration(&build_fibration("prod", &base, &fiber, &[]).unwrap()).unwrap();
        assert!(r.tnhz && r.pi_trivial);
        assert_eq!(slack(&r, "homotopy_summed"), frac(4, 1));
        assert_eq!(r.h_product.0, r.total.h().clone());
        assert!(r.check("tnhz_implied").unwrap().asserted);
        assert!(r.all_asserted_hold());
    }

    #[test]
    fn twistor_is_tnhz() {
        let base = m("model S4\ngen b 4\ngen c 7\nd c = b^2\n");
        let fiber = m("model S2\ngen x 2\ngen y 3\nd y = x^2\n");
        let f = build_fibration_from_text("twistor", &base, &fiber, &[("y", "b")]).unwrap();
        let r = analyze_fibration(&f).unwrap();
        assert_eq!(r.total.dim_h, 4);
        assert_eq!(r.total.dim_pi, 2);
        assert_eq!(r.transgression.rank, 1);
        assert!(r.tnhz && !r.pi_trivial);
        assert!(r.check("quotient_double_bound").unwrap().asserted);
        assert!(r.all_asserted_hold());
    }

    #[test]
    fn rejects_bad_perturbations() {
        let base = m("model S4\ngen b 4\ngen c 7\nd c = b^2\n");
        let fiber = m("model S2\ngen x 2\ngen y 3\nd y = x^2\n");
        let err = build_fibration_from_text("bad", &base, &fiber, &[("y", "x^2")]).unwrap_err();
        assert!(matches!(err, FibrationError::PerturbationOutsideIdeal(_)));
        let err = build_fibration_from_text("bad", &base, &fiber, &[("x", "b")]).unwrap_err();
        assert!(matches!(err, FibrationError::PerturbationDegree { .. }));
        let base = m("model S2\ngen b 2\ngen c 3\nd c = b^2\n");
        let fiber = m("model F\ngen w 3\ngen z 5\n");
        let err = build_fibration_from_text("bad", &base, &fiber, &[("z", "c*w")]).unwrap_err();
        assert!(matches!(
            err,
            FibrationError::Total(AlgebraError::DSquaredNonzero { .. })
        ));
        let err = build_fibration_from_text("bad", &base, &base, &[]).unwrap_err();
        assert!(matches!(err, FibrationError::NameClash(_)));
    }
}
