//! Serializable reports and their plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algebra::{Degree, SullivanModel};
use crate::asymptotics::{self, Threshold};
use crate::catalog::{self, TwoStageParams};
use crate::cohomology;
use crate::elliptic::{
    self, ClassPredicates, EllipticInvariants, EllipticityReport, F0Check, FormalityCertificate,
    InvariantsError,
};
use crate::fibration::FibrationReport;
use crate::rational::{fraction_string, Frac, Q};

/// Everything `invariants` prints for one model.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantsReport {
    #[serde(flatten)]
    pub invariants: EllipticInvariants,
    pub minimal: bool,
    pub cancelled_pairs: Vec<(String, String)>,
    pub ellipticity: EllipticityReport,
    pub formality: Option<FormalityCertificate>,
    pub f0: F0Check,
    pub classes: ClassPredicates,
    pub poincare_duality: bool,
    pub pure_bound: Option<PureBoundSummary>,
}

/// `dim H` against both forms of the pure-model bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PureBoundSummary {
    pub literal: String,
    pub corrected: String,
    pub literal_holds: bool,
    pub corrected_holds: bool,
}

pub fn invariants_report(
    m: &SullivanModel,
    cap: Option<Degree>,
) -> Result<InvariantsReport, InvariantsError> {
    let a = elliptic::analyze(m, cap)?;
    let minimal = &a.reduction.minimal;
    let pure_bound = catalog::pure_bound(minimal).ok().map(|b| PureBoundSummary {
        literal: b.literal.to_string(),
        corrected: b.corrected.to_string(),
        literal_holds: b.literal_holds(),
        corrected_holds: b.corrected_holds(),
    });
    Ok(InvariantsReport {
        minimal: m.is_minimal(),
        cancelled_pairs: a.reduction.cancelled_pairs.clone(),
        formality: elliptic::formality_certificate(minimal, &a.invariants),
        f0: elliptic::f0_check_and_formula(&a.invariants),
        classes: elliptic::class_predicates(minimal),
        poincare_duality: cohomology::poincare_check(&a.betti),
        ellipticity: a.ellipticity,
        pure_bound,
        invariants: a.invariants,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub r: usize,
    pub dim_pi: usize,
    pub bound: Frac,
    pub case1: Option<Frac>,
    pub case2: Option<Frac>,
}

pub fn bound_report(p: TwoStageParams) -> BoundReport {
    let (case1, case2) = asymptotics::case_bounds(p);
    BoundReport {
        n: p.n,
        m: p.m,
        r: p.r,
        dim_pi: p.dim_pi(),
        bound: Frac(asymptotics::two_stage_bound(p)),
        case1: case1.map(Frac),
        case2: case2.map(Frac),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdReport {
    pub epsilon: Frac,
    #[serde(flatten)]
    pub threshold: Threshold,
}

pub fn threshold_report(epsilon: &Q) -> ThresholdReport {
    ThresholdReport {
        epsilon: Frac(epsilon.clone()),
        threshold: asymptotics::threshold(epsilon),
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn invariants_text(r: &InvariantsReport) -> String {
    let i = &r.invariants;
    let mut s = String::new();
    let _ = writeln!(s, "model {}", i.name);
    let _ = writeln!(s, "  even degrees      [{}]", join(&i.even_degrees));
    let _ = writeln!(s, "  odd degrees       [{}]", join(&i.odd_degrees));
    let _ = writeln!(
        s,
        "  dim pi            {} (even {}, odd {})",
        i.dim_pi, i.dim_pi_even, i.dim_pi_odd
    );
    let _ = writeln!(s, "  dim H             {}", i.dim_h);
    let _ = writeln!(s, "  h                 {}", fraction_string(i.h()));
    let _ = writeln!(s, "  formal dimension  {}", i.formal_dimension);
    let _ = writeln!(s, "  euler char        {}", i.chi);
    let _ = writeln!(s, "  homotopy euler    {}", i.chi_pi);
    let betti: Vec<String> = i.betti.iter().map(|(k, b)| format!("b{k}={b}")).collect();
    let _ = writeln!(s, "  betti             {}", betti.join(" "));
    if let Some(c) = r.formality {
        let _ = writeln!(s, "  formal            yes ({c:?})");
    }
    if let Some(b) = &r.pure_bound {
        let _ = writeln!(
            s,
            "  pure bound        literal {} ({}), corrected {} ({})",
            b.literal,
            if b.literal_holds { "holds" } else { "fails" },
            b.corrected,
            if b.corrected_holds { "holds" } else { "fails" },
        );
    }
    s
}

pub fn fibration_text(r: &FibrationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "fibration {}", r.name);
    for (label, i) in [("fiber", &r.fiber), ("base", &r.base), ("total", &r.total)] {
        let _ = writeln!(
            s,
            "  {label:<6} dim pi {} (even {}, odd {}), dim H {}, h {}",
            i.dim_pi,
            i.dim_pi_even,
            i.dim_pi_odd,
            i.dim_h,
            fraction_string(i.h())
        );
    }
    let pairs: Vec<String> = r
        .transgression
        .contracted_pairs
        .iter()
        .map(|(f, b)| format!("{f}->{b}"))
        .collect();
    let _ = writeln!(s, "  contracted pairs [{}]", pairs.join(", "));
    let _ = writeln!(s, "  pi-trivial {}, tnhz {}", r.pi_trivial, r.tnhz);
    for c in &r.checks {
        let status = match (c.holds, c.asserted) {
            (true, _) => "ok",
            (false, true) => "FAIL",
            (false, false) => "violated (not asserted)",
        };
        let _ = writeln!(
            s,
            "  {:<36} {} {} {}  slack {}  {}",
            c.id,
            fraction_string(&c.lhs.0),
            c.relation,
            fraction_string(&c.rhs.0),
            fraction_string(&c.slack.0),
            status
        );
    }
    s
}
