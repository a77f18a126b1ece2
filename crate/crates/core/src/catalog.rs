//! Named example models with closed-form invariants, example fibrations, and
//! model constructions (degree scaling, the pure-model bound, random
//! two-stage models).

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    AlgebraError, Degree, FreeAlgebra, Generator, Monomial, Polynomial, SullivanModel,
};
use crate::elliptic::{self, EllipticInvariants, FormalDecomposition, Verdict};
use crate::fibration::{self, FibrationError, FibrationModel};
use crate::rational::{frac, from_usize, q, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CatalogError {
    #[error("unknown catalog key `{0}`")]
    UnknownKey(String),
    #[error("invalid parameters for `{key}`: {message}")]
    BadParameters { key: String, message: String },
    #[error("model is not two-stage")]
    NotTwoStage,
    #[error("model is not pure and minimal")]
    NotPure,
    #[error("degree overflow while scaling")]
    DegreeOverflow,
    #[error("could not achieve ellipticity within the retry budget of {0}")]
    RetryBudgetExhausted(u32),
    #[error("no decomposable target of even degree exists for these parameters")]
    NoTargets,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Invariants(#[from] elliptic::InvariantsError),
}

fn bad(key: &str, message: impl Into<String>) -> CatalogError {
    CatalogError::BadParameters {
        key: key.to_string(),
        message: message.into(),
    }
}

/// Invariants known in closed form, independent of any computation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KnownInvariants {
    pub dim_pi_even: usize,
    pub dim_pi_odd: usize,
    pub dim_h: BigUint,
    pub formal_dimension: Degree,
    pub chi: i64,
}

impl KnownInvariants {
    pub fn dim_pi(&self) -> usize {
        self.dim_pi_even + self.dim_pi_odd
    }

    pub fn chi_pi(&self) -> i64 {
        self.dim_pi_odd as i64 - self.dim_pi_even as i64
    }

    pub fn h(&self) -> Q {
        Q::new(self.dim_pi().into(), self.dim_h.clone().into())
    }

    /// Künneth.
    pub fn product(parts: &[KnownInvariants]) -> KnownInvariants {
        let mut out = KnownInvariants {
            dim_pi_even: 0,
            dim_pi_odd: 0,
            dim_h: BigUint::one(),
            formal_dimension: 0,
            chi: 1,
        };
        for p in parts {
            out.dim_pi_even += p.dim_pi_even;
            out.dim_pi_odd += p.dim_pi_odd;
            out.dim_h *= &p.dim_h;
            out.formal_dimension += p.formal_dimension;
            out.chi *= p.chi;
        }
        out
    }

    /// Names of the invariants that disagree with `inv`.
    pub fn mismatches(&self, inv: &EllipticInvariants) -> Vec<&'static str> {
        let mut out = Vec::new();
        if self.dim_pi_even != inv.dim_pi_even {
            out.push("dim_pi_even");
        }
        if self.dim_pi_odd != inv.dim_pi_odd {
            out.push("dim_pi_odd");
        }
        if self.dim_h != BigUint::from(inv.dim_h) {
            out.push("dim_H");
        }
        if self.formal_dimension != inv.formal_dimension || self.formal_dimension != inv.top_degree
        {
            out.push("formal_dimension");
        }
        if self.chi != inv.chi {
            out.push("chi");
        }
        if self.chi_pi() != inv.chi_pi {
            out.push("chi_pi");
        }
        if &self.h() != inv.h() {
            out.push("h");
        }
        out
    }
}

/// Why an entry is known to be formal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormalityReason {
    PositivelyElliptic,
    OneEvenTwoOdd,
    OddSpheres,
    ProductOfFormal,
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub key: String,
    pub model: SullivanModel,
    pub known: Option<KnownInvariants>,
    pub formality: Option<FormalityReason>,
    pub decomposition: Option<FormalDecomposition>,
}

fn model(name: &str, gens: &[(&str, Degree)], diff: &[(&str, Polynomial)]) -> SullivanModel {
    let alg = FreeAlgebra::new(gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect())
        .expect("valid generators");
    let mut d: Vec<Polynomial> = (0..alg.len()).map(|_| Polynomial::zero(&alg)).collect();
    for (g, p) in diff {
        let i = alg.index_of(g).expect("known generator");
        d[i] = p.reindex(&alg, &(0..alg.len()).map(Some).collect::<Vec<_>>());
    }
    SullivanModel::new(name, alg, d).expect("catalog model is valid")
}

fn gens_alg(gens: &[(&str, Degree)]) -> std::sync::Arc<FreeAlgebra> {
    FreeAlgebra::new(gens.iter().map(|(n, d)| Generator::new(*n, *d)).collect())
        .expect("valid generators")
}

fn dec(t: &[&str], v: &[&str]) -> FormalDecomposition {
    FormalDecomposition {
        t: t.iter().map(|s| s.to_string()).collect(),
        v: v.iter().map(|s| s.to_string()).collect(),
    }
}

fn known(even: usize, odd: usize, dim_h: u64, fd: Degree, chi: i64) -> KnownInvariants {
    KnownInvariants {
        dim_pi_even: even,
        dim_pi_odd: odd,
        dim_h: BigUint::from(dim_h),
        formal_dimension: fd,
        chi,
    }
}

/// `S^n`, `n >= 2`.
pub fn sphere(n: Degree) -> Result<CatalogEntry, CatalogError> {
    let key = format!("sphere:{n}");
    if n < 2 {
        return Err(bad(&key, "sphere dimension must be at least 2"));
    }
    if n % 2 == 1 {
        let m = model(&format!("S{n}"), &[("y", n)], &[]);
        Ok(CatalogEntry {
            key,
            model: m,
            known: Some(known(0, 1, 2, n, 0)),
            formality: Some(FormalityReason::OddSpheres),
            decomposition: Some(dec(&["y"], &[])),
        })
    } else {
        let alg = gens_alg(&[("x", n), ("y", 2 * n - 1)]);
        let x = Polynomial::generator(&alg, 0);
        let m = model(
            &format!("S{n}"),
            &[("x", n), ("y", 2 * n - 1)],
            &[("y", x.pow(2))],
        );
        Ok(CatalogEntry {
            key,
            model: m,
            known: Some(known(1, 1, 2, n, 2)),
            formality: Some(FormalityReason::PositivelyElliptic),
            decomposition: Some(dec(&[], &["x", "y"])),
        })
    }
}

fn truncated(key: String, name: String, even: Degree, power: u32) -> CatalogEntry {
    let odd = even * power - 1;
    let alg = gens_alg(&[("x", even), ("y", odd)]);
    let x = Polynomial::generator(&alg, 0);
    let m = model(&name, &[("x", even), ("y", odd)], &[("y", x.pow(power))]);
    CatalogEntry {
        key,
        model: m,
        known: Some(known(1, 1, power as u64, even * (power - 1), power as i64)),
        formality: Some(FormalityReason::PositivelyElliptic),
        decomposition: Some(dec(&[], &["x", "y"])),
    }
}

/// `CP^n`, `n >= 1`.
pub fn cpn(n: u32) -> Result<CatalogEntry, CatalogError> {
    let key = format!("cpn:{n}");
    if n < 1 {
        return Err(bad(&key, "n must be at least 1"));
    }
    Ok(truncated(key, format!("CP{n}"), 2, n + 1))
}

/// `HP^n`, `n >= 1`.
pub fn hpn(n: u32) -> Result<CatalogEntry, CatalogError> {
    let key = format!("hpn:{n}");
    if n < 1 {
        return Err(bad(&key, "n must be at least 1"));
    }
    Ok(truncated(key, format!("HP{n}"), 4, n + 1))
}

/// `Λ(x, z, y)` with `deg x = even_degree`, `dz = x^power`, `dy = 0`, `deg y = odd_degree`.
pub fn star_type(
    even_degree: Degree,
    power: u32,
    odd_degree: Degree,
) -> Result<CatalogEntry, CatalogError> {
    let key = format!("star:{even_degree},{power},{odd_degree}");
    if even_degree < 2 || even_degree % 2 == 1 {
        return Err(bad(&key, "the even degree must be even and at least 2"));
    }
    if power < 2 {
        return Err(bad(
            &key,
            "power must be at least 2; power 1 gives a contractible pair",
        ));
    }
    if odd_degree < 3 || odd_degree.is_multiple_of(2) {
        return Err(bad(&key, "the odd degree must be odd and at least 3"));
    }
    let z_deg = even_degree * power - 1;
    let gens = [("x", even_degree), ("z", z_deg), ("y", odd_degree)];
    let alg = gens_alg(&gens);
    let x = Polynomial::generator(&alg, 0);
    let m = model(
        &format!("star({even_degree},{power},{odd_degree})"),
        &gens,
        &[("z", x.pow(power))],
    );
    Ok(CatalogEntry {
        key,
        model: m,
        known: Some(known(
            1,
            2,
            2 * power as u64,
            even_degree * (power - 1) + odd_degree,
            0,
        )),
        formality: Some(FormalityReason::OneEvenTwoOdd),
        decomposition: Some(dec(&["y"], &["x", "z"])),
    })
}

/// Positively elliptic stand-ins for the three Wallach flag manifolds:
/// `Λ(a, b, y, z)` with `deg a = deg b = k ∈ {2, 4, 8}`, `dy = a² + ab + b²`,
/// `dz = a²b + ab²`.
pub fn wallach(dim: u32) -> Result<CatalogEntry, CatalogError> {
    let key = format!("wallach:{dim}");
    let k = match dim {
        6 => 2,
        12 => 4,
        24 => 8,
        _ => return Err(bad(&key, "dimension must be 6, 12 or 24")),
    };
    let gens = [("a", k), ("b", k), ("y", 2 * k - 1), ("z", 3 * k - 1)];
    let alg = gens_alg(&gens);
    let a = Polynomial::generator(&alg, 0);
    let b = Polynomial::generator(&alg, 1);
    let ab = &a * &b;
    let dy = &(&a.pow(2) + &ab) + &b.pow(2);
    let dz = &(&a * &ab) + &(&ab * &b);
    let m = model(&format!("W{dim}"), &gens, &[("y", dy), ("z", dz)]);
    Ok(CatalogEntry {
        key,
        model: m,
        known: Some(known(2, 2, 6, dim, 6)),
        formality: Some(FormalityReason::PositivelyElliptic),
        decomposition: Some(dec(&[], &["a", "b", "y", "z"])),
    })
}

/// Tensor product; closed-form data and decompositions combine factorwise.
pub fn product(entries: &[CatalogEntry]) -> CatalogEntry {
    let key = entries
        .iter()
        .map(|e| e.key.as_str())
        .collect::<Vec<_>>()
        .join("*");
    let name = entries
        .iter()
        .map(|e| e.model.name())
        .collect::<Vec<_>>()
        .join("x");
    let models: Vec<SullivanModel> = entries.iter().map(|e| e.model.clone()).collect();
    let m = SullivanModel::tensor_product(name, &models);
    let known = entries
        .iter()
        .map(|e| e.known.clone())
        .collect::<Option<Vec<_>>>()
        .map(|parts| KnownInvariants::product(&parts));
    let formality = if entries.iter().all(|e| e.formality.is_some()) {
        Some(if entries.len() == 1 {
            entries[0].formality.unwrap()
        } else {
            FormalityReason::ProductOfFormal
        })
    } else {
        None
    };
    let decomposition = entries
        .iter()
        .map(|e| e.decomposition.clone())
        .collect::<Option<Vec<_>>>()
        .map(|parts| {
            let mut out = FormalDecomposition {
                t: Vec::new(),
                v: Vec::new(),
            };
            let mut offset = 0;
            for (e, part) in entries.iter().zip(parts) {
                let local = e.model.algebra();
                let rename = |n: &String| {
                    m.generators()[offset + local.index_of(n).expect("known")]
                        .name
                        .clone()
                };
                out.t.extend(part.t.iter().map(rename));
                out.v.extend(part.v.iter().map(rename));
                offset += local.len();
            }
            out
        });
    CatalogEntry {
        key,
        model: m,
        known,
        formality,
        decomposition,
    }
}

fn parse_u32(key: &str, text: &str) -> Result<u32, CatalogError> {
    text.trim()
        .parse()
        .map_err(|_| bad(key, format!("`{text}` is not a nonnegative integer")))
}

/// Resolves a model key such as `sphere:7`, `cpn:3`, `hpn:2`, `star:2,3,5`,
/// `wallach:12`, `cayley-plane`, `aloff-wallach`, `berger:13`, or a product
/// `sphere:3*sphere:5`.
pub fn entry(key: &str) -> Result<CatalogEntry, CatalogError> {
    let key = key.trim();
    let key = key.strip_prefix("product:").unwrap_or(key);
    if key.contains('*') {
        let parts = key.split('*').map(entry).collect::<Result<Vec<_>, _>>()?;
        return Ok(product(&parts));
    }
    let (kind, arg) = key.split_once(':').unwrap_or((key, ""));
    let mut e = match kind {
        "sphere" => sphere(parse_u32(key, arg)?)?,
        "cpn" => cpn(parse_u32(key, arg)?)?,
        "hpn" => hpn(parse_u32(key, arg)?)?,
        "star" => {
            let nums = arg
                .split(',')
                .map(|s| parse_u32(key, s))
                .collect::<Result<Vec<_>, _>>()?;
            let [a, p, q] = nums[..] else {
                return Err(bad(key, "expected three comma-separated integers"));
            };
            star_type(a, p, q)?
        }
        "wallach" => wallach(parse_u32(key, arg)?)?,
        "cayley-plane" => truncated(key.to_string(), "CaP2".to_string(), 8, 3),
        "aloff-wallach" => star_type(2, 2, 5)?,
        "berger" => match arg {
            "7" => sphere(7)?,
            "13" => star_type(2, 3, 9)?,
            _ => return Err(bad(key, "expected berger:7 or berger:13")),
        },
        _ => return Err(CatalogError::UnknownKey(key.to_string())),
    };
    e.key = key.to_string();
    Ok(e)
}

/// Every named model used by the test suites.
pub fn model_keys() -> Vec<String> {
    let mut keys: Vec<String> = Vec::new();
    keys.extend((2..=8).map(|n| format!("sphere:{n}")));
    keys.extend((1..=5).map(|n| format!("cpn:{n}")));
    keys.extend((1..=2).map(|n| format!("hpn:{n}")));
    keys.extend(
        [
            "sphere:3*sphere:5",
            "sphere:2*sphere:3",
            "sphere:4*sphere:4",
            "cpn:2*sphere:3",
            "cpn:2*cpn:3",
            "star:2,2,7",
            "star:2,3,5",
            "star:4,2,3",
            "wallach:6",
            "wallach:12",
            "wallach:24",
            "cayley-plane",
            "aloff-wallach",
            "berger:7",
            "berger:13",
        ]
        .iter()
        .map(|s| s.to_string()),
    );
    keys
}

pub fn all_entries() -> Vec<CatalogEntry> {
    model_keys()
        .iter()
        .map(|k| entry(k).expect("catalog key"))
        .collect()
}

/// A catalog fibration and the formality splittings of its fiber and base.
#[derive(Clone, Debug)]
pub struct CatalogFibration {
    pub key: String,
    pub model: FibrationModel,
    /// Whether fiber, base and total are all known to be formal.
    pub formal: bool,
}

fn renamed(entry: &CatalogEntry, suffix: &str) -> (SullivanModel, Option<FormalDecomposition>) {
    let m = &entry.model;
    let gens: Vec<Generator> = m
        .generators()
        .iter()
        .map(|g| Generator::new(format!("{}{}", g.name, suffix), g.degree))
        .collect();
    let alg = FreeAlgebra::new(gens).expect("renamed generators");
    let map: Vec<Option<usize>> = (0..alg.len()).map(Some).collect();
    let d = m
        .differential()
        .iter()
        .map(|p| p.reindex(&alg, &map))
        .collect();
    let out = SullivanModel::new(m.name(), alg, d).expect("renaming preserves validity");
    let dec = entry.decomposition.as_ref().map(|d| FormalDecomposition {
        t: d.t.iter().map(|n| format!("{n}{suffix}")).collect(),
        v: d.v.iter().map(|n| format!("{n}{suffix}")).collect(),
    });
    (out, dec)
}

fn catalog_fibration(
    key: &str,
    fiber: &CatalogEntry,
    base: &CatalogEntry,
    perturbation: &[(&str, &str)],
    total_formal: bool,
) -> Result<CatalogFibration, CatalogError> {
    let (f, fdec) = renamed(fiber, "_f");
    let (b, bdec) = renamed(base, "_b");
    let mut model = fibration::build_fibration_from_text(key, &b, &f, perturbation)?;
    model.fiber_decomposition = fdec;
    model.base_decomposition = bdec;
    Ok(CatalogFibration {
        key: key.to_string(),
        model,
        formal: fiber.formality.is_some() && base.formality.is_some() && total_formal,
    })
}

/// Resolves a fibration key. Fiber generators carry the suffix `_f`, base
/// generators `_b`.
///
/// * `hopf:s3-s7-s4`, `hopf:s7-s15-s8`, `hopf:s3-s11-hp2`, `hopf:hpn:N`
/// * `twistor:s2-cp3-s4`, `twistor:s2-cp5-hp2`, `twistor:hpn:N`
/// * `s4-hp3-s8`, `s3-cp2`
/// * `product:FIBER/BASE` with model keys
pub fn fibration(key: &str) -> Result<CatalogFibration, CatalogError> {
    let key = key.trim();
    let quaternionic_hopf = |n: u32| -> Result<CatalogFibration, CatalogError> {
        catalog_fibration(key, &sphere(3)?, &hpn(n)?, &[("y_f", "x_b")], true)
    };
    let twistor = |n: u32| -> Result<CatalogFibration, CatalogError> {
        catalog_fibration(key, &sphere(2)?, &hpn(n)?, &[("y_f", "-x_b")], true)
    };
    match key {
        "hopf:s3-s7-s4" => return quaternionic_hopf(1),
        "hopf:s3-s11-hp2" => return quaternionic_hopf(2),
        "hopf:s7-s15-s8" => {
            return catalog_fibration(key, &sphere(7)?, &sphere(8)?, &[("y_f", "x_b")], true)
        }
        "twistor:s2-cp3-s4" => return twistor(1),
        "twistor:s2-cp5-hp2" => return twistor(2),
        "s4-hp3-s8" => {
            return catalog_fibration(key, &sphere(4)?, &sphere(8)?, &[("y_f", "-x_b")], true)
        }
        "s3-cp2" => {
            return catalog_fibration(key, &sphere(3)?, &cpn(2)?, &[("y_f", "x_b^2")], true)
        }
        _ => {}
    }
    if let Some(n) = key.strip_prefix("hopf:hpn:") {
        return quaternionic_hopf(parse_u32(key, n)?);
    }
    if let Some(n) = key.strip_prefix("twistor:hpn:") {
        return twistor(parse_u32(key, n)?);
    }
    if let Some(rest) = key.strip_prefix("product:") {
        let (f, b) = rest
            .split_once('/')
            .ok_or_else(|| bad(key, "expected product:FIBER/BASE"))?;
        let (f, b) = (entry(f)?, entry(b)?);
        let formal = f.formality.is_some() && b.formality.is_some();
        return catalog_fibration(key, &f, &b, &[], formal);
    }
    Err(CatalogError::UnknownKey(key.to_string()))
}

pub fn fibration_keys() -> Vec<String> {
    [
        "hopf:s3-s7-s4",
        "hopf:s7-s15-s8",
        "hopf:s3-s11-hp2",
        "hopf:hpn:3",
        "twistor:s2-cp3-s4",
        "twistor:s2-cp5-hp2",
        "s4-hp3-s8",
        "s3-cp2",
        "product:sphere:3/sphere:4",
        "product:sphere:2/cpn:2",
        "product:cpn:2/sphere:5",
        "product:star:2,2,5/sphere:4",
        "product:sphere:3/sphere:5",
        "product:wallach:6/sphere:3",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

pub fn all_fibrations() -> Vec<CatalogFibration> {
    fibration_keys()
        .iter()
        .map(|k| fibration(k).expect("catalog fibration"))
        .collect()
}

/// Multiplies the degrees of a two-stage model so that `d` stays homogeneous:
/// closed generators get `3^i·deg`, the others `3^i·deg(d w) − 1`. The
/// differential is transported unchanged.
pub fn degree_scale(m: &SullivanModel, i: u32) -> Result<SullivanModel, CatalogError> {
    let preds = elliptic::class_predicates(m);
    if !preds.is_two_stage {
        return Err(CatalogError::NotTwoStage);
    }
    let factor = 3u32.checked_pow(i).ok_or(CatalogError::DegreeOverflow)?;
    let gens = m
        .generators()
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let dg = m.d_generator(j);
            let degree = if dg.is_zero() {
                g.degree.checked_mul(factor)
            } else {
                (g.degree + 1).checked_mul(factor).map(|d| d - 1)
            };
            degree
                .map(|d| Generator::new(g.name.clone(), d))
                .ok_or(CatalogError::DegreeOverflow)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let alg = FreeAlgebra::new(gens)?;
    let map: Vec<Option<usize>> = (0..alg.len()).map(Some).collect();
    let d = m
        .differential()
        .iter()
        .map(|p| p.reindex(&alg, &map))
        .collect();
    Ok(SullivanModel::new(format!("{}[x3^{i}]", m.name()), alg, d)?)
}

/// The pure-model cohomology bound, literal and corrected, with the auxiliary
/// fibration from its proof.
#[derive(Clone, Debug)]
pub struct PureBound {
    pub formal_dimension: Degree,
    /// `⌈d/aᵢ⌉` per even generator.
    pub ceilings: Vec<u64>,
    /// `2^{odd−even} · ∏⌈d/aᵢ⌉`.
    pub literal: BigUint,
    /// `2^{odd−even} · ∏(⌈d/aᵢ⌉ + 1)`.
    pub corrected: BigUint,
    pub dim_h: usize,
    /// `ΛV ⊗ Λ(v₁..v_k)` with `dvᵢ = wᵢ^{⌈d/aᵢ⌉+1}`, as a fibration over `ΛV`.
    pub auxiliary: FibrationModel,
}

impl PureBound {
    pub fn literal_holds(&self) -> bool {
        BigUint::from(self.dim_h) <= self.literal
    }

    pub fn corrected_holds(&self) -> bool {
        BigUint::from(self.dim_h) <= self.corrected
    }
}

pub fn pure_bound(m: &SullivanModel) -> Result<PureBound, CatalogError> {
    if !m.is_minimal() || !elliptic::class_predicates(m).is_pure {
        return Err(CatalogError::NotPure);
    }
    let inv = elliptic::invariants(m)?;
    let d = inv.formal_dimension;
    let even = m.even_indices();
    let ceilings: Vec<u64> = even
        .iter()
        .map(|&i| (d as u64).div_ceil(m.algebra().degree(i) as u64))
        .collect();
    let two_pow = BigUint::one() << (inv.dim_pi_odd - inv.dim_pi_even);
    let literal = ceilings.iter().fold(two_pow.clone(), |acc, &c| acc * c);
    let corrected = ceilings.iter().fold(two_pow, |acc, &c| acc * (c + 1));

    let mut names = Vec::new();
    let mut gens = Vec::new();
    for (k, (&i, &c)) in even.iter().zip(&ceilings).enumerate() {
        let a = m.algebra().degree(i);
        let name = format!("v_aux{}", k + 1);
        let degree = (c as u32 + 1)
            .checked_mul(a)
            .ok_or(CatalogError::DegreeOverflow)?
            - 1;
        gens.push(Generator::new(name.clone(), degree));
        names.push(name);
    }
    let fiber = SullivanModel::free("aux", FreeAlgebra::new(gens)?);
    let alg = fibration::total_algebra(m, &fiber)?;
    let perturbation: Vec<(String, Polynomial)> = even
        .iter()
        .zip(&ceilings)
        .zip(names)
        .map(|((&i, &c), name)| (name, Polynomial::generator(&alg, i).pow(c as u32 + 1)))
        .collect();
    let auxiliary =
        fibration::build_fibration(format!("{}+aux", m.name()), m, &fiber, &perturbation)?;
    Ok(PureBound {
        formal_dimension: d,
        ceilings,
        literal,
        corrected,
        dim_h: inv.dim_h,
        auxiliary,
    })
}

/// Shape of a random two-stage model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TwoStageParams {
    /// Even generators.
    pub n: usize,
    /// Closed odd generators.
    pub m: usize,
    /// Non-closed odd generators beyond `n`.
    pub r: usize,
}

impl TwoStageParams {
    pub fn dim_pi(&self) -> usize {
        2 * self.n + self.m + self.r
    }
}

/// Knobs of [`random_two_stage`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomOptions {
    pub even_degrees: Vec<Degree>,
    pub closed_odd_degrees: Vec<Degree>,
    /// Powers `k` in `d wᵢ = xᵢ^k + …`.
    pub powers: Vec<u32>,
    /// Largest degree of the extra targets.
    pub max_extra_degree: Degree,
    /// Keep all differentials inside `Λ(V^even)`.
    pub pure: bool,
    pub retry_budget: u32,
}

pub const DEFAULT_RETRY_BUDGET: u32 = 32;

/// Retry budget from `HILALI_RETRY_BUDGET`, defaulting to 32.
pub fn retry_budget_from_env() -> u32 {
    std::env::var("HILALI_RETRY_BUDGET")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_RETRY_BUDGET)
}

impl Default for RandomOptions {
    fn default() -> Self {
        RandomOptions {
            even_degrees: vec![2, 4],
            closed_odd_degrees: vec![3, 5],
            powers: vec![2, 3],
            max_extra_degree: 12,
            pure: false,
            retry_budget: retry_budget_from_env(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct RandomModel {
    pub model: SullivanModel,
    pub params: TwoStageParams,
    pub seed: u64,
    /// Number of candidates drawn, including the accepted one.
    pub attempts: u32,
}

fn random_coefficient(rng: &mut ChaCha8Rng) -> Q {
    let c: i64 = rng.gen_range(1..=3);
    if rng.gen_bool(0.5) {
        q(-c)
    } else {
        q(c)
    }
}

/// Random element of degree `deg` supported on monomials of word length >= 2,
/// avoiding `exclude`. May be zero.
fn random_decomposable(
    rng: &mut ChaCha8Rng,
    alg: &std::sync::Arc<FreeAlgebra>,
    allowed: &dyn Fn(&Monomial) -> bool,
    deg: Degree,
    terms: usize,
    exclude: Option<&Monomial>,
) -> Polynomial {
    let candidates: Vec<Monomial> = alg
        .monomial_basis(deg)
        .into_iter()
        .filter(|m| m.word_length() >= 2 && allowed(m) && Some(m) != exclude)
        .collect();
    let chosen: Vec<&Monomial> = candidates
        .choose_multiple(rng, terms.min(candidates.len()))
        .collect();
    Polynomial::from_terms(
        alg,
        chosen
            .into_iter()
            .map(|m| (m.clone(), random_coefficient(rng))),
    )
}

/// A seeded two-stage model `Λ(x₁..x_n, u₁..u_m, w₁..w_{n+r})` with
/// `d wᵢ = xᵢ^{kᵢ} + (random decomposable)` for `i <= n` and random nonzero
/// decomposable targets for the remaining `r`. Candidates that fail the
/// ellipticity test are redrawn from the next stream of the same seed.
pub fn random_two_stage(
    seed: u64,
    params: TwoStageParams,
    opts: &RandomOptions,
) -> Result<RandomModel, CatalogError> {
    let TwoStageParams { n, m, r } = params;
    for attempt in 0..opts.retry_budget {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(attempt as u64);
        let even_deg: Vec<Degree> = (0..n)
            .map(|_| *opts.even_degrees.choose(&mut rng).unwrap())
            .collect();
        let odd_deg: Vec<Degree> = (0..m)
            .map(|_| *opts.closed_odd_degrees.choose(&mut rng).unwrap())
            .collect();
        let mut stage0: Vec<Generator> = Vec::new();
        stage0.extend(
            even_deg
                .iter()
                .enumerate()
                .map(|(i, &d)| Generator::new(format!("x{}", i + 1), d)),
        );
        stage0.extend(
            odd_deg
                .iter()
                .enumerate()
                .map(|(j, &d)| Generator::new(format!("u{}", j + 1), d)),
        );
        let base = FreeAlgebra::new(stage0.clone())?;
        let allowed = |mono: &Monomial| !opts.pure || (n..n + m).all(|j| mono.exponent(j) == 0);

        let mut targets = Vec::new();
        for (i, &deg) in even_deg.iter().enumerate() {
            let k = *opts.powers.choose(&mut rng).unwrap();
            let lead =
                Monomial::from_exponents((0..n + m).map(|j| if j == i { k } else { 0 }).collect());
            let extra_terms = rng.gen_range(0..=2);
            let pert =
                random_decomposable(&mut rng, &base, &allowed, k * deg, extra_terms, Some(&lead));
            targets.push(&Polynomial::from_monomial(&base, lead, Q::one()) + &pert);
        }
        let extra_degrees: Vec<Degree> = (4..=opts.max_extra_degree)
            .step_by(2)
            .filter(|&d| {
                base.monomial_basis(d)
                    .iter()
                    .any(|mono| mono.word_length() >= 2 && allowed(mono))
            })
            .collect();
        if r > 0 && extra_degrees.is_empty() {
            return Err(CatalogError::NoTargets);
        }
        for _ in 0..r {
            let deg = *extra_degrees.choose(&mut rng).unwrap();
            let terms = rng.gen_range(1..=2);
            targets.push(random_decomposable(
                &mut rng, &base, &allowed, deg, terms, None,
            ));
        }

        let mut gens = stage0;
        for (j, t) in targets.iter().enumerate() {
            gens.push(Generator::new(
                format!("w{}", j + 1),
                t.degree().expect("nonzero target") - 1,
            ));
        }
        let alg = FreeAlgebra::new(gens)?;
        let map: Vec<Option<usize>> = (0..n + m).map(Some).collect();
        let mut d: Vec<Polynomial> = (0..n + m).map(|_| Polynomial::zero(&alg)).collect();
        d.extend(targets.iter().map(|t| t.reindex(&alg, &map)));
        let name = format!("random(seed={seed},n={n},m={m},r={r})");
        let model = SullivanModel::new(name, alg, d)?;
        if elliptic::ellipticity_check(&model).verdict == Verdict::Elliptic {
            return Ok(RandomModel {
                model,
                params,
                seed,
                attempts: attempt + 1,
            });
        }
        log::debug!("seed {seed}: candidate {attempt} is not elliptic, redrawing");
    }
    Err(CatalogError::RetryBudgetExhausted(opts.retry_budget))
}

/// Expected `h` of a closed-form entry, as a convenience for reports.
pub fn known_h(entry: &CatalogEntry) -> Option<Q> {
    entry.known.as_ref().map(|k| k.h())
}

/// `h` of the odd and even spheres in closed form.
pub fn sphere_h(n: Degree) -> Q {
    if n % 2 == 1 {
        frac(1, 2)
    } else {
        from_usize(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_match_small_entries() {
        for key in [
            "sphere:7",
            "sphere:4",
            "cpn:3",
            "hpn:2",
            "sphere:3*sphere:5",
            "star:2,3,5",
            "wallach:6",
        ] {
            let e = entry(key).unwrap();
            let inv = elliptic::invariants(&e.model).unwrap();
            assert!(
                e.known.as_ref().unwrap().mismatches(&inv).is_empty(),
                "{key}"
            );
        }
        assert_eq!(known_h(&entry("star:2,2,7").unwrap()).unwrap(), frac(3, 4));
        assert_eq!(known_h(&entry("star:2,3,5").unwrap()).unwrap(), frac(1, 2));
    }

    #[test]
    fn key_errors() {
        assert!(matches!(
            entry("sphere:1"),
            Err(CatalogError::BadParameters { .. })
        ));
        assert!(matches!(
            entry("star:2,1,5"),
            Err(CatalogError::BadParameters { .. })
        ));
        assert!(matches!(entry("torus:3"), Err(CatalogError::UnknownKey(_))));
        assert!(matches!(
            fibration("hopf:s1"),
            Err(CatalogError::UnknownKey(_))
        ));
    }

    #[test]
    fn product_decomposition_follows_renaming() {
        let e = entry("sphere:3*sphere:5").unwrap();
        let names: Vec<&str> = e
            .model
            .generators()
            .iter()
            .map(|g| g.name.as_str())
            .collect();
        assert_eq!(names, ["y_1", "y_2"]);
        let d = e.decomposition.unwrap();
        assert_eq!(d.t, ["y_1", "y_2"]);
        elliptic::validate_decomposition(&e.model, &d).unwrap();
    }

    #[test]
    fn scaling_cp2() {
        let cp2 = entry("cpn:2").unwrap().model;
        let s = degree_scale(&cp2, 1).unwrap();
        let degs: Vec<Degree> = s.generators().iter().map(|g| g.degree).collect();
        assert_eq!(degs, [6, 17]);
        assert_eq!(elliptic::invariants(&s).unwrap().h(), &frac(2, 3));
        let s = degree_scale(&entry("sphere:3*sphere:5").unwrap().model, 2).unwrap();
        let degs: Vec<Degree> = s.generators().iter().map(|g| g.degree).collect();
        assert_eq!(degs, [27, 45]);
        assert_eq!(
            degree_scale(&cp2, 0).unwrap().generators(),
            cp2.generators()
        );
    }

    #[test]
    fn pure_bound_cpn_literal_fails() {
        for n in 1..=4 {
            let b = pure_bound(&entry(&format!("cpn:{n}")).unwrap().model).unwrap();
            assert_eq!(b.literal, BigUint::from(n as u64));
            assert_eq!(b.corrected, BigUint::from(n as u64 + 1));
            assert!(!b.literal_holds() && b.corrected_holds());
        }
        let b = pure_bound(&entry("sphere:3*sphere:5").unwrap().model).unwrap();
        assert_eq!(b.corrected, BigUint::from(4u32));
        assert_eq!(b.dim_h, 4);
    }

    #[test]
    fn random_models_are_reproducible_and_elliptic() {
        let opts = RandomOptions::default();
        let p = TwoStageParams { n: 2, m: 1, r: 2 };
        let a = random_two_stage(42, p, &opts).unwrap();
        let b = random_two_stage(42, p, &opts).unwrap();
        assert_eq!(
            crate::dsl::print_model(&a.model),
            crate::dsl::print_model(&b.model)
        );
        let inv = elliptic::invariants(&a.model).unwrap();
        assert_eq!(inv.dim_pi, p.dim_pi());
        let sphere = random_two_stage(1, TwoStageParams { n: 0, m: 1, r: 0 }, &opts).unwrap();
        assert_eq!(
            elliptic::invariants(&sphere.model).unwrap().h(),
            &frac(1, 2)
        );
    }
}
