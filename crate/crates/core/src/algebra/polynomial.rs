use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use super::{AlgebraError, Degree, FreeAlgebra, Monomial};
use crate::rational::{fraction_string, Q};

/// A finite rational linear combination of monomials of one free algebra.
///
/// Zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial {
    alg: Arc<FreeAlgebra>,
    terms: BTreeMap<Monomial, Q>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

pub(crate) fn same_algebra(a: &Arc<FreeAlgebra>, b: &Arc<FreeAlgebra>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// Graded-commutative product of two polynomials of the same algebra.
pub fn multiply(p: &Polynomial, q: &Polynomial) -> Result<Polynomial, AlgebraError> {
    p.try_mul(q)
}

impl Polynomial {
    pub fn zero(alg: &Arc<FreeAlgebra>) -> Self {
        Polynomial {
            alg: Arc::clone(alg),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(alg: &Arc<FreeAlgebra>, c: Q) -> Self {
        Self::from_monomial(alg, Monomial::unit(alg.len()), c)
    }

    pub fn one(alg: &Arc<FreeAlgebra>) -> Self {
        Self::constant(alg, Q::one())
    }

    pub fn generator(alg: &Arc<FreeAlgebra>, i: usize) -> Self {
        Self::from_monomial(alg, Monomial::generator(alg.len(), i), Q::one())
    }

    pub fn from_monomial(alg: &Arc<FreeAlgebra>, m: Monomial, c: Q) -> Self {
        let mut p = Self::zero(alg);
        p.add_term(m, c);
        p
    }

    /// Builds from terms, folding duplicates and dropping zeros.
    ///
    /// Monomials with a squared odd generator are rejected as zero.
    pub fn from_terms(
        alg: &Arc<FreeAlgebra>,
        terms: impl IntoIterator<Item = (Monomial, Q)>,
    ) -> Self {
        let mut p = Self::zero(alg);
        for (m, c) in terms {
            let squared_odd = m
                .exponents()
                .iter()
                .enumerate()
                .any(|(i, &e)| e > 1 && alg.is_odd(i));
            if !squared_odd {
                p.add_term(m, c);
            }
        }
        p
    }

    pub fn algebra(&self) -> &Arc<FreeAlgebra> {
        &self.alg
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Q)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(m.arity(), self.alg.len());
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// The common degree of all terms; `None` for zero or mixed degrees.
    pub fn degree(&self) -> Option<Degree> {
        let mut degrees = self.terms.keys().map(|m| m.degree(&self.alg));
        let first = degrees.next()?;
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn homogeneous_part(&self, degree: Degree) -> Polynomial {
        Polynomial {
            alg: Arc::clone(&self.alg),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree(&self.alg) == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The component of word length one, i.e. the part landing in the span of the generators.
    pub fn linear_part(&self) -> Vec<(usize, Q)> {
        self.terms
            .iter()
            .filter_map(|(m, c)| m.as_generator().map(|i| (i, c.clone())))
            .collect()
    }

    /// `true` when every term has word length at least two.
    pub fn is_decomposable(&self) -> bool {
        self.terms.keys().all(|m| m.word_length() >= 2)
    }

    /// Keeps only the terms whose monomials satisfy `keep`.
    pub fn filter_terms(&self, keep: impl Fn(&Monomial) -> bool) -> Polynomial {
        Polynomial {
            alg: Arc::clone(&self.alg),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Generators that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        (0..self.alg.len())
            .filter(|&i| self.terms.keys().any(|m| m.exponent(i) > 0))
            .collect()
    }

    pub fn scale(&self, c: &Q) -> Polynomial {
        if c.is_zero() {
            return Self::zero(&self.alg);
        }
        Polynomial {
            alg: Arc::clone(&self.alg),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(AlgebraError::ModelMismatch);
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if !same_algebra(&self.alg, &other.alg) {
            return Err(AlgebraError::ModelMismatch);
        }
        let mut out = Self::zero(&self.alg);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if let Some((m, negative)) = a.mul(b, &self.alg) {
                    let c = ca * cb;
                    out.add_term(m, if negative { -c } else { c });
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Self::one(&self.alg);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Applies the algebra map sending generator `i` to `images[i]`.
    ///
    /// Each image must have the parity of its generator (or be zero) for the
    /// result to respect graded commutativity; images live in `target`.
    pub fn substitute(&self, target: &Arc<FreeAlgebra>, images: &[Polynomial]) -> Polynomial {
        assert_eq!(images.len(), self.alg.len(), "one image per generator");
        let mut out = Polynomial::zero(target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                for _ in 0..e {
                    term = &term * &images[i];
                    if term.is_zero() {
                        break;
                    }
                }
                if term.is_zero() {
                    break;
                }
            }
            for (tm, tc) in term.terms {
                out.add_term(tm, tc);
            }
        }
        out
    }

    /// Re-expresses the polynomial in `target` by renaming generator indices.
    /// Generators mapped to `None` send the containing term to zero.
    pub fn reindex(&self, target: &Arc<FreeAlgebra>, map: &[Option<usize>]) -> Polynomial {
        let mut out = Polynomial::zero(target);
        'terms: for (m, c) in &self.terms {
            let mut exps = vec![0u32; target.len()];
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match map[i] {
                    Some(j) => exps[j] = e,
                    None => continue 'terms,
                }
            }
            out.add_term(Monomial::from_exponents(exps), c.clone());
        }
        out
    }

    pub(crate) fn mul_monomials(&self, left: &Monomial, right: &Monomial) -> Polynomial {
        let mut out = Self::zero(&self.alg);
        for (m, c) in &self.terms {
            let Some((lm, ln)) = left.mul(m, &self.alg) else {
                continue;
            };
            let Some((full, rn)) = lm.mul(right, &self.alg) else {
                continue;
            };
            out.add_term(full, if ln ^ rn { -c.clone() } else { c.clone() });
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            let magnitude = c.abs();
            if k == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mono = m.display(&self.alg);
            if m.is_unit() {
                f.write_str(&fraction_string(&magnitude))?;
            } else if magnitude.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", fraction_string(&magnitude), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs)
            .expect("polynomials from different algebras")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(&-rhs)
            .expect("polynomials from different algebras")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial {
            alg: Arc::clone(&self.alg),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs)
            .expect("polynomials from different algebras")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Generator;
    use crate::rational::{frac, q};

    fn alg() -> Arc<FreeAlgebra> {
        FreeAlgebra::new(vec![
            Generator::new("x", 2),
            Generator::new("y", 3),
            Generator::new("z", 5),
        ])
        .unwrap()
    }

    #[test]
    fn even_square_and_odd_square() {
        let a = alg();
        let x = a.var("x").unwrap();
        let y = a.var("y").unwrap();
        assert_eq!((&x * &x).to_string(), "x^2");
        assert!((&y * &y).is_zero());
    }

    #[test]
    fn odd_generators_anticommute() {
        let a = alg();
        let y = a.var("y").unwrap();
        let z = a.var("z").unwrap();
        assert_eq!((&y * &z).to_string(), "y*z");
        assert_eq!((&z * &y).to_string(), "-y*z");
        assert_eq!(&(&y * &z) + &(&z * &y), Polynomial::zero(&a));
    }

    #[test]
    fn mismatched_algebras_are_rejected() {
        let a = alg();
        let b = FreeAlgebra::new(vec![Generator::new("x", 4)]).unwrap();
        let err = multiply(&a.var("x").unwrap(), &b.var("x").unwrap()).unwrap_err();
        assert_eq!(err, AlgebraError::ModelMismatch);
        // structurally identical algebras are interchangeable
        let a2 = alg();
        assert!(multiply(&a.var("x").unwrap(), &a2.var("y").unwrap()).is_ok());
    }

    #[test]
    fn display_of_signed_rational_terms() {
        let a = alg();
        let x = a.var("x").unwrap();
        let y = a.var("y").unwrap();
        let p = &(&x * &x).scale(&q(2)) - &(&x * &y).scale(&frac(1, 3));
        let shown = p.to_string();
        assert!(
            shown == "2*x^2 - 1/3*x*y" || shown == "-1/3*x*y + 2*x^2",
            "{shown}"
        );
        assert_eq!(Polynomial::constant(&a, q(-3)).to_string(), "-3");
        assert_eq!(Polynomial::zero(&a).to_string(), "0");
    }

    #[test]
    fn homogeneity_and_linear_part() {
        let a = alg();
        let x = a.var("x").unwrap();
        let z = a.var("z").unwrap();
        let y = a.var("y").unwrap();
        let p = &(&x * &y) + &z;
        assert_eq!(p.degree(), Some(5));
        assert_eq!(p.linear_part(), vec![(2, q(1))]);
        assert!(!p.is_decomposable());
        let mixed = &x + &y;
        assert_eq!(mixed.degree(), None);
        assert_eq!(mixed.homogeneous_part(3), y);
    }

    #[test]
    fn substitution_respects_signs() {
        let a = alg();
        let x = a.var("x").unwrap();
        let y = a.var("y").unwrap();
        let z = a.var("z").unwrap();
        // swap the roles of y and z: y*z -> z*y = -y*z
        let images = vec![x.clone(), z.clone(), y.clone()];
        let swapped = (&y * &z).substitute(&a, &images);
        assert_eq!(swapped, -&(&y * &z));
    }
}
