use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::polynomial::same_algebra;
use super::{AlgebraError, Degree, FreeAlgebra, Generator, Monomial, Polynomial};
use crate::rational::Q;

/// A free graded-commutative algebra with a degree +1 differential.
#[derive(Clone)]
pub struct SullivanModel {
    name: String,
    alg: Arc<FreeAlgebra>,
    differential: Vec<Polynomial>,
}

/// The first generator whose differential does not square to zero.
#[derive(Clone, Debug, PartialEq)]
pub struct DSquaredFailure {
    pub generator: String,
    pub residue: Polynomial,
}

impl SullivanModel {
    /// Builds a model and checks `d∘d = 0`.
    pub fn new(
        name: impl Into<String>,
        alg: Arc<FreeAlgebra>,
        differential: Vec<Polynomial>,
    ) -> Result<Self, AlgebraError> {
        let model = Self::new_unchecked_d2(name, alg, differential)?;
        if let Err(f) = model.check_d_squared() {
            return Err(AlgebraError::DSquaredNonzero {
                generator: f.generator,
                residue: f.residue.to_string(),
            });
        }
        Ok(model)
    }

    /// Builds a model checking degrees and algebra membership only.
    pub fn new_unchecked_d2(
        name: impl Into<String>,
        alg: Arc<FreeAlgebra>,
        differential: Vec<Polynomial>,
    ) -> Result<Self, AlgebraError> {
        if differential.len() != alg.len() {
            return Err(AlgebraError::DifferentialArity {
                expected: alg.len(),
                found: differential.len(),
            });
        }
        for (i, p) in differential.iter().enumerate() {
            if !same_algebra(p.algebra(), &alg) {
                return Err(AlgebraError::ModelMismatch);
            }
            let expected = alg.degree(i) + 1;
            if !p.is_zero() && p.degree() != Some(expected) {
                return Err(AlgebraError::DifferentialDegree {
                    generator: alg.generator(i).name.clone(),
                    expected,
                    found: p.to_string(),
                });
            }
        }
        // share one algebra handle between model and differential
        let differential = differential
            .into_iter()
            .map(|p| p.reindex(&alg, &(0..alg.len()).map(Some).collect::<Vec<_>>()))
            .collect();
        Ok(SullivanModel {
            name: name.into(),
            alg,
            differential,
        })
    }

    /// The model with zero differential.
    pub fn free(name: impl Into<String>, alg: Arc<FreeAlgebra>) -> Self {
        let differential = (0..alg.len()).map(|_| Polynomial::zero(&alg)).collect();
        SullivanModel {
            name: name.into(),
            alg,
            differential,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn algebra(&self) -> &Arc<FreeAlgebra> {
        &self.alg
    }

    pub fn generators(&self) -> &[Generator] {
        self.alg.generators()
    }

    pub fn len(&self) -> usize {
        self.alg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alg.is_empty()
    }

    pub fn differential(&self) -> &[Polynomial] {
        &self.differential
    }

    /// `d` of generator `i`.
    pub fn d_generator(&self, i: usize) -> &Polynomial {
        &self.differential[i]
    }

    pub fn var(&self, name: &str) -> Result<Polynomial, AlgebraError> {
        self.alg.var(name)
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| !self.alg.is_odd(i)).collect()
    }

    pub fn odd_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.alg.is_odd(i)).collect()
    }

    /// Extends `d` to all of `ΛV` as a derivation of degree +1:
    /// `d(a·b) = da·b + (-1)^{|a|} a·db`.
    pub fn apply_differential(&self, p: &Polynomial) -> Result<Polynomial, AlgebraError> {
        if !same_algebra(p.algebra(), &self.alg) {
            return Err(AlgebraError::ModelMismatch);
        }
        Ok(self.d(p))
    }

    /// Same as [`apply_differential`](Self::apply_differential); panics on a
    /// polynomial from another algebra.
    pub fn d(&self, p: &Polynomial) -> Polynomial {
        assert!(
            same_algebra(p.algebra(), &self.alg),
            "polynomial from another algebra"
        );
        let mut out = Polynomial::zero(&self.alg);
        for (m, c) in p.terms() {
            for (tm, tc) in self.d_monomial(m).terms() {
                out.add_term(tm.clone(), tc * c);
            }
        }
        out
    }

    pub fn d_monomial(&self, m: &Monomial) -> Polynomial {
        let mut out = Polynomial::zero(&self.alg);
        let mut prefix_degree: Degree = 0;
        for (i, &e) in m.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let dg = &self.differential[i];
            if !dg.is_zero() {
                // m = prefix · g^e · suffix and d(g^e) = e·g^{e-1}·dg
                let (left, suffix) = m.split_around(i);
                let mut coeff = Q::from_integer(e.into());
                if prefix_degree % 2 == 1 {
                    coeff = -coeff;
                }
                let term = dg.mul_monomials(&left, &suffix);
                for (tm, tc) in term.terms() {
                    out.add_term(tm.clone(), tc * &coeff);
                }
            }
            prefix_degree += e * self.alg.degree(i);
        }
        out
    }

    /// Checks `d(d(g)) = 0` generator by generator, reporting the first failure.
    pub fn check_d_squared(&self) -> Result<(), DSquaredFailure> {
        for (i, dg) in self.differential.iter().enumerate() {
            let residue = self.d(dg);
            if !residue.is_zero() {
                return Err(DSquaredFailure {
                    generator: self.alg.generator(i).name.clone(),
                    residue,
                });
            }
        }
        Ok(())
    }

    pub fn monomial_basis(&self, degree: Degree) -> Vec<Monomial> {
        self.alg.monomial_basis(degree)
    }

    /// No differential has a component of word length one (or zero).
    pub fn is_minimal(&self) -> bool {
        self.differential.iter().all(|p| p.is_decomposable())
    }

    pub fn max_generator_degree(&self) -> Degree {
        self.generators()
            .iter()
            .map(|g| g.degree)
            .max()
            .unwrap_or(0)
    }

    /// Tensor product of models. Clashing generator names get a `_k` suffix
    /// with `k` the factor position.
    pub fn tensor_product(name: impl Into<String>, factors: &[SullivanModel]) -> SullivanModel {
        let clash = {
            let mut names = std::collections::HashSet::new();
            factors
                .iter()
                .flat_map(|f| f.generators())
                .any(|g| !names.insert(g.name.clone()))
        };
        let mut gens = Vec::new();
        let mut offsets = Vec::new();
        for (k, f) in factors.iter().enumerate() {
            offsets.push(gens.len());
            for g in f.generators() {
                let name = if clash {
                    format!("{}_{}", g.name, k + 1)
                } else {
                    g.name.clone()
                };
                gens.push(Generator::new(name, g.degree));
            }
        }
        let alg = FreeAlgebra::new(gens).expect("product of valid algebras");
        let mut differential = Vec::new();
        for (k, f) in factors.iter().enumerate() {
            let map: Vec<Option<usize>> = (0..f.len()).map(|i| Some(offsets[k] + i)).collect();
            for dg in f.differential() {
                differential.push(dg.reindex(&alg, &map));
            }
        }
        SullivanModel {
            name: name.into(),
            alg,
            differential,
        }
    }

    pub fn one(&self) -> Polynomial {
        Polynomial::one(&self.alg)
    }

    pub fn constant(&self, c: Q) -> Polynomial {
        if c.is_one() {
            self.one()
        } else if c.is_zero() {
            Polynomial::zero(&self.alg)
        } else {
            Polynomial::constant(&self.alg, c)
        }
    }
}

impl fmt::Debug for SullivanModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SullivanModel({}: ", self.name)?;
        for (g, dg) in self.generators().iter().zip(&self.differential) {
            write!(f, "[{}:{} d={}]", g.name, g.degree, dg)?;
        }
        f.write_str(")")
    }
}

impl PartialEq for SullivanModel {
    fn eq(&self, other: &Self) -> bool {
        same_algebra(&self.alg, &other.alg) && self.differential == other.differential
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(n: u32) -> SullivanModel {
        let alg =
            FreeAlgebra::new(vec![Generator::new("x", 2), Generator::new("y", 2 * n + 1)]).unwrap();
        let x = alg.var("x").unwrap();
        SullivanModel::new(
            format!("CP{n}"),
            alg.clone(),
            vec![Polynomial::zero(&alg), x.pow(n + 1)],
        )
        .unwrap()
    }

    #[test]
    fn leibniz_on_cp_model() {
        let m = cp(3);
        let x = m.var("x").unwrap();
        let y = m.var("y").unwrap();
        assert_eq!(m.d(&(&y * &x)), x.pow(5));
        assert_eq!(m.d(&(&x * &y)), x.pow(5));
        assert!(m.d(&x.pow(7)).is_zero());
        assert!(m.check_d_squared().is_ok());
    }

    #[test]
    fn sign_on_odd_prefix() {
        // d(u·v) = du·v - u·dv for odd u
        let alg = FreeAlgebra::new(vec![
            Generator::new("a", 2),
            Generator::new("u", 3),
            Generator::new("v", 5),
        ])
        .unwrap();
        let a = alg.var("a").unwrap();
        let u = alg.var("u").unwrap();
        let v = alg.var("v").unwrap();
        let m = SullivanModel::new(
            "t",
            alg.clone(),
            vec![Polynomial::zero(&alg), a.pow(2), a.pow(3)],
        )
        .unwrap();
        let lhs = m.d(&(&u * &v));
        let rhs = &(&a.pow(2) * &v) - &(&u * &a.pow(3));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn corrupted_model_reports_residue() {
        // d z = x^2 and d w = x*z: then d(d w) = x^3
        let alg = FreeAlgebra::new(vec![
            Generator::new("x", 2),
            Generator::new("z", 3),
            Generator::new("w", 4),
        ])
        .unwrap();
        let x = alg.var("x").unwrap();
        let z = alg.var("z").unwrap();
        let diff = vec![Polynomial::zero(&alg), x.pow(2), &x * &z];
        let bad = SullivanModel::new_unchecked_d2("bad", alg.clone(), diff.clone()).unwrap();
        let failure = bad.check_d_squared().unwrap_err();
        assert_eq!(failure.generator, "w");
        assert_eq!(failure.residue, x.pow(3));
        assert!(matches!(
            SullivanModel::new("bad", alg, diff),
            Err(AlgebraError::DSquaredNonzero { .. })
        ));
    }

    #[test]
    fn rejects_inhomogeneous_differential() {
        let alg = FreeAlgebra::new(vec![Generator::new("x", 2), Generator::new("y", 7)]).unwrap();
        let x = alg.var("x").unwrap();
        let err = SullivanModel::new("cp", alg.clone(), vec![Polynomial::zero(&alg), x.pow(3)])
            .unwrap_err();
        assert!(matches!(
            err,
            AlgebraError::DifferentialDegree { expected: 8, .. }
        ));
    }

    #[test]
    fn tensor_product_renames_clashes() {
        let p = SullivanModel::tensor_product("cp3xcp3", &[cp(3), cp(3)]);
        let names: Vec<_> = p.generators().iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["x_1", "y_1", "x_2", "y_2"]);
        assert!(p.check_d_squared().is_ok());
        assert_eq!(p.d_generator(3), &p.var("x_2").unwrap().pow(4));
    }
}
