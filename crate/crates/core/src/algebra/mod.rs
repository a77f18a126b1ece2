//! Free graded-commutative algebras over the rationals and Sullivan models on them.
//!
//! An algebra `ΛV` is the tensor product of a polynomial algebra on the
//! even-degree generators and an exterior algebra on the odd-degree ones.
//! Elements are [`Polynomial`]s; products follow the Koszul sign rule
//! `x·y = (-1)^{|x||y|} y·x`.

mod model;
mod monomial;
mod polynomial;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use model::{DSquaredFailure, SullivanModel};
pub use monomial::Monomial;
pub use polynomial::{multiply, Polynomial};

/// Cohomological degree. Arithmetic on degrees runs with overflow checks
/// enabled in every build profile of this workspace.
pub type Degree = u32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error(
        "generator `{0}` has degree {1}; only simply-connected models (degree >= 2) are supported"
    )]
    DegreeTooLow(String, Degree),
    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),
    #[error("invalid generator name `{0}`")]
    InvalidName(String),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("operands belong to different algebras")]
    ModelMismatch,
    #[error("expected {expected} differential entries, found {found}")]
    DifferentialArity { expected: usize, found: usize },
    #[error("d({generator}) must be homogeneous of degree {expected}, got `{found}`")]
    DifferentialDegree {
        generator: String,
        expected: Degree,
        found: String,
    },
    #[error("d^2 != 0: d(d({generator})) = {residue}")]
    DSquaredNonzero { generator: String, residue: String },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: Degree,
}

impl Generator {
    pub fn new(name: impl Into<String>, degree: Degree) -> Self {
        Generator {
            name: name.into(),
            degree,
        }
    }

    pub fn is_odd(&self) -> bool {
        self.degree % 2 == 1
    }

    pub fn is_even(&self) -> bool {
        !self.is_odd()
    }
}

pub(crate) fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

/// The free graded-commutative algebra on an ordered list of generators.
///
/// The position of a generator in the list is its stable index; monomial
/// exponent vectors and all matrix layouts are indexed by it.
#[derive(Debug)]
pub struct FreeAlgebra {
    generators: Vec<Generator>,
    index: HashMap<String, usize>,
}

impl PartialEq for FreeAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for FreeAlgebra {}

impl FreeAlgebra {
    pub fn new(generators: Vec<Generator>) -> Result<Arc<Self>, AlgebraError> {
        let mut index = HashMap::with_capacity(generators.len());
        for (i, g) in generators.iter().enumerate() {
            if !valid_identifier(&g.name) {
                return Err(AlgebraError::InvalidName(g.name.clone()));
            }
            if g.degree < 2 {
                return Err(AlgebraError::DegreeTooLow(g.name.clone(), g.degree));
            }
            if index.insert(g.name.clone(), i).is_some() {
                return Err(AlgebraError::DuplicateGenerator(g.name.clone()));
            }
        }
        Ok(Arc::new(FreeAlgebra { generators, index }))
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.generators[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.generators[i].is_odd()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    /// The generator called `name`, as a polynomial.
    pub fn var(self: &Arc<Self>, name: &str) -> Result<Polynomial, AlgebraError> {
        let i = self
            .index_of(name)
            .ok_or_else(|| AlgebraError::UnknownGenerator(name.to_string()))?;
        Ok(Polynomial::generator(self, i))
    }

    /// All monomials of exactly `degree`, in descending lexicographic order of
    /// exponent vectors (earlier generators carry larger exponents first).
    pub fn monomial_basis(&self, degree: Degree) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut exps = vec![0u32; self.len()];
        self.enumerate(0, degree, &mut exps, &mut out);
        out
    }

    fn enumerate(&self, i: usize, remaining: Degree, exps: &mut [u32], out: &mut Vec<Monomial>) {
        if i == self.len() {
            if remaining == 0 {
                out.push(Monomial::from_exponents(exps.to_vec()));
            }
            return;
        }
        let deg = self.degree(i);
        let max = if self.is_odd(i) {
            (remaining / deg).min(1)
        } else {
            remaining / deg
        };
        for e in (0..=max).rev() {
            exps[i] = e;
            self.enumerate(i + 1, remaining - e * deg, exps, out);
        }
        exps[i] = 0;
    }
}
