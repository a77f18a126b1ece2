use super::{Degree, FreeAlgebra};

/// A graded monomial, stored as a dense exponent vector indexed by generator.
///
/// The normal form writes generators in index order; odd generators appear
/// with exponent at most one.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn generator(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exponents(exponents: Vec<u32>) -> Self {
        Monomial(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn word_length(&self) -> u32 {
        self.0.iter().sum()
    }

    /// If this is a single generator to the first power, its index.
    pub fn as_generator(&self) -> Option<usize> {
        let mut found = None;
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 if found.is_none() => found = Some(i),
                _ => return None,
            }
        }
        found
    }

    pub fn degree(&self, alg: &FreeAlgebra) -> Degree {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| e * alg.degree(i))
            .sum()
    }

    pub fn is_odd(&self, alg: &FreeAlgebra) -> bool {
        self.0
            .iter()
            .enumerate()
            .filter(|&(i, &e)| e % 2 == 1 && alg.is_odd(i))
            .count()
            % 2
            == 1
    }

    /// Product `self · other` in normal form, with its Koszul sign.
    ///
    /// Returns `None` when an odd generator would be squared. The boolean is
    /// `true` when the sign is negative: moving each odd factor of `other`
    /// left past the odd factors of `self` with larger index costs one sign.
    pub fn mul(&self, other: &Monomial, alg: &FreeAlgebra) -> Option<(Monomial, bool)> {
        debug_assert_eq!(self.arity(), other.arity());
        let mut negative = false;
        // odd generators of `self` strictly above the current index
        let mut odd_above: u32 = self
            .0
            .iter()
            .enumerate()
            .filter(|&(i, &e)| e > 0 && alg.is_odd(i))
            .count() as u32;
        let mut exps = Vec::with_capacity(self.0.len());
        for (i, (&a, &b)) in self.0.iter().zip(&other.0).enumerate() {
            if alg.is_odd(i) {
                if a > 0 {
                    odd_above -= 1;
                    if b > 0 {
                        return None;
                    }
                }
                if b > 0 && odd_above % 2 == 1 {
                    negative = !negative;
                }
            }
            exps.push(a + b);
        }
        Some((Monomial(exps), negative))
    }

    /// For `self = prefix · g_i^e · suffix`, returns `(prefix · g_i^{e-1}, suffix)`.
    pub(crate) fn split_around(&self, i: usize) -> (Monomial, Monomial) {
        let n = self.0.len();
        let mut left = vec![0; n];
        let mut right = vec![0; n];
        left[..=i].copy_from_slice(&self.0[..=i]);
        left[i] -= 1;
        right[i + 1..].copy_from_slice(&self.0[i + 1..]);
        (Monomial(left), Monomial(right))
    }

    pub fn display(&self, alg: &FreeAlgebra) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|&(_, &e)| e > 0)
            .map(|(i, &e)| {
                let name = &alg.generator(i).name;
                if e == 1 {
                    name.clone()
                } else {
                    format!("{name}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}
