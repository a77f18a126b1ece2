//! Exact linear algebra over ℚ on sparse vectors.
//!
//! Ranks go through fraction-free elimination on integer rows, first in
//! checked `i128` and, on overflow, again in `BigInt`. Kernels and cohomology
//! representatives use a rational echelon form.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::Q;

/// Sparse vector: strictly increasing column indices with nonzero entries.
pub type SparseVec = Vec<(usize, Q)>;

/// Integer arithmetic used by the fraction-free rank routine.
trait RankScalar: Clone + PartialEq + Sized {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn checked_mul(&self, other: &Self) -> Option<Self>;
    fn checked_sub(&self, other: &Self) -> Option<Self>;
    fn gcd(&self, other: &Self) -> Self;
    fn exact_div(&self, other: &Self) -> Self;
    fn is_negative(&self) -> bool;
    fn negate(&self) -> Option<Self>;
    fn from_bigint(b: &BigInt) -> Option<Self>;
}

impl RankScalar for i128 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        i128::checked_mul(*self, *other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        i128::checked_sub(*self, *other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_negative(&self) -> bool {
        *self < 0
    }
    fn negate(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        b.to_i128()
    }
}

impl RankScalar for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn checked_mul(&self, other: &Self) -> Option<Self> {
        Some(self * other)
    }
    fn checked_sub(&self, other: &Self) -> Option<Self> {
        Some(self - other)
    }
    fn gcd(&self, other: &Self) -> Self {
        Integer::gcd(self, other)
    }
    fn exact_div(&self, other: &Self) -> Self {
        self / other
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn negate(&self) -> Option<Self> {
        Some(-self)
    }
    fn from_bigint(b: &BigInt) -> Option<Self> {
        Some(b.clone())
    }
}

/// Clears denominators of a rational row, giving a primitive integer row.
fn integer_row(row: &SparseVec) -> Vec<(usize, BigInt)> {
    let mut lcm = BigInt::one();
    for (_, c) in row {
        lcm = lcm.lcm(c.denom());
    }
    let mut out: Vec<(usize, BigInt)> = row
        .iter()
        .map(|(j, c)| (*j, c.numer() * (&lcm / c.denom())))
        .collect();
    let mut g = <BigInt as Zero>::zero();
    for (_, v) in &out {
        g = Integer::gcd(&g, v);
    }
    if !Zero::is_zero(&g) && !g.is_one() {
        for (_, v) in &mut out {
            *v /= &g;
        }
    }
    out
}

/// `a·row − b·pivot`, divided by the content. `None` on overflow.
fn eliminate<T: RankScalar>(row: &[(usize, T)], pivot: &[(usize, T)]) -> Option<Vec<(usize, T)>> {
    let a = pivot[0].1.clone();
    let b = row[0].1.clone();
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (1, 1);
    while i < row.len() || j < pivot.len() {
        let ci = row.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cj = pivot.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        let (col, v) = if ci < cj {
            let v = row[i].1.checked_mul(&a)?;
            i += 1;
            (ci, v)
        } else if cj < ci {
            let v = T::zero().checked_sub(&pivot[j].1.checked_mul(&b)?)?;
            j += 1;
            (cj, v)
        } else {
            let v = row[i]
                .1
                .checked_mul(&a)?
                .checked_sub(&pivot[j].1.checked_mul(&b)?)?;
            i += 1;
            j += 1;
            (ci, v)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    normalize(&mut out)?;
    Some(out)
}

/// Divides by the content and makes the leading entry positive.
fn normalize<T: RankScalar>(row: &mut [(usize, T)]) -> Option<()> {
    if row.is_empty() {
        return Some(());
    }
    let mut g = T::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
    }
    if row[0].1.is_negative() {
        g = g.negate()?;
    }
    for (_, v) in row.iter_mut() {
        *v = v.exact_div(&g);
    }
    Some(())
}

fn rank_generic<T: RankScalar>(rows: &[Vec<(usize, BigInt)>]) -> Option<usize> {
    let mut pivots: BTreeMap<usize, Vec<(usize, T)>> = BTreeMap::new();
    for row in rows {
        let mut r: Vec<(usize, T)> = row
            .iter()
            .map(|(j, v)| T::from_bigint(v).map(|t| (*j, t)))
            .collect::<Option<_>>()?;
        normalize(&mut r)?;
        while let Some(&(lead, _)) = r.first() {
            match pivots.get(&lead) {
                Some(p) => r = eliminate(&r, p)?,
                None => {
                    pivots.insert(lead, r);
                    break;
                }
            }
        }
    }
    Some(pivots.len())
}

/// Rank of the matrix whose rows are `rows` (equivalently, of its transpose).
pub fn rank(rows: &[SparseVec]) -> usize {
    let int_rows: Vec<_> = rows
        .iter()
        .filter(|r| !r.is_empty())
        .map(integer_row)
        .collect();
    match rank_generic::<i128>(&int_rows) {
        Some(r) => r,
        None => {
            log::debug!("i128 overflow in rank computation; retrying with big integers");
            rank_generic::<BigInt>(&int_rows).expect("big integer elimination cannot overflow")
        }
    }
}

/// Incrementally built reduced echelon basis of a subspace of ℚ^n.
///
/// Every stored row has leading entry 1 and no other stored row has a nonzero
/// entry in that column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVec> {
        self.rows.values()
    }

    /// Reduces `v` against the stored rows.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Q> = v.iter().cloned().collect();
        for (&pivot, row) in &self.rows {
            let Some(c) = acc.get(&pivot).cloned() else {
                continue;
            };
            for (j, x) in row {
                let entry = acc.entry(*j).or_insert_with(Q::zero);
                *entry -= &c * x;
                if entry.is_zero() {
                    acc.remove(j);
                }
            }
        }
        acc.into_iter().collect()
    }

    /// Adds `v` to the span. Returns `false` if it was already in it.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = self.reduce(v);
        let Some((lead, c)) = r.first().cloned() else {
            return false;
        };
        let inv = c.recip();
        for (_, x) in &mut r {
            *x *= &inv;
        }
        for row in self.rows.values_mut() {
            if let Some(pos) = row.iter().position(|(j, _)| *j == lead) {
                let f = row[pos].1.clone();
                *row = axpy(row, &r, &-f);
            }
        }
        self.rows.insert(lead, r);
        true
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }
}

/// `x + a·y`.
pub fn axpy(x: &SparseVec, y: &SparseVec, a: &Q) -> SparseVec {
    let mut acc: BTreeMap<usize, Q> = x.iter().cloned().collect();
    for (j, v) in y {
        let entry = acc.entry(*j).or_insert_with(Q::zero);
        *entry += a * v;
    }
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

/// Basis of the kernel of the linear map sending basis vector `j` to `columns[j]`.
pub fn kernel(columns: &[SparseVec]) -> Vec<SparseVec> {
    // Track each reduced image together with the combination producing it.
    let mut pivots: BTreeMap<usize, (SparseVec, SparseVec)> = BTreeMap::new();
    let mut out = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        let mut image: SparseVec = col.clone();
        let mut combo: SparseVec = vec![(j, Q::one())];
        loop {
            let Some((lead, c)) = image.first().cloned() else {
                out.push(combo);
                break;
            };
            match pivots.get(&lead) {
                Some((p_img, p_combo)) => {
                    let f = -c;
                    image = axpy(&image, p_img, &f);
                    combo = axpy(&combo, p_combo, &f);
                }
                None => {
                    let inv = c.recip();
                    let scale = |v: &SparseVec| v.iter().map(|(k, x)| (*k, x * &inv)).collect();
                    pivots.insert(lead, (scale(&image), scale(&combo)));
                    break;
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn dense(rows: &[&[i64]]) -> Vec<SparseVec> {
        rows.iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(_, &v)| v != 0)
                    .map(|(j, &v)| (j, q(v)))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(rank(&dense(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&dense(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), 2);
        assert_eq!(rank(&dense(&[&[0, 0], &[0, 0]])), 0);
        assert_eq!(rank(&[]), 0);
    }

    #[test]
    fn rank_with_fractions_and_big_entries() {
        let rows = vec![
            vec![(0, frac(1, 3)), (1, frac(2, 7))],
            vec![(0, frac(7, 1)), (1, frac(6, 1))],
        ];
        assert_eq!(rank(&rows), 1);
        let big = Q::from_integer(BigInt::from(10).pow(60));
        let rows = vec![
            vec![(0, big.clone()), (1, q(1))],
            vec![(0, q(1)), (1, big.clone())],
            vec![(0, &big + q(1)), (1, &big + q(1))],
        ];
        assert_eq!(rank(&rows), 2);
    }

    #[test]
    fn kernel_vectors_are_killed() {
        let cols = dense(&[&[1, 0, 1], &[0, 1, 1], &[1, 1, 2], &[2, 0, 2]]);
        let ker = kernel(&cols);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            let mut image: SparseVec = Vec::new();
            for (j, c) in v {
                image = axpy(&image, &cols[*j], c);
            }
            assert!(image.is_empty());
        }
    }

    #[test]
    fn echelon_membership() {
        let mut e = Echelon::new();
        assert!(e.insert(&vec![(0, q(2)), (2, q(4))]));
        assert!(e.insert(&vec![(1, q(1)), (2, q(1))]));
        assert!(!e.insert(&vec![(0, q(1)), (1, q(3)), (2, q(5))]));
        assert!(e.contains(&vec![(0, q(1)), (2, q(2))]));
        assert!(!e.contains(&vec![(2, q(1))]));
        assert_eq!(e.rank(), 2);
    }
}
