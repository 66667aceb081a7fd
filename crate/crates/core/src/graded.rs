//! Block operators on the fixed-point space, graded by subset size.
//!
//! The space `C^{2^n}` splits into sectors `k = 0..=n` of dimension `C(n,k)`.
//! A [`GradedOperator`] with shift `d` maps sector `k` into sector `k + d` and
//! stores one dense block per source sector. Blocks whose target falls outside
//! `0..=n` do not exist; everything not stored is zero.

use crate::error::CoreError;
use crate::fixed_point::{binomial, SectorTable};
use crate::scalar::{Field, C64};
use nalgebra::{DMatrix, DVector};

/// Block product. Exact entry types skip structural zeros, which dominate the
/// raising and lowering operators and make dense exact products slow.
fn block_product<T: Field>(a: &DMatrix<T>, b: &DMatrix<T>) -> DMatrix<T> {
    if !T::is_exact() {
        return a * b;
    }
    let mut out = DMatrix::from_element(a.nrows(), b.ncols(), T::zero());
    for l in 0..a.ncols() {
        for i in 0..a.nrows() {
            let ail = &a[(i, l)];
            if ail.is_zero() {
                continue;
            }
            for j in 0..b.ncols() {
                let blj = &b[(l, j)];
                if !blj.is_zero() {
                    out[(i, j)] += ail.clone() * blj.clone();
                }
            }
        }
    }
    out
}

/// Dense block operator with a fixed degree shift.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedOperator<T: Field = C64> {
    n: usize,
    shift: i32,
    blocks: Vec<Option<DMatrix<T>>>,
}

fn target_sector(n: usize, k: usize, shift: i32) -> Option<usize> {
    let t = k as i64 + shift as i64;
    (0..=n as i64).contains(&t).then_some(t as usize)
}

impl<T: Field> GradedOperator<T> {
    /// The zero operator with the given shift.
    pub fn zero(n: usize, shift: i32) -> Self {
        Self::from_block_fn(n, shift, |k, t| DMatrix::zeros(binomial(n, t), binomial(n, k)))
    }

    /// The identity.
    pub fn identity(n: usize) -> Self {
        Self::from_block_fn(n, 0, |k, _| DMatrix::identity(binomial(n, k), binomial(n, k)))
    }

    /// Diagonal operator with entry `f(mask)` on each fixed point.
    pub fn diagonal(n: usize, f: impl Fn(u32) -> T) -> Self {
        let table = SectorTable::new(n);
        Self::from_block_fn(n, 0, |k, _| {
            let masks = table.sector(k);
            DMatrix::from_diagonal(&DVector::from_iterator(masks.len(), masks.iter().map(|&m| f(m))))
        })
    }

    /// Builds each block from `f(source_k, target_k)`.
    ///
    /// # Panics
    /// If `f` returns a block of the wrong shape.
    pub fn from_block_fn(n: usize, shift: i32, mut f: impl FnMut(usize, usize) -> DMatrix<T>) -> Self {
        let blocks = (0..=n)
            .map(|k| {
                target_sector(n, k, shift).map(|t| {
                    let b = f(k, t);
                    assert_eq!(b.shape(), (binomial(n, t), binomial(n, k)), "block shape for sector {k}");
                    b
                })
            })
            .collect();
        GradedOperator { n, shift, blocks }
    }

    /// Builds the operator from matrix elements `f(target_mask, source_mask)`.
    pub fn from_entries(n: usize, shift: i32, f: impl Fn(u32, u32) -> T) -> Self {
        let table = SectorTable::new(n);
        Self::from_block_fn(n, shift, |k, t| {
            let rows = table.sector(t);
            let cols = table.sector(k);
            DMatrix::from_fn(rows.len(), cols.len(), |i, j| f(rows[i], cols[j]))
        })
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Degree shift `d`: sector `k` maps to `k + d`.
    pub fn shift(&self) -> i32 {
        self.shift
    }

    /// Block acting on source sector `k`, if its target exists.
    pub fn block(&self, k: usize) -> Option<&DMatrix<T>> {
        self.blocks.get(k).and_then(Option::as_ref)
    }

    /// Mutable block acting on source sector `k`.
    pub fn block_mut(&mut self, k: usize) -> Option<&mut DMatrix<T>> {
        self.blocks.get_mut(k).and_then(Option::as_mut)
    }

    fn check_same(&self, other: &Self, what: &str) -> Result<(), CoreError> {
        if self.n != other.n || self.shift != other.shift {
            return Err(CoreError::ShapeMismatch(format!(
                "{what}: (n={}, shift={}) vs (n={}, shift={})",
                self.n, self.shift, other.n, other.shift
            )));
        }
        Ok(())
    }

    /// Composition `self * rhs`; shifts add.
    pub fn compose(&self, rhs: &Self) -> Result<Self, CoreError> {
        if self.n != rhs.n {
            return Err(CoreError::ShapeMismatch("compose: different n".into()));
        }
        let n = self.n;
        let shift = self.shift + rhs.shift;
        Ok(Self::from_block_fn(n, shift, |k, t| {
            let inner = target_sector(n, k, rhs.shift);
            match (inner, rhs.block(k)) {
                (Some(mid), Some(b)) => match self.block(mid) {
                    Some(a) => block_product(a, b),
                    None => DMatrix::zeros(binomial(n, t), binomial(n, k)),
                },
                _ => DMatrix::zeros(binomial(n, t), binomial(n, k)),
            }
        }))
    }

    /// Blockwise `self + rhs`.
    pub fn try_add(&self, rhs: &Self) -> Result<Self, CoreError> {
        self.check_same(rhs, "add")?;
        Ok(self.zip_blocks(rhs, |a, b| a + b))
    }

    /// Blockwise `self - rhs`.
    pub fn try_sub(&self, rhs: &Self) -> Result<Self, CoreError> {
        self.check_same(rhs, "sub")?;
        Ok(self.zip_blocks(rhs, |a, b| a - b))
    }

    fn zip_blocks(&self, rhs: &Self, f: impl Fn(&DMatrix<T>, &DMatrix<T>) -> DMatrix<T>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .zip(&rhs.blocks)
            .map(|(a, b)| match (a, b) {
                (Some(a), Some(b)) => Some(f(a, b)),
                _ => None,
            })
            .collect();
        GradedOperator {
            n: self.n,
            shift: self.shift,
            blocks,
        }
    }

    /// Multiplies every entry by `c`.
    pub fn scale(&self, c: &T) -> Self {
        self.map_blocks(|_, b| b.map(|x| x * c.clone()))
    }

    /// Applies `f(k, block)` to each block; `k` is the source sector.
    pub fn map_blocks(&self, mut f: impl FnMut(usize, &DMatrix<T>) -> DMatrix<T>) -> Self {
        let blocks = self
            .blocks
            .iter()
            .enumerate()
            .map(|(k, b)| b.as_ref().map(|b| f(k, b)))
            .collect();
        GradedOperator {
            n: self.n,
            shift: self.shift,
            blocks,
        }
    }

    /// Left multiplication by the sector scalar `c(target_k)` on each block.
    pub fn scale_by_target_sector(&self, c: impl Fn(usize) -> T) -> Self {
        let shift = self.shift;
        self.map_blocks(|k, b| {
            let s = c((k as i64 + shift as i64) as usize);
            b.map(|x| x * s.clone())
        })
    }

    /// Commutator `[self, rhs]`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self, CoreError> {
        self.compose(rhs)?.try_sub(&rhs.compose(self)?)
    }

    /// Largest entry magnitude over all blocks.
    pub fn max_abs(&self) -> f64 {
        self.blocks
            .iter()
            .flatten()
            .flat_map(|b| b.iter())
            .fold(0.0, |m, x| m.max(x.magnitude()))
    }

    /// Converts the entry type.
    pub fn map_field<U: Field>(&self, f: impl Fn(&T) -> U) -> GradedOperator<U> {
        GradedOperator {
            n: self.n,
            shift: self.shift,
            blocks: self.blocks.iter().map(|b| b.as_ref().map(|b| b.map(|x| f(&x)))).collect(),
        }
    }

    /// Dense `2^n x 2^n` matrix in mask order.
    pub fn to_dense(&self) -> DMatrix<T> {
        let n = self.n;
        let table = SectorTable::new(n);
        let mut out = DMatrix::zeros(1 << n, 1 << n);
        for k in 0..=n {
            if let (Some(b), Some(t)) = (self.block(k), target_sector(n, k, self.shift)) {
                for (j, &cm) in table.sector(k).iter().enumerate() {
                    for (i, &rm) in table.sector(t).iter().enumerate() {
                        out[(rm as usize, cm as usize)] = b[(i, j)].clone();
                    }
                }
            }
        }
        out
    }

    /// Applies the operator to a full vector indexed by mask.
    pub fn apply(&self, v: &DVector<T>) -> Result<DVector<T>, CoreError> {
        let n = self.n;
        if v.len() != 1 << n {
            return Err(CoreError::ShapeMismatch(format!("vector length {} for n={n}", v.len())));
        }
        let table = SectorTable::new(n);
        let mut out = DVector::zeros(1 << n);
        for k in 0..=n {
            if let (Some(b), Some(t)) = (self.block(k), target_sector(n, k, self.shift)) {
                let src = DVector::from_iterator(binomial(n, k), table.sector(k).iter().map(|&m| v[m as usize].clone()));
                let img = b * src;
                for (i, &m) in table.sector(t).iter().enumerate() {
                    out[m as usize] = img[i].clone();
                }
            }
        }
        Ok(out)
    }

    /// Whether every block is square and diagonal up to `tol` in magnitude.
    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.shift == 0
            && self.blocks.iter().flatten().all(|b| {
                (0..b.nrows()).all(|i| (0..b.ncols()).all(|j| i == j || b[(i, j)].magnitude() <= tol))
            })
    }

    /// Diagonal entries of block `k` (shift 0 only).
    pub fn diagonal_of(&self, k: usize) -> Option<Vec<T>> {
        if self.shift != 0 {
            return None;
        }
        self.block(k).map(|b| (0..b.nrows()).map(|i| b[(i, i)].clone()).collect())
    }
}

impl GradedOperator<C64> {
    /// Reads blocks with the given shift out of a dense matrix.
    ///
    /// Returns the operator together with the largest entry that lies outside
    /// the declared shift (zero for a correctly graded input).
    pub fn from_dense(n: usize, shift: i32, m: &DMatrix<C64>) -> Result<(Self, f64), CoreError> {
        if m.shape() != (1 << n, 1 << n) {
            return Err(CoreError::ShapeMismatch(format!("dense matrix {:?} for n={n}", m.shape())));
        }
        let op = Self::from_entries(n, shift, |r, c| m[(r as usize, c as usize)]);
        let mut leak = 0.0f64;
        for c in 0u32..1 << n {
            for r in 0u32..1 << n {
                if r.count_ones() as i64 - c.count_ones() as i64 != shift as i64 {
                    leak = leak.max(m[(r as usize, c as usize)].norm());
                }
            }
        }
        Ok((op, leak))
    }
}

impl<T: Field> GradedOperator<T> {
    /// Integer power by repeated composition; the shift multiplies by `e`.
    pub fn power(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.n);
        for _ in 0..e {
            acc = acc.compose(self).expect("same n");
        }
        acc
    }

    /// Sum of operators sharing `n` and shift; `None` for an empty list.
    pub fn sum<'a>(ops: impl IntoIterator<Item = &'a Self>) -> Option<Self>
    where
        T: 'a,
    {
        let mut it = ops.into_iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, op| acc.try_add(op).expect("matching shapes")))
    }

    /// Whether the operator equals the identity exactly (useful for exact fields).
    pub fn is_identity(&self) -> bool {
        self.shift == 0
            && self.blocks.iter().flatten().all(|b| {
                (0..b.nrows()).all(|i| {
                    (0..b.ncols()).all(|j| {
                        if i == j {
                            b[(i, j)] == T::one()
                        } else {
                            b[(i, j)] == T::zero()
                        }
                    })
                })
            })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c64;

    fn sample(n: usize, shift: i32, seed: f64) -> GradedOperator {
        GradedOperator::from_entries(n, shift, |r, c| c64((r as f64 + seed).sin(), (c as f64 * seed).cos()))
    }

    #[test]
    fn block_shapes_follow_binomials() {
        let op = sample(4, 1, 0.3);
        for k in 0..=4 {
            match op.block(k) {
                Some(b) => assert_eq!(b.shape(), (binomial(4, k + 1), binomial(4, k))),
                None => assert_eq!(k, 4),
            }
        }
    }

    #[test]
    fn composition_adds_shifts_and_matches_dense() {
        let a = sample(3, -1, 0.7);
        let b = sample(3, 1, 1.1);
        let ab = a.compose(&b).unwrap();
        assert_eq!(ab.shift(), 0);
        let dense = a.to_dense() * b.to_dense();
        assert!(crate::linalg::max_abs(&(ab.to_dense() - dense)) < 1e-14);
    }

    #[test]
    fn dense_round_trip_reports_no_leak() {
        let a = sample(3, 2, 0.4);
        let (b, leak) = GradedOperator::from_dense(3, 2, &a.to_dense()).unwrap();
        assert_eq!(leak, 0.0);
        assert_eq!(a, b);
    }

    #[test]
    fn diagonal_constructor_places_entries_by_mask() {
        let d = GradedOperator::diagonal(3, |m| c64(m as f64, 0.0));
        let dense = d.to_dense();
        for m in 0..8 {
            assert_eq!(dense[(m, m)], c64(m as f64, 0.0));
        }
        assert!(d.is_diagonal(0.0));
    }

    #[test]
    fn mismatched_shapes_are_errors() {
        assert!(sample(3, 0, 0.1).try_add(&sample(3, 1, 0.1)).is_err());
        assert!(sample(3, 0, 0.1).compose(&sample(2, 0, 0.1)).is_err());
    }
}
