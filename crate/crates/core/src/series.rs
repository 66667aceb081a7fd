//! Truncated formal power series with scalar or operator coefficients.

use crate::error::CoreError;
use crate::graded::GradedOperator;
use crate::scalar::C64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Name of the formal variable, carried so that series in different
/// variables are never combined by accident.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeriesVar {
    X,
    Z,
    UInv,
    T,
}

/// Scalar series `c_0 + c_1 v + ... + c_M v^M`, exact through order `M`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerSeries {
    var: SeriesVar,
    coeffs: Vec<C64>,
}

impl PowerSeries {
    /// Series from its coefficients `c_0..c_M`.
    ///
    /// # Panics
    /// If `coeffs` is empty.
    pub fn new(var: SeriesVar, coeffs: Vec<C64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        PowerSeries { var, coeffs }
    }

    /// Zero series through order `m`.
    pub fn zero(var: SeriesVar, m: usize) -> Self {
        Self::new(var, vec![C64::zero(); m + 1])
    }

    /// Constant series `1` through order `m`.
    pub fn one(var: SeriesVar, m: usize) -> Self {
        Self::constant(var, C64::one(), m)
    }

    /// Constant series `c` through order `m`.
    pub fn constant(var: SeriesVar, c: C64, m: usize) -> Self {
        let mut s = Self::zero(var, m);
        s.coeffs[0] = c;
        s
    }

    /// Polynomial `prod_i (1 - r_i v)` truncated at order `m`.
    pub fn product_of_linear(var: SeriesVar, roots: &[C64], m: usize) -> Self {
        roots.iter().fold(Self::one(var, m), |acc, &r| {
            acc.mul(&Self::from_poly(var, &[C64::one(), -r], m)).expect("same variable")
        })
    }

    /// Series from polynomial coefficients, padded or truncated to order `m`.
    pub fn from_poly(var: SeriesVar, poly: &[C64], m: usize) -> Self {
        let mut coeffs = vec![C64::zero(); m + 1];
        for (c, p) in coeffs.iter_mut().zip(poly) {
            *c = *p;
        }
        Self::new(var, coeffs)
    }

    /// Formal variable.
    pub fn var(&self) -> SeriesVar {
        self.var
    }

    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients `c_0..c_M`.
    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    /// Coefficient of `v^i`, zero beyond the truncation order.
    pub fn coeff(&self, i: usize) -> C64 {
        self.coeffs.get(i).copied().unwrap_or_else(C64::zero)
    }

    fn compatible(&self, other: &Self) -> Result<usize, CoreError> {
        if self.var != other.var {
            return Err(CoreError::ShapeMismatch(format!("series in {:?} and {:?}", self.var, other.var)));
        }
        Ok(self.order().min(other.order()))
    }

    /// Sum, truncated at the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        Ok(Self::new(self.var, (0..=m).map(|i| self.coeffs[i] + other.coeffs[i]).collect()))
    }

    /// Difference, truncated at the smaller order.
    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        Ok(Self::new(self.var, (0..=m).map(|i| self.coeffs[i] - other.coeffs[i]).collect()))
    }

    /// Cauchy product, truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        let coeffs = (0..=m)
            .map(|i| (0..=i).map(|j| self.coeffs[j] * other.coeffs[i - j]).sum())
            .collect();
        Ok(Self::new(self.var, coeffs))
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn inverse(&self) -> Result<Self, CoreError> {
        let c0 = self.coeffs[0];
        if c0.norm() == 0.0 {
            return Err(CoreError::ZeroConstantTerm);
        }
        let m = self.order();
        let mut inv = vec![C64::zero(); m + 1];
        inv[0] = c0.inv();
        for i in 1..=m {
            let s: C64 = (1..=i).map(|j| self.coeffs[j] * inv[i - j]).sum();
            inv[i] = -s * inv[0];
        }
        Ok(Self::new(self.var, inv))
    }

    /// Quotient `self / other`; requires `other` to have a nonzero constant term.
    pub fn div(&self, other: &Self) -> Result<Self, CoreError> {
        self.mul(&other.inverse()?)
    }

    /// Argument rescaling `f(v) -> f(c v)`.
    pub fn rescale(&self, c: C64) -> Self {
        let mut p = C64::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|&x| {
                let y = x * p;
                p *= c;
                y
            })
            .collect();
        Self::new(self.var, coeffs)
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: C64) -> Self {
        Self::new(self.var, self.coeffs.iter().map(|&x| x * c).collect())
    }

    /// Evaluates the truncated polynomial at `v`.
    pub fn eval(&self, v: C64) -> C64 {
        self.coeffs.iter().rev().fold(C64::zero(), |acc, &c| acc * v + c)
    }

    /// Same series cut to order `m` (or zero-padded).
    pub fn truncate(&self, m: usize) -> Self {
        Self::from_poly(self.var, &self.coeffs, m)
    }

    /// Largest coefficient difference from `other` through the common order.
    pub fn max_diff(&self, other: &Self) -> Result<f64, CoreError> {
        let m = self.compatible(other)?;
        Ok((0..=m).fold(0.0, |acc, i| acc.max((self.coeffs[i] - other.coeffs[i]).norm())))
    }
}

/// Series whose coefficients are graded operators sharing one shift.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorSeries {
    var: SeriesVar,
    coeffs: Vec<GradedOperator>,
}

impl OperatorSeries {
    /// Series from operator coefficients.
    ///
    /// # Errors
    /// When the list is empty or the coefficients disagree on `n` or shift.
    pub fn new(var: SeriesVar, coeffs: Vec<GradedOperator>) -> Result<Self, CoreError> {
        let first = coeffs
            .first()
            .ok_or_else(|| CoreError::ShapeMismatch("empty operator series".into()))?;
        let (n, shift) = (first.n(), first.shift());
        if coeffs.iter().any(|c| c.n() != n || c.shift() != shift) {
            return Err(CoreError::ShapeMismatch("operator series coefficients disagree".into()));
        }
        Ok(OperatorSeries { var, coeffs })
    }

    /// Identity through order `m`.
    pub fn identity(var: SeriesVar, n: usize, m: usize) -> Self {
        let mut coeffs = vec![GradedOperator::zero(n, 0); m + 1];
        coeffs[0] = GradedOperator::identity(n);
        OperatorSeries { var, coeffs }
    }

    /// Scalar series times the identity operator.
    pub fn from_scalar(series: &PowerSeries, n: usize) -> Self {
        let id = GradedOperator::identity(n);
        OperatorSeries {
            var: series.var(),
            coeffs: series.coeffs().iter().map(|c| id.scale(c)).collect(),
        }
    }

    /// Formal variable.
    pub fn var(&self) -> SeriesVar {
        self.var
    }

    /// Truncation order.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Chain length of the coefficients.
    pub fn n(&self) -> usize {
        self.coeffs[0].n()
    }

    /// Common shift of the coefficients.
    pub fn shift(&self) -> i32 {
        self.coeffs[0].shift()
    }

    /// Coefficients.
    pub fn coeffs(&self) -> &[GradedOperator] {
        &self.coeffs
    }

    /// Coefficient of `v^i`.
    pub fn coeff(&self, i: usize) -> Option<&GradedOperator> {
        self.coeffs.get(i)
    }

    fn compatible(&self, other: &Self) -> Result<usize, CoreError> {
        if self.var != other.var || self.n() != other.n() {
            return Err(CoreError::ShapeMismatch("operator series variable or size".into()));
        }
        Ok(self.order().min(other.order()))
    }

    /// Sum, truncated at the smaller order.
    pub fn add(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        let coeffs = (0..=m)
            .map(|i| self.coeffs[i].try_add(&other.coeffs[i]))
            .collect::<Result<_, _>>()?;
        Self::new(self.var, coeffs)
    }

    /// Difference, truncated at the smaller order.
    pub fn sub(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        let coeffs = (0..=m)
            .map(|i| self.coeffs[i].try_sub(&other.coeffs[i]))
            .collect::<Result<_, _>>()?;
        Self::new(self.var, coeffs)
    }

    /// Operator Cauchy product `self * other`, truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Result<Self, CoreError> {
        let m = self.compatible(other)?;
        let coeffs = (0..=m)
            .map(|i| {
                let terms = (0..=i)
                    .map(|j| self.coeffs[j].compose(&other.coeffs[i - j]))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(GradedOperator::sum(&terms).expect("at least one term"))
            })
            .collect::<Result<_, CoreError>>()?;
        Self::new(self.var, coeffs)
    }

    /// Argument rescaling `f(v) -> f(c v)`.
    pub fn rescale(&self, c: C64) -> Self {
        let mut p = C64::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|op| {
                let y = op.scale(&p);
                p *= c;
                y
            })
            .collect();
        OperatorSeries { var: self.var, coeffs }
    }

    /// Multiplies every coefficient by the scalar `c`.
    pub fn scale(&self, c: C64) -> Self {
        OperatorSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(|op| op.scale(&c)).collect(),
        }
    }

    /// Left multiplication of each coefficient by a sector-dependent scalar.
    pub fn scale_by_sector(&self, c: impl Fn(usize) -> C64) -> Self {
        OperatorSeries {
            var: self.var,
            coeffs: self.coeffs.iter().map(|op| op.scale_by_target_sector(&c)).collect(),
        }
    }

    /// Largest entry magnitude of each coefficient.
    pub fn max_abs_per_order(&self) -> Vec<f64> {
        self.coeffs.iter().map(GradedOperator::max_abs).collect()
    }

    /// Same series cut to order `m` (or zero-padded).
    pub fn truncate(&self, m: usize) -> Self {
        let (n, shift) = (self.n(), self.shift());
        let coeffs = (0..=m)
            .map(|i| self.coeffs.get(i).cloned().unwrap_or_else(|| GradedOperator::zero(n, shift)))
            .collect();
        OperatorSeries { var: self.var, coeffs }
    }
}
