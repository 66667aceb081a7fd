//! Drinfeld generators acting on the fixed-point basis.
//!
//! With `sh = hbar^{1/2}` and `c = sh - 1/sh` the generators act on the fixed
//! point `O_p` (`p` a `k`-subset of `{1..n}`) by
//!
//! ```text
//! K O_p   = sh^{n-2k} O_p
//! H_m O_p = ([m]/m) (sh^{-m} sum_{i not in p} a_i^{-m} - sh^{m} sum_{i in p} a_i^{-m}) O_p
//! E_r O_q = sum_{s in q} a_s^{-r-1} prod_{j in q-s} (a_j - hbar a_s)
//!                                  / prod_{j not in q} (a_j - a_s)  O_{q-s}
//! F_r O_p = sum_{s not in p} sh^{n-2k-1} a_s^{1-r} prod_{j not in p+s} (a_j - a_s/hbar)
//!                                  / prod_{j in p} (a_j - a_s)  O_{p+s}
//! ```
//!
//! where `[m] = (sh^m - sh^{-m}) / c`. The Cartan currents are
//! `psi+(w) = K exp(c sum_{m>0} H_m w^m)` and
//! `psi-(w) = K^{-1} exp(-c sum_{m>0} H_{-m} w^m)`.

use crate::UqError;
use kxxz_core::{c64, ExactComplex, Field, GradedOperator, ModelParams, C64};
use num_traits::One;

/// Parameters of the generators in a chosen scalar field.
#[derive(Clone, Debug)]
pub struct DrinfeldGenerators<T: Field = C64> {
    n: usize,
    a: Vec<T>,
    sh: T,
    hbar: T,
    k_sign: T,
    singular_tol: f64,
    a_scale: f64,
}

fn int<T: Field>(m: i64) -> T {
    T::from_c64(c64(m as f64, 0.0))
}

impl DrinfeldGenerators<C64> {
    /// Double-precision generators; `hbar^{1/2}` comes from the shared branch cache.
    pub fn new(params: &ModelParams) -> Self {
        DrinfeldGenerators {
            n: params.n(),
            a: params.a().to_vec(),
            sh: params.branches().sqrt_hbar,
            hbar: params.hbar(),
            k_sign: C64::one(),
            singular_tol: params.genericity_tol(),
            a_scale: params.a_scale(),
        }
    }
}

impl DrinfeldGenerators<ExactComplex> {
    /// Exact generators.
    ///
    /// The inputs are the binary values of `a_i` and of the cached
    /// `hbar^{1/2}`, read as exact rationals; `hbar` is then the exact square
    /// of that half power, so every relation holds identically.
    pub fn exact(params: &ModelParams) -> Self {
        let sh = ExactComplex::from_c64(params.branches().sqrt_hbar);
        DrinfeldGenerators {
            n: params.n(),
            a: params.a().iter().map(|&z| ExactComplex::from_c64(z)).collect(),
            hbar: sh.clone() * sh.clone(),
            sh,
            k_sign: ExactComplex::one(),
            singular_tol: params.genericity_tol(),
            a_scale: params.a_scale(),
        }
    }
}

impl<T: Field> DrinfeldGenerators<T> {
    /// The same generators with `K` (and hence both Cartan currents) negated.
    ///
    /// This is a deliberately wrong normalization used as a negative control:
    /// conjugation relations survive it but `[E, F]` does not.
    pub fn with_wrong_k_sign(mut self) -> Self {
        self.k_sign = -self.k_sign;
        self
    }

    /// Chain length.
    pub fn n(&self) -> usize {
        self.n
    }

    /// `hbar` in this field.
    pub fn hbar(&self) -> &T {
        &self.hbar
    }

    /// `hbar^{1/2}` in this field.
    pub fn sqrt_hbar(&self) -> &T {
        &self.sh
    }

    /// `sh - 1/sh`.
    pub fn c(&self) -> T {
        self.sh.clone() - T::one() / self.sh.clone()
    }

    /// The quantum integer `[m] = (sh^m - sh^{-m}) / (sh - 1/sh)`.
    pub fn quantum_integer(&self, m: i32) -> T {
        (self.sh.powi(m) - self.sh.powi(-m)) / self.c()
    }

    fn k_value(&self, mask: u32) -> T {
        let k = mask.count_ones() as i32;
        self.k_sign.clone() * self.sh.powi(self.n as i32 - 2 * k)
    }

    fn h_value(&self, m: i32, mask: u32) -> T {
        let (mut outside, mut inside) = (T::zero(), T::zero());
        for (i, a) in self.a.iter().enumerate() {
            if mask >> i & 1 == 1 {
                inside += a.powi(-m);
            } else {
                outside += a.powi(-m);
            }
        }
        self.quantum_integer(m) / int(m as i64) * (self.sh.powi(-m) * outside - self.sh.powi(m) * inside)
    }

    /// `K`, diagonal with eigenvalue `hbar^{(n-2k)/2}` on sector `k`.
    pub fn op_k(&self) -> GradedOperator<T> {
        GradedOperator::diagonal(self.n, |mask| self.k_value(mask))
    }

    /// `K^{-1}`.
    pub fn op_k_inv(&self) -> GradedOperator<T> {
        GradedOperator::diagonal(self.n, |mask| T::one() / self.k_value(mask))
    }

    /// `H_m` for `m != 0`.
    pub fn op_h(&self, m: i32) -> Result<GradedOperator<T>, UqError> {
        if m == 0 {
            return Err(UqError::ZeroMode);
        }
        Ok(GradedOperator::diagonal(self.n, |mask| self.h_value(m, mask)))
    }

    fn check_denominators(&self) -> Result<(), UqError> {
        for i in 0..self.n {
            for j in i + 1..self.n {
                let d = (self.a[i].clone() - self.a[j].clone()).magnitude();
                if d < self.singular_tol * self.a_scale {
                    return Err(UqError::NearSingularDenominator { i, j });
                }
            }
        }
        Ok(())
    }

    /// `E_r`, lowering the sector by one.
    pub fn op_e(&self, r: i32) -> Result<GradedOperator<T>, UqError> {
        self.check_denominators()?;
        let n = self.n;
        Ok(GradedOperator::from_entries(n, -1, |target, source| {
            let removed = source & !target;
            if target & !source != 0 || removed.count_ones() != 1 {
                return T::zero();
            }
            let s = removed.trailing_zeros() as usize;
            let a_s = &self.a[s];
            let mut num = T::one();
            let mut den = T::one();
            for j in 0..n {
                if j == s {
                    continue;
                }
                if source >> j & 1 == 1 {
                    num *= self.a[j].clone() - self.hbar.clone() * a_s.clone();
                } else {
                    den *= self.a[j].clone() - a_s.clone();
                }
            }
            a_s.powi(-r - 1) * num / den
        }))
    }

    /// `F_r`, raising the sector by one.
    pub fn op_f(&self, r: i32) -> Result<GradedOperator<T>, UqError> {
        self.check_denominators()?;
        let n = self.n;
        Ok(GradedOperator::from_entries(n, 1, |target, source| {
            let added = target & !source;
            if source & !target != 0 || added.count_ones() != 1 {
                return T::zero();
            }
            let s = added.trailing_zeros() as usize;
            let k = source.count_ones() as i32;
            let a_s = &self.a[s];
            let mut num = T::one();
            let mut den = T::one();
            for j in 0..n {
                if j == s {
                    continue;
                }
                if source >> j & 1 == 1 {
                    den *= self.a[j].clone() - a_s.clone();
                } else {
                    num *= self.a[j].clone() - a_s.clone() / self.hbar.clone();
                }
            }
            self.sh.powi(n as i32 - 2 * k - 1) * a_s.powi(1 - r) * num / den
        }))
    }

    /// Coefficients `psi+_0..psi+_M` and `psi-_0..psi-_{-M}` of the Cartan currents.
    ///
    /// Each diagonal entry of `exp(g(w))` is expanded with the recursion
    /// `m f_m = sum_{j=1}^m j g_j f_{m-j}`, which only needs field operations.
    pub fn psi_series(&self, order: usize) -> (Vec<GradedOperator<T>>, Vec<GradedOperator<T>>) {
        let c = self.c();
        let plus = self.current(order, |mask, m| c.clone() * self.h_value(m as i32, mask), |mask| self.k_value(mask));
        let minus = self.current(
            order,
            |mask, m| -(c.clone() * self.h_value(-(m as i32), mask)),
            |mask| T::one() / self.k_value(mask),
        );
        (plus, minus)
    }

    fn current(
        &self,
        order: usize,
        exponent: impl Fn(u32, usize) -> T,
        prefactor: impl Fn(u32) -> T,
    ) -> Vec<GradedOperator<T>> {
        let masks = 1u32 << self.n;
        // coeffs[mask][m] for the series of each diagonal entry.
        let per_mask: Vec<Vec<T>> = (0..masks)
            .map(|mask| {
                let g: Vec<T> = (0..=order).map(|m| if m == 0 { T::zero() } else { exponent(mask, m) }).collect();
                let mut f = vec![T::one()];
                for m in 1..=order {
                    let mut acc = T::zero();
                    for j in 1..=m {
                        acc += int::<T>(j as i64) * g[j].clone() * f[m - j].clone();
                    }
                    f.push(acc / int(m as i64));
                }
                let p = prefactor(mask);
                f.into_iter().map(|x| p.clone() * x).collect()
            })
            .collect();
        (0..=order)
            .map(|m| GradedOperator::diagonal(self.n, |mask| per_mask[mask as usize][m].clone()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kxxz_core::make_params;

    fn params(a: &[f64], hbar: f64) -> ModelParams {
        let a: Vec<C64> = a.iter().map(|&x| c64(x, 0.0)).collect();
        make_params(a.len(), &a, c64(hbar, 0.0), c64(0.9, 0.0), 53).unwrap()
    }

    fn diag_entry(op: &GradedOperator, mask: u32) -> C64 {
        let k = mask.count_ones() as usize;
        let table = kxxz_core::SectorTable::new(op.n());
        op.diagonal_of(k).unwrap()[table.position(mask)]
    }

    #[test]
    fn k_eigenvalues() {
        let g = DrinfeldGenerators::new(&params(&[1.0, 2.0], 0.3));
        let k = g.op_k();
        assert!((diag_entry(&k, 0b01) - c64(1.0, 0.0)).norm() < 1e-15);
        assert!((diag_entry(&k, 0) - c64(0.3, 0.0)).norm() < 1e-15);
        let g1 = DrinfeldGenerators::new(&params(&[1.5], 4.0));
        assert!((diag_entry(&g1.op_k(), 0) - c64(2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn h_eigenvalues() {
        let g = DrinfeldGenerators::new(&params(&[1.7], 0.3));
        let v = diag_entry(&g.op_h(1).unwrap(), 0);
        assert!((v - c64(0.3f64.sqrt().recip() / 1.7, 0.0)).norm() < 1e-14);

        let g = DrinfeldGenerators::new(&params(&[1.0, 2.0, 3.0], 0.3));
        let full = diag_entry(&g.op_h(1).unwrap(), 0b111);
        let expected = -0.3f64.sqrt() * (1.0 + 0.5 + 1.0 / 3.0);
        assert!((full - c64(expected, 0.0)).norm() < 1e-14);

        // hbar = 1/4 so sh = 1/2 and [2] = sh + 1/sh = 5/2:
        // (5/4) * (4 * 2^{-2} - (1/4) * 1) = 15/16.
        let g = DrinfeldGenerators::new(&params(&[1.0, 2.0], 0.25));
        let v = diag_entry(&g.op_h(2).unwrap(), 0b01);
        assert!((v - c64(0.9375, 0.0)).norm() < 1e-14);
        assert_eq!(g.op_h(0).unwrap_err(), UqError::ZeroMode);
    }

    #[test]
    fn one_site_raising_and_lowering() {
        let g = DrinfeldGenerators::new(&params(&[1.7], 0.3));
        let e = g.op_e(0).unwrap();
        let f = g.op_f(0).unwrap();
        assert!(e.block(0).is_none() && f.block(1).is_none());
        assert!((e.block(1).unwrap()[(0, 0)] - c64(1.0 / 1.7, 0.0)).norm() < 1e-15);
        assert!((f.block(0).unwrap()[(0, 0)] - c64(1.7, 0.0)).norm() < 1e-15);
        // [E_0, F_0] = diag(1, -1) in the basis (empty set, {1}).
        let comm = e.commutator(&f).unwrap();
        assert!((diag_entry(&comm, 0) - c64(1.0, 0.0)).norm() < 1e-14);
        assert!((diag_entry(&comm, 1) - c64(-1.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn psi_leading_terms() {
        let g = DrinfeldGenerators::new(&params(&[1.0, 1.4, 2.2], 0.45));
        let (plus, minus) = g.psi_series(0);
        assert!(plus[0].try_sub(&g.op_k()).unwrap().max_abs() == 0.0);
        assert!(minus[0].try_sub(&g.op_k_inv()).unwrap().max_abs() == 0.0);
        let (plus, _) = g.psi_series(1);
        let expected = g.op_k().compose(&g.op_h(1).unwrap()).unwrap().scale(&g.c());
        assert!(plus[1].try_sub(&expected).unwrap().max_abs() < 1e-14);
    }
}
