//! Bethe systems, their residuals, and the analytic Jacobian used by the
//! solver.
//!
//! All three conventions are solved through the geometric form, cleared of
//! denominators:
//!
//! ```text
//! F_i = alpha A_i - gamma B_i
//! A_i = prod_j (s_i - a_j) prod_{j != i} (s_i - hbar s_j)
//! B_i = prod_{j != i} (hbar s_i - s_j) prod_j (hbar a_j - s_i)
//! ```
//!
//! with `(alpha, gamma) = (1, z hbar^{-n/2})`. The continuation from infinity
//! uses `(alpha, gamma) = (1/z, hbar^{-n/2})` instead.

use crate::conventions::{convention_map, Convention};
use crate::BetheError;
use kxxz_core::{c64, ModelParams, C64};
use nalgebra::{DMatrix, DVector};

/// Relative size below which a denominator counts as a pole.
const POLE_TOL: f64 = 1e-14;

/// A Bethe system: parameters, number of roots, convention and deformation.
#[derive(Clone, Debug)]
pub struct BetheSystem {
    params: ModelParams,
    k: usize,
    convention: Convention,
    deformation: C64,
    geometric: GeometricForm,
}

/// The canonical geometric form the solver works in.
#[derive(Clone, Debug)]
pub struct GeometricForm {
    pub a: Vec<C64>,
    pub hbar: C64,
    /// `hbar^{-n/2}` on the cached branch.
    pub hbar_pow: C64,
    /// Deformation `z` of the geometric form.
    pub z: C64,
}

impl BetheSystem {
    /// System with `k` roots. The deformation is `z` for the geometric and
    /// saddle forms and `Z^2` for the Bethe ansatz form.
    pub fn new(params: &ModelParams, k: usize, convention: Convention, deformation: C64) -> Result<Self, BetheError> {
        if k > params.n() {
            return Err(BetheError::InvalidSystem(format!("k = {k} exceeds n = {}", params.n())));
        }
        if !deformation.is_finite() {
            return Err(BetheError::InvalidSystem("deformation must be finite".into()));
        }
        let map = convention_map(convention);
        let n = params.n();
        let p_g = if map.hbar_power < 0 { params.with_inverted_hbar() } else { params.clone() };
        let sign = if map.sign_n * n as u32 % 2 == 1 { -1.0 } else { 1.0 };
        let z = deformation * sign * params.branches().hbar_half_pow(map.half_power);
        let geometric = GeometricForm {
            a: p_g.a().to_vec(),
            hbar: p_g.hbar(),
            hbar_pow: p_g.branches().hbar_half_pow(-(n as i32)),
            z,
        };
        Ok(BetheSystem {
            params: params.clone(),
            k,
            convention,
            deformation,
            geometric,
        })
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn n(&self) -> usize {
        self.params.n()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// The deformation in this system's own convention.
    pub fn deformation(&self) -> C64 {
        self.deformation
    }

    /// The equivalent geometric form.
    pub fn geometric(&self) -> &GeometricForm {
        &self.geometric
    }

    /// The same parameters and convention at another deformation.
    pub fn with_deformation(&self, deformation: C64) -> Result<Self, BetheError> {
        Self::new(&self.params, self.k, self.convention, deformation)
    }

    /// Cleared-denominator residual in this system's own convention.
    ///
    /// Geometric and saddle: `A_i - z hbar^{-n/2} B_i`. Bethe ansatz form:
    /// `prod_j (a_j/hbar - s_i) prod_{j != i} (s_i/hbar - s_j)
    ///  - Z^{-2} hbar^{-n/2} prod_j (a_j - s_i) prod_{j != i} (s_i - s_j/hbar)`.
    pub fn residual(&self, roots: &[C64]) -> Result<Vec<C64>, BetheError> {
        self.check_len(roots)?;
        self.check_poles(roots)?;
        Ok(match self.convention {
            Convention::Geometric | Convention::Saddle => {
                let g = &self.geometric;
                (0..roots.len())
                    .map(|i| {
                        let (a, b) = g.products(roots, i);
                        a - g.z * g.hbar_pow * b
                    })
                    .collect()
            }
            Convention::Aba => {
                let h = self.params.hbar();
                let rhs = self.params.branches().hbar_half_pow(-(self.n() as i32)) / self.deformation;
                (0..roots.len())
                    .map(|i| {
                        let s = roots[i];
                        let mut lhs = c64(1.0, 0.0);
                        let mut right = c64(1.0, 0.0);
                        for &a in self.params.a() {
                            lhs *= a / h - s;
                            right *= a - s;
                        }
                        for (j, &t) in roots.iter().enumerate() {
                            if j != i {
                                lhs *= s / h - t;
                                right *= s - t / h;
                            }
                        }
                        lhs - rhs * right
                    })
                    .collect()
            }
        })
    }

    /// Logarithmic residual of the geometric form,
    /// `log(lhs / rhs)` with the imaginary part reduced to `(-pi, pi]`.
    ///
    /// Zero modulo `2 pi i` exactly at solutions. Only meaningful away from
    /// zeros of either side, which are reported as [`BetheError::PoleHit`].
    pub fn log_residual(&self, roots: &[C64]) -> Result<Vec<C64>, BetheError> {
        self.check_len(roots)?;
        self.check_poles(roots)?;
        let g = &self.geometric;
        let rhs_const = g.z * g.hbar_pow;
        if rhs_const.norm() == 0.0 {
            return Err(BetheError::PoleHit { index: 0 });
        }
        (0..roots.len())
            .map(|i| {
                let (a, b) = g.products(roots, i);
                if a.norm() == 0.0 || b.norm() == 0.0 {
                    return Err(BetheError::PoleHit { index: i });
                }
                let r = (a / (rhs_const * b)).ln();
                Ok(r)
            })
            .collect()
    }

    /// Largest scaled residual `|A_i - gamma B_i| / (|A_i| + |gamma B_i|)` of
    /// the geometric form; the quantity the solver drives to zero.
    pub fn scaled_residual(&self, roots: &[C64]) -> f64 {
        let g = &self.geometric;
        g.scaled_residual(roots, c64(1.0, 0.0), g.z * g.hbar_pow)
    }

    fn check_len(&self, roots: &[C64]) -> Result<(), BetheError> {
        if roots.len() != self.k {
            return Err(BetheError::InvalidSystem(format!("expected {} roots, got {}", self.k, roots.len())));
        }
        Ok(())
    }

    /// Poles of the geometric form: `s_i = hbar a_j` and `s_i = hbar s_j`.
    fn check_poles(&self, roots: &[C64]) -> Result<(), BetheError> {
        let g = &self.geometric;
        for (i, &s) in roots.iter().enumerate() {
            let near = |p: C64| (s - p).norm() <= POLE_TOL * s.norm().max(p.norm()).max(1e-300);
            if g.a.iter().any(|&a| near(g.hbar * a)) {
                return Err(BetheError::PoleHit { index: i });
            }
            if roots.iter().enumerate().any(|(j, &t)| j != i && near(g.hbar * t)) {
                return Err(BetheError::PoleHit { index: i });
            }
        }
        Ok(())
    }
}

/// A linear factor `c0 + d_i s_i + d_j s_j` of one of the products.
struct Factor {
    value: C64,
    /// `(variable, derivative)` pairs; at most two.
    grads: [(usize, C64); 2],
    len: usize,
}

impl Factor {
    fn one_var(value: C64, i: usize, di: C64) -> Self {
        Factor {
            value,
            grads: [(i, di), (0, C64::new(0.0, 0.0))],
            len: 1,
        }
    }

    fn two_var(value: C64, i: usize, di: C64, j: usize, dj: C64) -> Self {
        Factor {
            value,
            grads: [(i, di), (j, dj)],
            len: 2,
        }
    }
}

/// Value and gradient of a product of linear factors, without dividing by
/// factors (which vanish at the classical starting points).
fn product_with_gradient(factors: &[Factor], k: usize) -> (C64, Vec<C64>) {
    let len = factors.len();
    let mut prefix = vec![c64(1.0, 0.0); len + 1];
    for (l, f) in factors.iter().enumerate() {
        prefix[l + 1] = prefix[l] * f.value;
    }
    let mut suffix = vec![c64(1.0, 0.0); len + 1];
    for l in (0..len).rev() {
        suffix[l] = suffix[l + 1] * factors[l].value;
    }
    let mut grad = vec![c64(0.0, 0.0); k];
    for (l, f) in factors.iter().enumerate() {
        let others = prefix[l] * suffix[l + 1];
        for &(v, d) in &f.grads[..f.len] {
            grad[v] += d * others;
        }
    }
    (prefix[len], grad)
}

/// Values and Jacobians of the two products for every equation.
pub struct Evaluation {
    pub a: Vec<C64>,
    pub b: Vec<C64>,
    pub da: DMatrix<C64>,
    pub db: DMatrix<C64>,
}

impl GeometricForm {
    /// `(A_i, B_i)` for one equation.
    pub fn products(&self, s: &[C64], i: usize) -> (C64, C64) {
        let si = s[i];
        let mut a = c64(1.0, 0.0);
        let mut b = c64(1.0, 0.0);
        for &aj in &self.a {
            a *= si - aj;
            b *= self.hbar * aj - si;
        }
        for (j, &sj) in s.iter().enumerate() {
            if j != i {
                a *= si - self.hbar * sj;
                b *= self.hbar * si - sj;
            }
        }
        (a, b)
    }

    /// Both products and their Jacobians with respect to the roots.
    pub fn evaluate(&self, s: &[C64]) -> Evaluation {
        let k = s.len();
        let h = self.hbar;
        let one = c64(1.0, 0.0);
        let mut out = Evaluation {
            a: vec![c64(0.0, 0.0); k],
            b: vec![c64(0.0, 0.0); k],
            da: DMatrix::zeros(k, k),
            db: DMatrix::zeros(k, k),
        };
        for i in 0..k {
            let si = s[i];
            let mut fa = Vec::with_capacity(self.a.len() + k);
            let mut fb = Vec::with_capacity(self.a.len() + k);
            for &aj in &self.a {
                fa.push(Factor::one_var(si - aj, i, one));
                fb.push(Factor::one_var(h * aj - si, i, -one));
            }
            for (j, &sj) in s.iter().enumerate() {
                if j != i {
                    fa.push(Factor::two_var(si - h * sj, i, one, j, -h));
                    fb.push(Factor::two_var(h * si - sj, i, h, j, -one));
                }
            }
            let (va, ga) = product_with_gradient(&fa, k);
            let (vb, gb) = product_with_gradient(&fb, k);
            out.a[i] = va;
            out.b[i] = vb;
            for v in 0..k {
                out.da[(i, v)] = ga[v];
                out.db[(i, v)] = gb[v];
            }
        }
        out
    }

    /// `max_i |alpha A_i - gamma B_i| / (|alpha A_i| + |gamma B_i|)`.
    pub fn scaled_residual(&self, s: &[C64], alpha: C64, gamma: C64) -> f64 {
        (0..s.len())
            .map(|i| {
                let (a, b) = self.products(s, i);
                let (x, y) = (alpha * a, gamma * b);
                let denom = x.norm() + y.norm();
                if denom == 0.0 {
                    0.0
                } else {
                    (x - y).norm() / denom
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Residual vector `alpha A - gamma B` from an evaluation.
pub fn combine(ev: &Evaluation, alpha: C64, gamma: C64) -> (DVector<C64>, DMatrix<C64>) {
    let f = DVector::from_iterator(ev.a.len(), ev.a.iter().zip(&ev.b).map(|(a, b)| alpha * a - gamma * b));
    let j = &ev.da * alpha - &ev.db * gamma;
    (f, j)
}

/// All `k`-subsets of the `a_j` (as root lists, in canonical mask order).
pub fn classical_solutions(n: usize, k: usize, params: &ModelParams) -> Vec<Vec<C64>> {
    kxxz_core::enumerate_fixed_points(n, k)
        .into_iter()
        .map(|p| p.members().into_iter().map(|i| params.a()[i]).collect())
        .collect()
}
