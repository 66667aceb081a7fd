//! Small dense linear-algebra helpers: numerical rank and spectral projectors
//! built from known eigenvalues.

use crate::error::CoreError;
use crate::scalar::{c64, C64};
use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

/// Numerical rank of a set of vectors.
///
/// Each vector is normalized first; the rank is the number of singular values
/// of the resulting matrix above `tol` times the largest one. Zero vectors do
/// not count.
pub fn gram_rank(vectors: &[DVector<C64>], tol: f64) -> Result<usize, CoreError> {
    let Some(first) = vectors.first() else {
        return Ok(0);
    };
    let dim = first.len();
    if vectors.iter().any(|v| v.len() != dim) {
        return Err(CoreError::ShapeMismatch("vectors of different dimension".into()));
    }
    let cols: Vec<DVector<C64>> = vectors
        .iter()
        .filter(|v| v.norm() > 0.0)
        .map(|v| v / c64(v.norm(), 0.0))
        .collect();
    if cols.is_empty() {
        return Ok(0);
    }
    let m = DMatrix::from_columns(&cols);
    let sv = m.singular_values();
    let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// Joint spectral decomposition of commuting operators whose eigenvalues are
/// known in advance.
///
/// Given operators `A_1..A_r` on a space of dimension `N` and `N` tuples of
/// claimed eigenvalues `(lambda_{s,1}..lambda_{s,r})`, a generic combination
/// `A = sum_m w_m A_m` is formed. When the claims are right, `A` has the `N`
/// distinct eigenvalues `mu_s = sum_m w_m lambda_{s,m}` and the Lagrange
/// polynomials `P_s = prod_{t != s} (A - mu_t) / (mu_s - mu_t)` are the rank-one
/// spectral projectors. The diagnostics measure how far the claims are from
/// the truth.
#[derive(Clone, Debug)]
pub struct SpectralProjectors {
    /// Projector for each claimed eigenvalue tuple, in input order.
    pub projectors: Vec<DMatrix<C64>>,
    /// Representative eigenvector (largest column of each projector, unit norm).
    pub vectors: Vec<DVector<C64>>,
    /// `||prod_s (A - mu_s)||_max / ||A||_max^N`.
    pub annihilation: f64,
    /// `max_s |tr P_s - 1|`.
    pub trace_defect: f64,
    /// `max_{s,m} ||A_m v_s - lambda_{s,m} v_s|| / (||A_m||_max)`.
    pub joint_residual: f64,
    /// Smallest `|mu_s - mu_t|` relative to `max |mu|`.
    pub separation: f64,
}

fn combination_weights(r: usize, attempt: usize) -> Vec<C64> {
    (0..r)
        .map(|m| {
            let t = (m as f64 + 1.0) * (0.618_033_988_75 + 0.1 * attempt as f64);
            c64(1.0 / (m as f64 + 1.0) + 0.3 * t.sin(), 0.4 * (1.7 * t).cos())
        })
        .collect()
}

impl SpectralProjectors {
    /// Builds projectors from operators and claimed joint eigenvalues.
    ///
    /// `eigen[s][m]` is the claimed eigenvalue of `ops[m]` on the `s`-th
    /// eigenvector. The number of tuples must equal the dimension.
    pub fn build(ops: &[DMatrix<C64>], eigen: &[Vec<C64>]) -> Result<Self, CoreError> {
        let dim = ops.first().map_or(eigen.len(), |a| a.nrows());
        if eigen.len() != dim {
            return Err(CoreError::ShapeMismatch(format!(
                "{} eigenvalue tuples for dimension {dim}",
                eigen.len()
            )));
        }
        if ops.iter().any(|a| a.shape() != (dim, dim)) || eigen.iter().any(|e| e.len() != ops.len()) {
            return Err(CoreError::ShapeMismatch("operators and eigenvalue tuples disagree".into()));
        }
        if dim == 0 {
            return Ok(SpectralProjectors {
                projectors: vec![],
                vectors: vec![],
                annihilation: 0.0,
                trace_defect: 0.0,
                joint_residual: 0.0,
                separation: f64::INFINITY,
            });
        }
        if dim == 1 {
            let one = DMatrix::identity(1, 1);
            let v = DVector::from_element(1, C64::one());
            let joint = ops
                .iter()
                .zip(&eigen[0])
                .map(|(a, l)| (a[(0, 0)] - l).norm() / max_abs(a).max(f64::MIN_POSITIVE))
                .fold(0.0, f64::max);
            return Ok(SpectralProjectors {
                projectors: vec![one],
                vectors: vec![v],
                annihilation: joint,
                trace_defect: 0.0,
                joint_residual: joint,
                separation: f64::INFINITY,
            });
        }

        // Pick the combination whose claimed eigenvalues are best separated.
        let mut best: Option<(f64, Vec<C64>)> = None;
        for attempt in 0..6 {
            let w = combination_weights(ops.len(), attempt);
            let mu: Vec<C64> = eigen.iter().map(|e| e.iter().zip(&w).map(|(l, w)| l * w).sum()).collect();
            let scale = mu.iter().fold(0.0f64, |a, z| a.max(z.norm())).max(f64::MIN_POSITIVE);
            let mut sep = f64::INFINITY;
            for s in 0..dim {
                for t in s + 1..dim {
                    sep = sep.min((mu[s] - mu[t]).norm() / scale);
                }
            }
            if best.as_ref().is_none_or(|(b, _)| sep > *b) {
                best = Some((sep, w));
            }
        }
        let (separation, w) = best.expect("at least one attempt");
        if separation < 1e-12 {
            return Err(CoreError::IllConditioned(format!(
                "claimed eigenvalues coincide (relative separation {separation:.2e})"
            )));
        }
        let a: DMatrix<C64> = ops
            .iter()
            .zip(&w)
            .fold(DMatrix::zeros(dim, dim), |acc, (op, w)| acc + op * *w);
        let mu: Vec<C64> = eigen.iter().map(|e| e.iter().zip(&w).map(|(l, w)| l * w).sum()).collect();
        let id = DMatrix::<C64>::identity(dim, dim);
        let shifted: Vec<DMatrix<C64>> = mu.iter().map(|m| &a - &id * *m).collect();

        let a_scale = max_abs(&a).max(f64::MIN_POSITIVE);
        let mut full = id.clone();
        for f in &shifted {
            full = (full * f) / c64(a_scale, 0.0);
        }
        let annihilation = max_abs(&full);

        let mut projectors = Vec::with_capacity(dim);
        let mut vectors = Vec::with_capacity(dim);
        let mut trace_defect = 0.0f64;
        let mut joint_residual = 0.0f64;
        for s in 0..dim {
            let mut p = id.clone();
            for t in 0..dim {
                if t != s {
                    p = p * &shifted[t] / (mu[s] - mu[t]);
                }
            }
            trace_defect = trace_defect.max((p.trace() - C64::one()).norm());
            let (col, _) = (0..dim)
                .map(|j| (j, p.column(j).norm()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let v: DVector<C64> = p.column(col).into_owned();
            let v = if v.norm() > 0.0 { &v / c64(v.norm(), 0.0) } else { v };
            for (op, l) in ops.iter().zip(&eigen[s]) {
                let r = (op * &v - &v * *l).norm() / max_abs(op).max(f64::MIN_POSITIVE);
                joint_residual = joint_residual.max(r);
            }
            projectors.push(p);
            vectors.push(v);
        }
        Ok(SpectralProjectors {
            projectors,
            vectors,
            annihilation,
            trace_defect,
            joint_residual,
            separation,
        })
    }

    /// `sum_s f(s) P_s`, an operator with prescribed eigenvalues.
    pub fn synthesize(&self, f: impl Fn(usize) -> C64) -> DMatrix<C64> {
        let dim = self.projectors.first().map_or(0, |p| p.nrows());
        self.projectors
            .iter()
            .enumerate()
            .fold(DMatrix::zeros(dim, dim), |acc, (s, p)| acc + p * f(s))
    }
}

/// Largest entry modulus of a matrix.
pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

/// Solves `m x = b` by LU decomposition; `None` when `m` is singular.
pub fn solve(m: &DMatrix<C64>, b: &DVector<C64>) -> Option<DVector<C64>> {
    m.clone().lu().solve(b)
}

/// Relative distance between the lines spanned by two nonzero vectors.
///
/// Zero when the vectors are parallel, one when they are orthogonal.
pub fn projective_distance(u: &DVector<C64>, v: &DVector<C64>) -> f64 {
    let (nu, nv) = (u.norm(), v.norm());
    if nu == 0.0 || nv == 0.0 {
        return 1.0;
    }
    // Sine of the angle from the orthogonal component directly; the
    // `sqrt(1 - cos^2)` form only resolves angles down to about 1e-8.
    let uh = u.unscale(nu);
    let vh = v.unscale(nv);
    let along = uh.dotc(&vh);
    (vh - uh * along).norm().min(1.0)
}

/// Convenience: the zero vector of dimension `dim`.
pub fn zero_vector(dim: usize) -> DVector<C64> {
    DVector::from_element(dim, C64::zero())
}
