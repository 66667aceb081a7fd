//! Algebraic Bethe ansatz vectors and their transfer-matrix eigenvalues.
//!
//! On the plus side, roots `s_1..s_k` give `B(v_1) ... B(v_k) Omega+` with
//! `v_i = s_i^{1/2}` and `Omega+` the all-up vector; it lies in sector `k`.
//! On the minus side, `m` roots give `C(v_1) ... C(v_m) Omega-` with `Omega-`
//! the all-down vector; it lies in sector `n - m`.
//!
//! With `x = u^{-2}`, `G(x) = prod_i (1 - a_i x)` and `Q(x) = prod_j (1 - s_j x)`,
//! the plus-side eigenvalue of the polynomial-gauge trace is
//!
//! ```text
//! Z sh^{n-k} G(x/hbar) Q(hbar x)/Q(x) + Z^{-1} sh^{k} G(x) Q(x/hbar)/Q(x)
//! ```
//!
//! and the spectral-gauge eigenvalue is that times `prod_i u / xi_i`. The
//! minus side is the same formula with `Z` replaced by `Z^{-1}`.

use crate::monodromy::{Entry, Monodromy};
use crate::ChainError;
use kxxz_core::{c64, ModelParams, C64};
use nalgebra::DVector;

/// Relative tolerance for root admissibility.
pub const ADMISSIBILITY_TOL: f64 = 1e-8;

/// Which reference state the creation operators act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `B`-chain on the all-up vector.
    Plus,
    /// `C`-chain on the all-down vector.
    Minus,
}

/// A Bethe vector together with the data it was built from.
#[derive(Clone, Debug)]
pub struct BetheVector {
    pub roots: Vec<C64>,
    /// Principal square roots `v_i = s_i^{1/2}` used as spectral parameters.
    pub spectral: Vec<C64>,
    pub side: Side,
    /// Sector (number of down spins) the vector lies in.
    pub sector: usize,
    /// Unit-norm vector in the spin basis, indexed by mask.
    pub vector: DVector<C64>,
    /// Norm of the raw product before normalization.
    pub raw_norm: f64,
}

/// Rejects zero roots, coincident roots and pairs with `s_i = hbar^{+-1} s_j`.
pub fn check_admissible(roots: &[C64], hbar: C64) -> Result<(), ChainError> {
    for (i, s) in roots.iter().enumerate() {
        if s.norm() == 0.0 || !s.is_finite() {
            return Err(ChainError::InadmissibleRoots { i, j: i });
        }
        for (j, t) in roots.iter().enumerate().skip(i + 1) {
            let scale = s.norm().max(t.norm());
            let bad = (s - t).norm() < ADMISSIBILITY_TOL * scale
                || (s - hbar * t).norm() < ADMISSIBILITY_TOL * scale.max((hbar * t).norm())
                || (t - hbar * s).norm() < ADMISSIBILITY_TOL * scale.max((hbar * s).norm());
            if bad {
                return Err(ChainError::InadmissibleRoots { i, j });
            }
        }
    }
    Ok(())
}

/// Builds the Bethe vector in the spectral gauge.
pub fn bethe_vector(roots: &[C64], twist: C64, params: &ModelParams, side: Side) -> Result<BetheVector, ChainError> {
    check_admissible(roots, params.hbar())?;
    let n = params.n();
    let dim = 1usize << n;
    let mut v = DVector::from_element(dim, C64::new(0.0, 0.0));
    let (start, entry, sector) = match side {
        Side::Plus => (0, Entry::B, roots.len()),
        Side::Minus => (dim - 1, Entry::C, n.checked_sub(roots.len()).ok_or(ChainError::TooManyRoots)?),
    };
    if roots.len() > n {
        return Err(ChainError::TooManyRoots);
    }
    v[start] = c64(1.0, 0.0);
    let spectral: Vec<C64> = roots.iter().map(|s| s.sqrt()).collect();
    for &u in &spectral {
        v = Monodromy::spectral(u, twist, params)?.apply(entry, &v);
    }
    let raw_norm = v.norm();
    if raw_norm == 0.0 || !raw_norm.is_finite() {
        return Err(ChainError::VanishingVector);
    }
    Ok(BetheVector {
        roots: roots.to_vec(),
        spectral,
        side,
        sector,
        vector: v / c64(raw_norm, 0.0),
        raw_norm,
    })
}

/// `G(x) = prod_i (1 - a_i x)`.
pub fn g_poly(x: C64, params: &ModelParams) -> C64 {
    params.a().iter().fold(c64(1.0, 0.0), |acc, a| acc * (c64(1.0, 0.0) - a * x))
}

/// `Q(x) = prod_j (1 - s_j x)`.
pub fn q_poly(x: C64, roots: &[C64]) -> C64 {
    roots.iter().fold(c64(1.0, 0.0), |acc, s| acc * (c64(1.0, 0.0) - s * x))
}

/// Eigenvalue of the polynomial-gauge trace at `x`.
pub fn polynomial_eigenvalue(x: C64, roots: &[C64], twist: C64, params: &ModelParams, side: Side) -> Result<C64, ChainError> {
    let q = q_poly(x, roots);
    let scale = roots.iter().fold(1.0f64, |m, s| m.max((s * x).norm()));
    if q.norm() < 1e-13 * scale.powi(roots.len() as i32) {
        return Err(ChainError::PoleAtSpectralParameter);
    }
    let z = match side {
        Side::Plus => twist,
        Side::Minus => twist.inv(),
    };
    let hbar = params.hbar();
    let br = params.branches();
    let n = params.n() as i32;
    let m = roots.len() as i32;
    Ok(z * br.hbar_half_pow(n - m) * g_poly(x / hbar, params) * q_poly(hbar * x, roots) / q
        + z.inv() * br.hbar_half_pow(m) * g_poly(x, params) * q_poly(x / hbar, roots) / q)
}

/// Eigenvalue `Lambda(u)` of the spectral-gauge `tr T(u)` on a plus-side vector.
pub fn transfer_eigenvalue(u: C64, roots: &[C64], twist: C64, params: &ModelParams) -> Result<C64, ChainError> {
    transfer_eigenvalue_on(u, roots, twist, params, Side::Plus)
}

/// Eigenvalue of `tr T(u)` on a Bethe vector of either side.
pub fn transfer_eigenvalue_on(u: C64, roots: &[C64], twist: C64, params: &ModelParams, side: Side) -> Result<C64, ChainError> {
    if u.norm() == 0.0 {
        return Err(ChainError::ZeroSpectralParameter);
    }
    let prefactor = params.branches().sqrt_a.iter().fold(c64(1.0, 0.0), |acc, xi| acc * u / xi);
    Ok(prefactor * polynomial_eigenvalue((u * u).inv(), roots, twist, params, side)?)
}

/// Relative eigen-residual `||tr T(u) v - Lambda v|| / (||v|| max(1, |Lambda|))`.
pub fn eigen_residual(u: C64, bv: &BetheVector, twist: C64, params: &ModelParams) -> Result<f64, ChainError> {
    let lambda = transfer_eigenvalue_on(u, &bv.roots, twist, params, bv.side)?;
    let tv = Monodromy::spectral(u, twist, params)?.apply_transfer(&bv.vector);
    Ok((tv - &bv.vector * lambda).norm() / (bv.vector.norm() * lambda.norm().max(1.0)))
}
