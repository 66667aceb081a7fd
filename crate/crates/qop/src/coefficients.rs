//! Scalar coefficients of the universal formulas and the normalization series.
//!
//! With `sh = hbar^{1/2}` and `K = sh^{n-2k}` on sector `k`,
//!
//! ```text
//! a_m(z) = (hbar - 1)^m sh^{m^2} K^m / ((m)_hbar! prod_{i=1}^m (1 - (-1)^n z^{-1} hbar^i K))
//! ```
//!
//! where `(m)_hbar! = prod_{i=1}^m (1 - hbar^i) / (1 - hbar)`. The Drinfeld
//! basis formula for `Q+` uses the mirror coefficients at the chain anisotropy
//! `hbar_c` and twist `Z`,
//!
//! ```text
//! c_j = (1 - hbar_c^{-1})^j hbar_c^{-j^2/2} K_c^{-j}
//!       / ((j)_{hbar_c^{-1}}! prod_{i=1}^j (1 - hbar_c^{-i} K_c^{-1} Z^{-2}))
//! ```
//!
//! with `K_c = hbar_c^{(n-2k)/2}`.

use crate::QopError;
use kxxz_core::pochhammer::{inverse_q_pochhammer_series, q_pochhammer_series};
use kxxz_core::{c64, ModelParams, PowerSeries, SeriesVar, C64};

/// Smallest allowed `|1 - (-1)^n z^{-1} hbar^i K|`.
pub const RESONANCE_TOL: f64 = 1e-6;

/// Knobs for the universal formula, including deliberate corruptions used as
/// negative controls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FormulaOptions {
    /// Drop the `(-1)^n` in the resonance denominators.
    pub flip_sign: bool,
    /// Factor applied to `a_1`.
    pub a1_factor: C64,
}

impl Default for FormulaOptions {
    fn default() -> Self {
        FormulaOptions {
            flip_sign: false,
            a1_factor: c64(1.0, 0.0),
        }
    }
}

/// The round factorial `(m)_b! = prod_{i=1}^m (1 - b^i) / (1 - b)`.
pub fn round_factorial(m: usize, b: C64) -> C64 {
    let mut acc = c64(1.0, 0.0);
    let mut bi = c64(1.0, 0.0);
    for _ in 0..m {
        bi *= b;
        acc *= (1.0 - bi) / (1.0 - b);
    }
    acc
}

/// `a_m(z)` on sector `k` for the geometric anisotropy `params.hbar()`.
pub fn coeff_a(m: usize, z: C64, params: &ModelParams, k: usize) -> Result<C64, QopError> {
    coeff_a_with(m, z, params, k, &FormulaOptions::default())
}

/// [`coeff_a`] with explicit formula options.
pub fn coeff_a_with(m: usize, z: C64, params: &ModelParams, k: usize, opts: &FormulaOptions) -> Result<C64, QopError> {
    if m == 0 {
        return Ok(c64(1.0, 0.0));
    }
    if z.norm() == 0.0 {
        return Ok(c64(0.0, 0.0));
    }
    let n = params.n();
    let hbar = params.hbar();
    let br = params.branches();
    let kk = br.hbar_half_pow(n as i32 - 2 * k as i32);
    let sign = if (n % 2 == 1) != opts.flip_sign { -1.0 } else { 1.0 };
    let mut den = round_factorial(m, hbar);
    let mut hi = c64(1.0, 0.0);
    for i in 1..=m {
        hi *= hbar;
        let d = 1.0 - sign * hi * kk / z;
        if d.norm() < RESONANCE_TOL {
            return Err(QopError::ResonantZ { m, i, k });
        }
        den *= d;
    }
    let m_i = m as i32;
    let value = (hbar - 1.0).powi(m_i) * br.hbar_half_pow(m_i * m_i) * kk.powi(m_i) / den;
    Ok(if m == 1 { value * opts.a1_factor } else { value })
}

/// `c_j(Z)` on sector `k` for the chain anisotropy `params.hbar()` and twist `Z`.
pub fn coeff_c(j: usize, twist: C64, params: &ModelParams, k: usize) -> Result<C64, QopError> {
    if j == 0 {
        return Ok(c64(1.0, 0.0));
    }
    let n = params.n();
    let hinv = params.hbar().inv();
    let br = params.branches();
    let kc_inv = br.hbar_half_pow(2 * k as i32 - n as i32);
    let z2_inv = (twist * twist).inv();
    let mut den = round_factorial(j, hinv);
    let mut hi = c64(1.0, 0.0);
    for i in 1..=j {
        hi *= hinv;
        let d = 1.0 - hi * kc_inv * z2_inv;
        if d.norm() < RESONANCE_TOL {
            return Err(QopError::ResonantZ { m: j, i, k });
        }
        den *= d;
    }
    let j_i = j as i32;
    Ok((1.0 - hinv).powi(j_i) * br.hbar_half_pow(-j_i * j_i) * kc_inv.powi(j_i) / den)
}

/// One factor `f_a(x) = (a x; hbar^2)_inf / (a x hbar; hbar^2)_inf` through `x^m`.
pub fn normalization_factor(a: C64, hbar: C64, m: usize) -> Result<PowerSeries, QopError> {
    let h2 = hbar * hbar;
    let num = q_pochhammer_series(a, h2, m)?;
    let den = inverse_q_pochhammer_series(a * hbar, h2, m)?;
    Ok(PowerSeries::new(SeriesVar::X, num.mul(&den)?.coeffs().to_vec()))
}

/// `F(x) = prod_i f_{a_i}(x)` through `x^m`, for the chain anisotropy
/// `params.hbar()`.
///
/// It satisfies `F(x / hbar) / F(hbar x) = G(x / hbar) / G(x)` with
/// `G(x) = prod_i (1 - a_i x)`, which is what turns the polynomial TQ relation
/// into its normalized form.
pub fn normalization_f(params: &ModelParams, m: usize) -> Result<PowerSeries, QopError> {
    params.a().iter().try_fold(PowerSeries::one(SeriesVar::X, m), |acc, &a| {
        Ok(acc.mul(&normalization_factor(a, params.hbar(), m)?)?)
    })
}
