//! The q-bracket
//!
//! ```text
//! {x}_d = (hbar/x; q)_d / (q/x; q)_d * (-q^{1/2} hbar^{-1/2})^d
//! ```
//!
//! for any integer `d`, with `(y; q)_d = 1 / prod_{i=1}^{-d} (1 - y q^{-i})`
//! when `d < 0`.

use crate::VertexError;
use kxxz_core::{c64, ModelParams, C64};

/// Smallest allowed modulus of a factor that ends up in a denominator.
pub const POLE_TOL: f64 = 1e-12;

/// Factors of `(y; q)_d` for `d >= 0`, or of its reciprocal for `d < 0`.
fn factors(y: C64, q: C64, d: i64) -> impl Iterator<Item = C64> {
    let (start, step) = if d >= 0 { (y, q) } else { (y / q, q.inv()) };
    (0..d.unsigned_abs()).scan(start, move |acc, _| {
        let f = 1.0 - *acc;
        *acc *= step;
        Some(f)
    })
}

/// `{x}_d`, or its reciprocal when `invert` is set, with every denominator
/// factor checked.
///
/// The value is accumulated as a product of factor ratios, since the
/// numerator and denominator products separately leave the `f64` range long
/// before their ratio does when `q` is close to 1.
fn bracket_pow(x: C64, d: i64, params: &ModelParams, invert: bool) -> Result<C64, VertexError> {
    let q = params.q();
    let top = params.hbar() / x;
    let bottom = q / x;
    // For d >= 0 the ratio is P(top) / P(bottom); for d < 0 the products are
    // reciprocals, so the roles swap. Inverting the bracket swaps them again.
    let (num_y, den_y) = if (d >= 0) != invert { (top, bottom) } else { (bottom, top) };
    let br = params.branches();
    let unit = -br.q_half_pow(1) * br.hbar_half_pow(-1);
    let unit = if (d >= 0) != invert { unit } else { unit.inv() };
    factors(num_y, q, d)
        .zip(factors(den_y, q, d))
        .try_fold(c64(1.0, 0.0), |acc, (num, den)| {
            if den.norm() < POLE_TOL {
                Err(VertexError::PoleHit { x: x.to_string(), d })
            } else {
                Ok(acc * (num * unit / den))
            }
        })
}

/// The q-bracket `{x}_d` at the parameters' `q` and `hbar`.
pub fn bracket(x: C64, d: i64, params: &ModelParams) -> Result<C64, VertexError> {
    bracket_pow(x, d, params, false)
}

/// `1 / {x}_d`, with the numerator factors of the bracket checked for zeros.
pub fn bracket_inverse(x: C64, d: i64, params: &ModelParams) -> Result<C64, VertexError> {
    bracket_pow(x, d, params, true)
}
