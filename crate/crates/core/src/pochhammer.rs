//! q-Pochhammer symbols as power series.
//!
//! `(c t; b)_inf = prod_{i>=0} (1 - c b^i t)` has the finite closed form
//! coefficients
//!
//! ```text
//! [t^m] (c t; b)_inf     = (-1)^m b^{m(m-1)/2} c^m / ((1-b)(1-b^2)...(1-b^m))
//! [t^m] 1/(c t; b)_inf   = c^m / ((1-b)(1-b^2)...(1-b^m))
//! ```
//!
//! Coefficients are computed from these expansions, never from a truncated
//! product, so each one is accurate to working precision.

use crate::error::CoreError;
use crate::scalar::C64;
use crate::series::{PowerSeries, SeriesVar};
use num_traits::One;

/// Relative distance from a root of unity below which the base is refused.
pub const BASE_TOL: f64 = 1e-12;

fn b_factorials(b: C64, m: usize) -> Result<Vec<C64>, CoreError> {
    let mut out = Vec::with_capacity(m + 1);
    out.push(C64::one());
    let mut bi = C64::one();
    for i in 1..=m {
        bi *= b;
        let f = C64::one() - bi;
        if f.norm() <= BASE_TOL {
            return Err(CoreError::BaseDegenerate { index: i });
        }
        out.push(out[i - 1] * f);
    }
    Ok(out)
}

/// Series in `t` of `(c t; b)_inf` through order `m`.
pub fn q_pochhammer_series(c: C64, b: C64, m: usize) -> Result<PowerSeries, CoreError> {
    let fact = b_factorials(b, m)?;
    let mut coeffs = Vec::with_capacity(m + 1);
    let mut cm = C64::one();
    let mut b_tri = C64::one();
    let mut bj = C64::one();
    for (j, f) in fact.iter().enumerate() {
        if j > 0 {
            cm *= c;
            b_tri *= bj;
            bj *= b;
        }
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        coeffs.push(cm * b_tri * sign / f);
    }
    Ok(PowerSeries::new(SeriesVar::T, coeffs))
}

/// Series in `t` of `1/(c t; b)_inf` through order `m`.
pub fn inverse_q_pochhammer_series(c: C64, b: C64, m: usize) -> Result<PowerSeries, CoreError> {
    let fact = b_factorials(b, m)?;
    let mut cm = C64::one();
    let coeffs = fact
        .iter()
        .enumerate()
        .map(|(j, f)| {
            if j > 0 {
                cm *= c;
            }
            cm / f
        })
        .collect();
    Ok(PowerSeries::new(SeriesVar::T, coeffs))
}

/// Finite product `(x; q)_d` for any integer `d`.
///
/// For `d < 0` this is `1 / prod_{i=1}^{-d} (1 - x q^{-i})`.
pub fn finite_pochhammer(x: C64, q: C64, d: i64) -> C64 {
    if d >= 0 {
        let mut acc = C64::one();
        let mut qi = C64::one();
        for _ in 0..d {
            acc *= C64::one() - x * qi;
            qi *= q;
        }
        acc
    } else {
        let qinv = q.inv();
        let mut acc = C64::one();
        let mut qi = qinv;
        for _ in 0..(-d) {
            acc *= C64::one() - x * qi;
            qi *= qinv;
        }
        acc.inv()
    }
}
