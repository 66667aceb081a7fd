//! Extraction of quantum eigenvalues from vertex ratios as `q -> 1`.
//!
//! For each `q` in a sequence approaching 1 the ratio
//! `V_p^(tau)(z) / V_p^(1)(z)` is evaluated from truncated series. Values of
//! `q` whose truncation tail is above a threshold are discarded; the usable
//! ratios closest to `q = 1` are fitted by a polynomial in `1 - q` and the fit
//! is evaluated at `q = 1`.

use crate::series::vertex_coefficient;
use crate::VertexError;
use kxxz_core::{c64, FixedPoint, ModelParams, SymmetricFunctionSpec, C64};

/// The default sequence `q = 1 - 2^{-j}, 1 + 2^{-j}` for `j = 2..=10`.
///
/// Points on both sides of `q = 1` turn the fit into an interpolation. With
/// `d_max = 14` only `|1 - q| >= 2^{-5}` or so survives the tail filter at
/// `|z| = 0.05`, so the sequence starts well away from 1.
pub fn default_q_sequence() -> Vec<C64> {
    (2..=10)
        .flat_map(|j| {
            let e = 0.5f64.powi(j);
            [c64(1.0 - e, 0.0), c64(1.0 + e, 0.0)]
        })
        .collect()
}

/// Knobs for [`extract_eigenvalue_with`].
#[derive(Clone, Debug)]
pub struct ExtractionOptions {
    pub q_sequence: Vec<C64>,
    pub d_max: usize,
    /// Largest relative truncation tail for a `q` to be used.
    pub tail_tol: f64,
    /// Number of points in the extrapolating fit; the degree is one less.
    pub fit_points: usize,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        ExtractionOptions {
            q_sequence: default_q_sequence(),
            d_max: 14,
            tail_tol: 1e-8,
            fit_points: 3,
        }
    }
}

/// The ratio at one value of `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioSample {
    pub q: C64,
    pub ratio: C64,
    /// `|V_p^(1)(z)|`, whose growth as `q -> 1` the ratio cancels.
    pub v_one_abs: f64,
    /// Largest relative truncation tail of the two series.
    pub tail: f64,
}

/// Result of an extraction, with the data it was computed from.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction {
    pub value: C64,
    /// Largest difference between the fit and the fits with one point fewer
    /// and one point more (when a further usable point exists).
    pub error_estimate: f64,
    pub samples: Vec<RatioSample>,
    /// Indices into `samples` used by the fit, closest to `q = 1` first.
    pub used: Vec<usize>,
}

/// Evaluates at `q = 1` the polynomial in `1 - q` through the given points.
fn extrapolate(points: &[(C64, C64)]) -> C64 {
    let mut total = c64(0.0, 0.0);
    for (i, &(ei, ri)) in points.iter().enumerate() {
        let mut w = c64(1.0, 0.0);
        for (j, &(ej, _)) in points.iter().enumerate() {
            if i != j {
                w *= -ej / (ei - ej);
            }
        }
        total += w * ri;
    }
    total
}

/// Ratio samples for every `q` in the sequence.
fn samples(
    p: FixedPoint,
    tau: &SymmetricFunctionSpec,
    z: C64,
    qs: &[C64],
    d_max: usize,
    params: &ModelParams,
) -> Result<Vec<RatioSample>, VertexError> {
    let one = SymmetricFunctionSpec::Elementary(0);
    qs.iter()
        .map(|&q| {
            let at_q = params.with_q(q);
            let num = vertex_coefficient(p, tau, d_max, &at_q)?;
            let den = vertex_coefficient(p, &one, d_max, &at_q)?;
            let v_one = den.eval(z);
            Ok(RatioSample {
                q,
                ratio: num.eval(z) / v_one,
                v_one_abs: v_one.norm(),
                tail: num.relative_tail(z).max(den.relative_tail(z)),
            })
        })
        .collect()
}

/// `lim_{q -> 1} V_p^(tau)(z) / V_p^(1)(z)` with the default options.
pub fn extract_eigenvalue(
    p: FixedPoint,
    tau: &SymmetricFunctionSpec,
    z: C64,
    params: &ModelParams,
) -> Result<Extraction, VertexError> {
    extract_eigenvalue_with(p, tau, z, params, &ExtractionOptions::default())
}

/// [`extract_eigenvalue`] with explicit options.
pub fn extract_eigenvalue_with(
    p: FixedPoint,
    tau: &SymmetricFunctionSpec,
    z: C64,
    params: &ModelParams,
    opts: &ExtractionOptions,
) -> Result<Extraction, VertexError> {
    let samples = samples(p, tau, z, &opts.q_sequence, opts.d_max, params)?;
    if z.norm() == 0.0 {
        // Only the degree-zero term survives and the ratio is exact.
        let x: Vec<C64> = p.members().iter().map(|&i| params.a()[i]).collect();
        return Ok(Extraction {
            value: tau.eval(&x),
            error_estimate: 0.0,
            samples,
            used: Vec::new(),
        });
    }
    let mut usable: Vec<usize> = (0..samples.len()).filter(|&i| samples[i].tail <= opts.tail_tol).collect();
    usable.sort_by(|&i, &j| (1.0 - samples[i].q).norm().total_cmp(&(1.0 - samples[j].q).norm()));
    let m = opts.fit_points.max(1);
    if usable.len() < m {
        let smallest_tail = samples.iter().map(|s| s.tail).fold(f64::INFINITY, f64::min);
        return Err(VertexError::TruncationDominates {
            usable: usable.len(),
            smallest_tail,
            tol: opts.tail_tol,
        });
    }
    let point = |i: usize| (1.0 - samples[i].q, samples[i].ratio);
    let fit = |count: usize| extrapolate(&usable[..count].iter().map(|&i| point(i)).collect::<Vec<_>>());
    let value = fit(m);
    let lower = if m > 1 { (value - fit(m - 1)).norm() } else { 0.0 };
    let higher = if usable.len() > m { (value - fit(m + 1)).norm() } else { 0.0 };
    Ok(Extraction {
        value,
        error_estimate: lower.max(higher),
        samples,
        used: usable[..m].to_vec(),
    })
}

/// How the ratio and `|V_p^(1)|` change along a sequence of `q`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioTrend {
    pub samples: Vec<RatioSample>,
    /// `max_{i,j} |r_i - r_j| / max_i |r_i|`.
    pub ratio_variation: f64,
    /// `max_i |V^(1)_i| / min_i |V^(1)_i|`.
    pub v_one_spread: f64,
}

/// Ratio boundedness data along `qs`.
pub fn ratio_trend(
    p: FixedPoint,
    tau: &SymmetricFunctionSpec,
    z: C64,
    qs: &[C64],
    d_max: usize,
    params: &ModelParams,
) -> Result<RatioTrend, VertexError> {
    let samples = samples(p, tau, z, qs, d_max, params)?;
    let scale = samples.iter().map(|s| s.ratio.norm()).fold(0.0, f64::max);
    let mut spread = 0.0f64;
    for a in &samples {
        for b in &samples {
            spread = spread.max((a.ratio - b.ratio).norm());
        }
    }
    let (lo, hi) = samples
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.v_one_abs), hi.max(s.v_one_abs)));
    Ok(RatioTrend {
        samples,
        ratio_variation: spread / scale,
        v_one_spread: hi / lo,
    })
}
