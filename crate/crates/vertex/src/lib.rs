//! Bare vertex functions of the cotangent bundle of the Grassmannian.
//!
//! The vertex with descendant `tau` at a fixed point `p` is a power series in
//! the deformation `z` whose coefficients are finite products of
//! q-brackets. As `q -> 1` each vertex grows like an exponential in
//! `1 / log q`, but the ratio of two vertices with different descendants
//! tends to the value of the descendant at the Bethe roots attached to `p`.
//! This crate evaluates the truncated series and extrapolates that ratio.

pub mod bracket;
pub mod extract;
pub mod series;

pub use bracket::{bracket, bracket_inverse, POLE_TOL};
pub use extract::{
    default_q_sequence, extract_eigenvalue, extract_eigenvalue_with, ratio_trend, Extraction, ExtractionOptions,
    RatioSample, RatioTrend,
};
pub use series::{vertex_coefficient, VertexSeries};

use kxxz_core::CoreError;
use thiserror::Error;

/// Errors raised while building or extrapolating vertex series.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum VertexError {
    /// A q-bracket denominator vanishes within [`POLE_TOL`].
    #[error("pole hit in the q-bracket of {x} at degree {d}")]
    PoleHit { x: String, d: i64 },

    /// The fixed point is not a subset of `{1..n}`.
    #[error("fixed point mask {mask:#b} does not fit {n} sites")]
    InvalidFixedPoint { mask: u32, n: usize },

    /// Too few values of `q` had a truncation tail below the threshold.
    #[error("truncation dominates: {usable} usable q values, smallest relative tail {smallest_tail:e} above {tol:e}")]
    TruncationDominates { usable: usize, smallest_tail: f64, tol: f64 },

    #[error(transparent)]
    Core(#[from] CoreError),
}
