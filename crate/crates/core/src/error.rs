use thiserror::Error;

/// Errors raised by the core plumbing.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum CoreError {
    /// Two equivariant parameters coincide within the genericity tolerance.
    #[error("degenerate parameters: a_{i} and a_{j} coincide within tolerance")]
    DegenerateParameters { i: usize, j: usize },

    /// Input that cannot describe a model at all (wrong lengths, zero hbar, ...).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    /// The base of a q-Pochhammer symbol is too close to a root of unity.
    #[error("q-Pochhammer base degenerate: |1 - b^{index}| below tolerance")]
    BaseDegenerate { index: usize },

    /// Series division or inversion with a vanishing constant term.
    #[error("series has zero constant term")]
    ZeroConstantTerm,

    /// Operands with incompatible shapes, sizes or variables.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// Spectral data too close to degenerate for a stable projection.
    #[error("ill-conditioned spectral data: {0}")]
    IllConditioned(String),

    /// Malformed text on the wire.
    #[error("parse error: {0}")]
    Parse(String),
}
