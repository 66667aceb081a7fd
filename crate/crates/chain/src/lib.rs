//! The inhomogeneous XXZ spin chain with diagonal twist: L-operators, the
//! monodromy matrix and its entries, transfer matrices, and Bethe vectors built
//! by the algebraic Bethe ansatz.

pub mod bethe_vector;
pub mod monodromy;

pub use bethe_vector::{
    bethe_vector, check_admissible, eigen_residual, g_poly, polynomial_eigenvalue, q_poly, transfer_eigenvalue,
    transfer_eigenvalue_on, BetheVector, Side,
};
pub use monodromy::{alpha, build_monodromy, delta, transfer, transfer_polynomial, Entry, Monodromy};

use thiserror::Error;

/// Errors from chain constructions.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum ChainError {
    /// The spectral-gauge L-operator needs `u != 0`.
    #[error("spectral parameter must be nonzero")]
    ZeroSpectralParameter,

    /// The twist must be nonzero.
    #[error("twist must be nonzero")]
    ZeroTwist,

    /// `u^2` coincides with a root, where the eigenvalue formula has a pole.
    #[error("spectral parameter sits on a pole of the eigenvalue (u^2 = s_i)")]
    PoleAtSpectralParameter,

    /// Roots `i` and `j` are equal, zero, or related by a factor `hbar^{+-1}`.
    #[error("inadmissible roots: s_{i} and s_{j}")]
    InadmissibleRoots { i: usize, j: usize },

    /// More roots than sites.
    #[error("more roots than sites")]
    TooManyRoots,

    /// The creation operators annihilated the reference vector.
    #[error("Bethe vector vanishes")]
    VanishingVector,
}
