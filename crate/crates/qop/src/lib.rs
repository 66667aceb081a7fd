//! Baxter Q-operators and quantum tautological classes of the K-theoretic
//! XXZ chain, with suites that check the eigenvalue theorem, the quantum
//! Wronskian and the TQ relations.

pub mod classes;
pub mod coefficients;
pub mod identities;
pub mod qseries;

pub use classes::{
    classical_exterior, quantum_exterior, quantum_exterior_with, quantum_line_bundle, quantum_line_bundle_with,
    ClassLabel, Provenance, QuantumClassOperator,
};
pub use coefficients::{
    coeff_a, coeff_a_with, coeff_c, normalization_f, normalization_factor, round_factorial, FormulaOptions,
    RESONANCE_TOL,
};
pub use identities::{
    check_classical_limit, check_quantum_eigenvalues, check_tq, check_tq_with, check_wronskian, check_wronskian_with,
    identify_q_with_exterior, SuiteOptions,
};
pub use qseries::{
    chain_spectrum, q_coefficients, q_minus_series, q_plus_series, spin_q_series, synthesize_minus, Basis,
    MinusSynthesis, Normalization, QOperatorSeries, SectorSpectrum, SpinQ,
};

use kxxz_bethe::BetheError;
use kxxz_chain::ChainError;
use kxxz_core::CoreError;
use kxxz_uq::UqError;
use thiserror::Error;

/// Errors from building Q-operators and quantum classes.
#[derive(Debug, Error)]
pub enum QopError {
    /// A denominator `1 - (-1)^n z^{-1} hbar^i K` (or its mirror) is too small.
    #[error("z is resonant: factor i = {i} of coefficient m = {m} vanishes on sector {k}")]
    ResonantZ { m: usize, i: usize, k: usize },
    #[error("could not pair plus and minus Bethe roots on sector {k}")]
    PairingFailed { k: usize },
    #[error("Bethe vectors of sector {k} are linearly dependent")]
    SingularEigenbasis { k: usize },
    #[error("Q+ series is shorter than the sector size")]
    SeriesTooShort,
    #[error(transparent)]
    Bethe(#[from] BetheError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Uq(#[from] UqError),
    #[error(transparent)]
    Core(#[from] CoreError),
}
