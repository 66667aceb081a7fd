//! The action of the quantum affine algebra `U_hbar(sl_2^)` on the
//! equivariant K-theory of the Grassmannians, written in the fixed-point basis,
//! and a suite that checks the Drinfeld relations numerically or exactly.

pub mod drinfeld;
pub mod generators;

pub use drinfeld::{check_drinfeld, check_relations, DrinfeldOptions};
pub use generators::DrinfeldGenerators;

use kxxz_core::{CoreError, GradedOperator, ModelParams, C64};
use thiserror::Error;

/// Errors from generator construction.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum UqError {
    /// `H_0` is not a generator.
    #[error("H_m requires m != 0")]
    ZeroMode,

    /// `a_i - a_j` is too small for the raising and lowering operators.
    #[error("near-singular denominator: a_{i} and a_{j} nearly coincide")]
    NearSingularDenominator { i: usize, j: usize },

    #[error(transparent)]
    Core(#[from] CoreError),
}

/// `K` in double precision.
pub fn op_k(params: &ModelParams) -> GradedOperator<C64> {
    DrinfeldGenerators::new(params).op_k()
}

/// `H_m` in double precision.
pub fn op_h(m: i32, params: &ModelParams) -> Result<GradedOperator<C64>, UqError> {
    DrinfeldGenerators::new(params).op_h(m)
}

/// `E_r` in double precision.
pub fn op_e(r: i32, params: &ModelParams) -> Result<GradedOperator<C64>, UqError> {
    DrinfeldGenerators::new(params).op_e(r)
}

/// `F_r` in double precision.
pub fn op_f(r: i32, params: &ModelParams) -> Result<GradedOperator<C64>, UqError> {
    DrinfeldGenerators::new(params).op_f(r)
}

/// `psi+_0..psi+_M` and `psi-_0..psi-_{-M}` in double precision.
pub fn psi_series(params: &ModelParams, order: usize) -> (Vec<GradedOperator<C64>>, Vec<GradedOperator<C64>>) {
    DrinfeldGenerators::new(params).psi_series(order)
}
