//! Drinfeld relations of the quantum loop algebra on the fixed-point space.

use super::{Suite, SuiteContext, SuiteError};
use kxxz_core::{VerificationReport, C64};
use kxxz_uq::{check_drinfeld, DrinfeldOptions};

/// Residual threshold at 53 bits.
pub const ALGEBRA_TOL: f64 = 1e-10;
/// Residual threshold when the exact path runs.
pub const ALGEBRA_TOL_EXACT: f64 = 1e-30;

/// Every relation with generator indices up to 2 in absolute value.
pub struct AlgebraSuite;

impl Suite for AlgebraSuite {
    fn name(&self) -> &'static str {
        "algebra"
    }

    fn summary(&self) -> &'static str {
        "Drinfeld relations of E_r, F_r, H_m and K"
    }

    fn default_z(&self) -> Vec<C64> {
        Vec::new()
    }

    fn run(&self, ctx: &SuiteContext, _z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let opts = DrinfeldOptions {
            range: 2,
            tol: if ctx.params.precision_bits() > 53 { ALGEBRA_TOL_EXACT } else { ALGEBRA_TOL },
            wrong_k_sign: ctx.sabotage.sign,
        };
        check_drinfeld(&ctx.params, &opts).map_err(SuiteError::failed)
    }
}
