//! Quantum tautological classes, Q-operators, the quantum Wronskian and the
//! TQ relations.
//!
//! The qop suite reads deformations as the quantum K-theory parameter `z`;
//! the Wronskian and TQ suites read them as squared twists `Z^2`.

use super::{tag_z, Suite, SuiteContext, SuiteError};
use kxxz_core::{c64, VerificationReport, C64};
use kxxz_qop::{
    check_classical_limit, check_quantum_eigenvalues, check_tq, check_wronskian, identify_q_with_exterior,
    FormulaOptions, SuiteOptions,
};

/// Deformation of the classical-limit check.
pub const CLASSICAL_Z: f64 = 1e-6;
/// Threshold of the classical-limit check.
pub const CLASSICAL_TOL: f64 = 1e-4;
/// Largest order in `x` of the identification of `Q+` with the exterior
/// series.
pub const IDENTIFY_ORDER: usize = 4;

fn suite_options(ctx: &SuiteContext) -> SuiteOptions {
    SuiteOptions {
        formula: FormulaOptions {
            flip_sign: ctx.sabotage.sign,
            a1_factor: if ctx.sabotage.am { c64(1.0 + 1e-3, 0.0) } else { c64(1.0, 0.0) },
        },
        wrong_branch: ctx.sabotage.branch,
        ..SuiteOptions::default()
    }
}

/// Spectral-parameter probes of the TQ suite.
fn tq_grid() -> [C64; 3] {
    [c64(0.7, 0.4), c64(-1.1, 0.3), c64(0.5, -0.9)]
}

/// Eigenvalue theorem, classical limit and identification with `Q+`.
pub struct QopSuite;

impl Suite for QopSuite {
    fn name(&self) -> &'static str {
        "qop"
    }

    fn summary(&self) -> &'static str {
        "quantum exterior powers: eigenvalues, classical limit, line bundle, Q+ identification"
    }

    fn default_z(&self) -> Vec<C64> {
        vec![c64(0.1, 0.0), c64(0.25, 0.0)]
    }

    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let opts = suite_options(ctx);
        let p = &ctx.params;
        let mut report = check_classical_limit(c64(CLASSICAL_Z, 0.0), p, &opts, CLASSICAL_TOL).map_err(SuiteError::failed)?;
        for (j, &zz) in z.iter().enumerate() {
            let mut part = check_quantum_eigenvalues(zz, p, &opts).map_err(SuiteError::failed)?;
            part.merge(identify_q_with_exterior(zz, IDENTIFY_ORDER.min(ctx.m), p, &opts).map_err(SuiteError::failed)?);
            tag_z(&mut part, j);
            report.merge(part);
        }
        Ok(report)
    }
}

/// The quantum Wronskian in the fixed-point and spin bases.
pub struct WronskianSuite;

impl Suite for WronskianSuite {
    fn name(&self) -> &'static str {
        "wronskian"
    }

    fn summary(&self) -> &'static str {
        "quantum Wronskian of Q+ and Q-"
    }

    fn default_z(&self) -> Vec<C64> {
        vec![c64(0.1, 0.0), c64(0.25, 0.0)]
    }

    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let opts = suite_options(ctx);
        let mut report = VerificationReport::default();
        for (j, &zz) in z.iter().enumerate() {
            let mut part = check_wronskian(zz.sqrt(), ctx.m, &ctx.params, &opts).map_err(SuiteError::failed)?;
            tag_z(&mut part, j);
            report.merge(part);
        }
        Ok(report)
    }
}

/// Scalar, operator and normalized TQ relations.
pub struct TqSuite;

impl Suite for TqSuite {
    fn name(&self) -> &'static str {
        "tq"
    }

    fn summary(&self) -> &'static str {
        "TQ relations for Q+ and Q-, raw and normalized"
    }

    fn default_z(&self) -> Vec<C64> {
        vec![c64(0.1, 0.0), c64(0.25, 0.0)]
    }

    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let opts = suite_options(ctx);
        let mut report = VerificationReport::default();
        for (j, &zz) in z.iter().enumerate() {
            let mut part = check_tq(zz.sqrt(), &tq_grid(), ctx.m, &ctx.params, &opts).map_err(SuiteError::failed)?;
            tag_z(&mut part, j);
            report.merge(part);
        }
        Ok(report)
    }
}
