//! Extraction of Bethe roots from vertex functions as `q -> 1`.
//!
//! Every one-box fixed point is checked: the extrapolated ratio
//! `V^(e_1) / V^(1)` against the saddle-point Bethe root continued from that
//! fixed point, and the boundedness of the ratio while `|V^(1)|` grows.

use super::{solve_cached, tag_z, Suite, SuiteContext, SuiteError};
use kxxz_bethe::{BetheSystem, Convention, StepControl};
use kxxz_core::{c64, FixedPoint, SymmetricFunctionSpec, VerificationReport, C64};
use kxxz_vertex::{extract_eigenvalue_with, ratio_trend, ExtractionOptions, VertexError};

/// Threshold on `|extracted - root|`.
pub const EXTRACT_TOL: f64 = 1e-3;
/// Largest relative variation of the ratio along the trend sequence.
pub const TREND_RATIO_TOL: f64 = 0.1;
/// Smallest growth of `|V^(1)|` along the trend sequence.
pub const TREND_GROWTH: f64 = 10.0;
/// Deformation and degree cutoff of the trend check.
pub const TREND_Z: f64 = 2e-3;
pub const TREND_D_MAX: usize = 80;

/// Vertex-function checks.
pub struct VertexSuite;

impl Suite for VertexSuite {
    fn name(&self) -> &'static str {
        "vertex"
    }

    fn summary(&self) -> &'static str {
        "q -> 1 limit of vertex ratios against Bethe roots"
    }

    fn default_z(&self) -> Vec<C64> {
        vec![c64(0.05, 0.0), c64(-0.05, 0.0), c64(0.03, 0.04)]
    }

    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let p = &ctx.params;
        let tau = SymmetricFunctionSpec::Elementary(1);
        let opts = ExtractionOptions {
            d_max: ctx.d_max,
            ..ExtractionOptions::default()
        };
        let mut report = VerificationReport::default();
        for (j, &zz) in z.iter().enumerate() {
            let mut part = VerificationReport::default();
            let set = solve_cached(ctx, &BetheSystem::new(p, 1, Convention::Saddle, zz)?, &StepControl::default())?;
            for sol in &set.solutions {
                let fp = FixedPoint::new(sol.origin);
                let residual = match extract_eigenvalue_with(fp, &tau, zz, p, &opts) {
                    Ok(e) => (e.value - sol.roots[0]).norm(),
                    Err(VertexError::TruncationDominates { .. }) => f64::INFINITY,
                    Err(e) => return Err(SuiteError::failed(e)),
                };
                part.push(format!("vertex.extract.p{}", sol.origin), "q -> 1 ratio equals the Bethe root", residual, EXTRACT_TOL);
            }
            tag_z(&mut part, j);
            report.merge(part);
        }
        let qs = [c64(1.0 - 1e-2, 0.0), c64(1.0 - 1e-3, 0.0), c64(1.0 - 1e-4, 0.0)];
        for i in 0..p.n() {
            let mask = 1u32 << i;
            let t = ratio_trend(FixedPoint::new(mask), &tau, c64(TREND_Z, 0.0), &qs, TREND_D_MAX, p).map_err(SuiteError::failed)?;
            let converged = t.samples.iter().all(|s| s.tail < 1e-12);
            report.push_flag(format!("vertex.trend.converged.p{mask}"), "trend series converged", converged);
            report.push(format!("vertex.trend.ratio.p{mask}"), "ratio stays bounded as q -> 1", t.ratio_variation, TREND_RATIO_TOL);
            report.push_lower(format!("vertex.trend.growth.p{mask}"), "|V^(1)| grows as q -> 1", t.v_one_spread, TREND_GROWTH);
        }
        Ok(report)
    }
}
