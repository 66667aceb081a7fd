//! Commuting transfer matrices, the Bethe ansatz eigenvalue theorem and
//! completeness of the Bethe vectors.
//!
//! Deformations are squared twists `Z^2`; the roots solve the algebraic
//! Bethe ansatz equations at the chain anisotropy `params.hbar()`.

use super::{solve_cached, tag_z, Suite, SuiteContext, SuiteError};
use kxxz_bethe::{BetheSystem, Convention, StepControl};
use kxxz_chain::{bethe_vector, eigen_residual, transfer, Side};
use kxxz_core::linalg::gram_rank;
use kxxz_core::{binomial, c64, VerificationReport, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Commutator threshold relative to the larger transfer matrix.
pub const COMMUTE_TOL: f64 = 1e-11;
/// Relative eigen-residual threshold.
pub const EIGEN_TOL: f64 = 1e-8;
/// Singular-value threshold for the Gram rank.
pub const RANK_TOL: f64 = 1e-8;

/// Transfer-matrix checks.
pub struct TransferSuite;

fn random_point(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))
}

impl Suite for TransferSuite {
    fn name(&self) -> &'static str {
        "transfer"
    }

    fn summary(&self) -> &'static str {
        "commuting transfer matrices, eigenvalue theorem and completeness"
    }

    fn default_z(&self) -> Vec<C64> {
        vec![c64(0.1, 0.0), c64(0.3, 0.0)]
    }

    fn run(&self, ctx: &SuiteContext, z: &[C64]) -> Result<VerificationReport, SuiteError> {
        let p = &ctx.params;
        let n = p.n();
        let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
        let mut report = VerificationReport::default();

        let twist = z.first().map_or(c64(0.8, 0.35), |z| z.sqrt());
        for pair in 0..10 {
            let (u1, u2) = (random_point(&mut rng), random_point(&mut rng));
            let t1 = transfer(u1, twist, p).map_err(SuiteError::failed)?;
            let t2 = transfer(u2, twist, p).map_err(SuiteError::failed)?;
            let scale = t1.max_abs().max(t2.max_abs()).max(f64::MIN_POSITIVE);
            let comm = t1.commutator(&t2).map_err(SuiteError::failed)?.max_abs();
            report.push(format!("transfer.commute.pair{pair}"), "[tr T(u1), tr T(u2)] = 0", comm / scale, COMMUTE_TOL);
        }

        let ctl = StepControl::default();
        for (j, &zz) in z.iter().enumerate() {
            let twist = zz.sqrt();
            let probes: Vec<C64> = (0..3).map(|_| random_point(&mut rng)).collect();
            let mut part = VerificationReport::default();
            for k in 0..=n {
                let system = BetheSystem::new(p, k, Convention::Aba, zz)?;
                let set = solve_cached(ctx, &system, &ctl)?;
                let expected = binomial(n, k);
                part.push_flag(format!("transfer.count.k{k}"), "one solution per fixed point", set.solutions.len() == expected);
                let mut worst = 0.0f64;
                let mut vectors = Vec::new();
                for s in &set.solutions {
                    let bv = bethe_vector(&s.roots, twist, p, Side::Plus).map_err(SuiteError::failed)?;
                    for &u in &probes {
                        worst = worst.max(eigen_residual(u, &bv, twist, p).map_err(SuiteError::failed)?);
                    }
                    vectors.push(bv.vector);
                }
                part.push(format!("transfer.eigen.k{k}"), "Bethe vectors are eigenvectors of tr T(u)", worst, EIGEN_TOL);
                let rank = gram_rank(&vectors, RANK_TOL).map_err(SuiteError::failed)?;
                part.push_lower(format!("transfer.gram.k{k}"), "Bethe vectors span the sector", rank as f64, expected as f64);
            }
            tag_z(&mut part, j);
            report.merge(part);
        }
        Ok(report)
    }
}
