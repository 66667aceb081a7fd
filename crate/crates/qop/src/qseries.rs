//! Baxter Q-operators as operator series in `x`.
//!
//! `Q+` comes from the Drinfeld-basis formula
//!
//! ```text
//! W^Z_m = sum_{j=0}^{m} c_j(Z) F_0^j W_{m-j} E_{-1}^j
//! ```
//!
//! with generators of the fixed-point module at `1/hbar_c` and `W_m` diagonal
//! with eigenvalue `[x^m] prod_{i in p} (1 - a_i x)`. Its eigenvalues are
//! `prod (1 - x s_i)` over the Bethe roots of the chain with twist `Z`.
//!
//! `Q-` has eigenvalue `prod (1 - x t_j)`, where the `t_j` are the roots of the
//! same eigenvector seen from the all-down reference state (twist `Z^{-1}`,
//! `n - k` roots). It is assembled by spectral synthesis from the projectors
//! of `Q+`. In the spin basis both are synthesized from explicit `B`- and
//! `C`-chain Bethe vectors.

use crate::classes::classical_exterior;
use crate::coefficients::coeff_c;
use crate::QopError;
use kxxz_bethe::{solve_all, BetheSystem, Convention, StepControl};
use kxxz_chain::{bethe_vector, polynomial_eigenvalue, Side};
use kxxz_core::linalg::{projective_distance, SpectralProjectors};
use kxxz_core::symmetric::elementary_all;
use kxxz_core::{c64, binomial, GradedOperator, ModelParams, OperatorSeries, SectorTable, SeriesVar, C64};
use kxxz_uq::DrinfeldGenerators;
use nalgebra::DMatrix;
use rayon::prelude::*;

/// Whether a series is raw or divided by the normalization `F(x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Normalization {
    Raw,
    FNormalized,
}

/// Basis the operator coefficients are written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    FixedPoint,
    Spin,
}

/// A Q-operator as a truncated series in `x`.
#[derive(Clone, Debug)]
pub struct QOperatorSeries {
    pub side: Side,
    /// Chain twist `Z`.
    pub twist: C64,
    pub basis: Basis,
    pub normalization: Normalization,
    pub series: OperatorSeries,
}

/// `[x^j] prod (1 - x r_i)` for `j = 0..=m`, zero beyond the degree.
pub fn q_coefficients(roots: &[C64], m: usize) -> Vec<C64> {
    let e = elementary_all(roots);
    (0..=m)
        .map(|j| {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            e.get(j).map_or(c64(0.0, 0.0), |v| v * sign)
        })
        .collect()
}

/// `W^Z_0..W^Z_m` for the chain anisotropy `params.hbar()` and twist `Z`.
pub fn q_plus_series(twist: C64, m: usize, params: &ModelParams) -> Result<QOperatorSeries, QopError> {
    let n = params.n();
    let g = DrinfeldGenerators::new(&params.with_inverted_hbar());
    let e = g.op_e(-1)?;
    let f = g.op_f(0)?;
    let jmax = m.min(n);
    // c_j per sector, zero where the term vanishes (j > k).
    let c: Vec<Vec<C64>> = (0..=jmax)
        .map(|j| {
            (0..=n)
                .map(|k| if j > k { Ok(c64(0.0, 0.0)) } else { coeff_c(j, twist, params, k) })
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut e_pows = vec![GradedOperator::identity(n)];
    let mut f_pows = vec![GradedOperator::identity(n)];
    for _ in 0..jmax {
        e_pows.push(e.compose(e_pows.last().expect("nonempty"))?);
        f_pows.push(f_pows.last().expect("nonempty").compose(&f)?);
    }
    let w_diag = |i: usize| {
        let sign = if i.is_multiple_of(2) { 1.0 } else { -1.0 };
        classical_exterior(i, params).scale(&c64(sign, 0.0))
    };
    let coeffs = (0..=m)
        .into_par_iter()
        .map(|order| {
            let mut acc = GradedOperator::zero(n, 0);
            for j in 0..=order.min(jmax) {
                let term = f_pows[j]
                    .compose(&w_diag(order - j).compose(&e_pows[j])?)?
                    .scale_by_target_sector(|k| c[j][k]);
                acc = acc.try_add(&term)?;
            }
            Ok(acc)
        })
        .collect::<Result<Vec<_>, QopError>>()?;
    Ok(QOperatorSeries {
        side: Side::Plus,
        twist,
        basis: Basis::FixedPoint,
        normalization: Normalization::Raw,
        series: OperatorSeries::new(SeriesVar::X, coeffs)?,
    })
}

/// Bethe roots of one sector from both reference states, paired so that
/// `plus[s]` and `minus[s]` describe the same eigenvector.
#[derive(Clone, Debug)]
pub struct SectorSpectrum {
    pub k: usize,
    /// `k` roots each, twist `Z`.
    pub plus: Vec<Vec<C64>>,
    /// `n - k` roots each, twist `Z^{-1}`.
    pub minus: Vec<Vec<C64>>,
    /// Largest relative mismatch of the transfer eigenvalues of paired solutions.
    pub pairing_defect: f64,
}

const PROBES: [(f64, f64); 3] = [(0.37, 0.21), (-0.52, 0.44), (0.8, -0.3)];

fn eigen_signature(roots: &[C64], twist: C64, params: &ModelParams, side: Side) -> Result<Vec<C64>, QopError> {
    PROBES
        .iter()
        .map(|&(re, im)| Ok(polynomial_eigenvalue(c64(re, im), roots, twist, params, side)?))
        .collect()
}

fn signature_distance(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm() / x.norm().max(y.norm()).max(1e-300))
        .fold(0.0, f64::max)
}

/// Solves both sides of every sector of the chain with twist `Z` and pairs the
/// solutions by their transfer-matrix eigenvalues.
pub fn chain_spectrum(twist: C64, params: &ModelParams, ctl: &StepControl) -> Result<Vec<SectorSpectrum>, QopError> {
    let n = params.n();
    let z2 = twist * twist;
    (0..=n)
        .into_par_iter()
        .map(|k| {
            let plus = solve_all(&BetheSystem::new(params, k, Convention::Aba, z2)?, ctl)?;
            let minus = solve_all(&BetheSystem::new(params, n - k, Convention::Aba, z2.inv())?, ctl)?;
            let plus_sig = plus
                .solutions
                .iter()
                .map(|s| eigen_signature(&s.roots, twist, params, Side::Plus))
                .collect::<Result<Vec<_>, _>>()?;
            let minus_sig = minus
                .solutions
                .iter()
                .map(|s| eigen_signature(&s.roots, twist, params, Side::Minus))
                .collect::<Result<Vec<_>, _>>()?;
            let mut used = vec![false; minus_sig.len()];
            let mut paired = Vec::with_capacity(plus_sig.len());
            let mut defect = 0.0f64;
            for ps in &plus_sig {
                let (j, d) = minus_sig
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| !used[*j])
                    .map(|(j, ms)| (j, signature_distance(ps, ms)))
                    .min_by(|a, b| a.1.total_cmp(&b.1))
                    .ok_or(QopError::PairingFailed { k })?;
                used[j] = true;
                defect = defect.max(d);
                paired.push(minus.solutions[j].roots.clone());
            }
            Ok(SectorSpectrum {
                k,
                plus: plus.solutions.into_iter().map(|s| s.roots).collect(),
                minus: paired,
                pairing_defect: defect,
            })
        })
        .collect()
}

/// Spectral synthesis of `Q-` in the fixed-point basis.
#[derive(Clone, Debug)]
pub struct MinusSynthesis {
    pub q_minus: QOperatorSeries,
    /// Largest joint eigen-residual of the `Q+` projectors.
    pub joint_residual: f64,
}

/// `Q-` through `x^m` in the fixed-point basis, by spectral synthesis over
/// the projectors of `Q+`.
pub fn q_minus_series(twist: C64, m: usize, params: &ModelParams) -> Result<QOperatorSeries, QopError> {
    let spectrum = chain_spectrum(twist, params, &StepControl::default())?;
    let q_plus = q_plus_series(twist, params.n().max(m), params)?;
    Ok(synthesize_minus(&q_plus, &spectrum, m)?.q_minus)
}

/// `Q-` from an already computed `Q+` and spectrum.
pub fn synthesize_minus(q_plus: &QOperatorSeries, spectrum: &[SectorSpectrum], m: usize) -> Result<MinusSynthesis, QopError> {
    let n = q_plus.series.n();
    let mut joint = 0.0f64;
    let mut blocks: Vec<Vec<DMatrix<C64>>> = vec![Vec::new(); m + 1];
    for sec in spectrum {
        let k = sec.k;
        let ops: Vec<DMatrix<C64>> = (1..=k)
            .map(|j| q_plus.series.coeff(j).and_then(|c| c.block(k)).cloned().ok_or(QopError::SeriesTooShort))
            .collect::<Result<_, _>>()?;
        let eigen: Vec<Vec<C64>> = sec.plus.iter().map(|s| q_coefficients(s, k)[1..].to_vec()).collect();
        let proj = SpectralProjectors::build(&ops, &eigen)?;
        joint = joint.max(proj.joint_residual);
        let minus_coeffs: Vec<Vec<C64>> = sec.minus.iter().map(|t| q_coefficients(t, m)).collect();
        for (j, slot) in blocks.iter_mut().enumerate() {
            slot.push(proj.synthesize(|s| minus_coeffs[s][j]));
        }
    }
    let coeffs = blocks
        .into_iter()
        .map(|bl| GradedOperator::from_block_fn(n, 0, |k, _| bl[k].clone()))
        .collect();
    Ok(MinusSynthesis {
        q_minus: QOperatorSeries {
            side: Side::Minus,
            twist: q_plus.twist,
            basis: Basis::FixedPoint,
            normalization: Normalization::Raw,
            series: OperatorSeries::new(SeriesVar::X, coeffs)?,
        },
        joint_residual: joint,
    })
}

/// Both Q-operators in the spin basis, synthesized from Bethe vectors.
#[derive(Clone, Debug)]
pub struct SpinQ {
    pub q_plus: QOperatorSeries,
    pub q_minus: QOperatorSeries,
    /// Largest projective distance between a `B`-chain vector and the
    /// `C`-chain vector of its paired minus roots.
    pub parallel_defect: f64,
}

/// `Q+` and `Q-` through `x^m` in the spin basis.
pub fn spin_q_series(twist: C64, m: usize, params: &ModelParams, spectrum: &[SectorSpectrum]) -> Result<SpinQ, QopError> {
    let n = params.n();
    let table = SectorTable::new(n);
    let mut defect = 0.0f64;
    let mut plus_blocks: Vec<Vec<DMatrix<C64>>> = vec![Vec::new(); m + 1];
    let mut minus_blocks: Vec<Vec<DMatrix<C64>>> = vec![Vec::new(); m + 1];
    for sec in spectrum {
        let k = sec.k;
        let dim = binomial(n, k);
        let restrict = |v: &nalgebra::DVector<C64>| {
            nalgebra::DVector::from_iterator(dim, table.sector(k).iter().map(|&mask| v[mask as usize]))
        };
        let mut cols = Vec::with_capacity(dim);
        for (s, t) in sec.plus.iter().zip(&sec.minus) {
            let bv = bethe_vector(s, twist, params, Side::Plus)?;
            let cv = bethe_vector(t, twist, params, Side::Minus)?;
            defect = defect.max(projective_distance(&bv.vector, &cv.vector));
            cols.push(restrict(&bv.vector));
        }
        let v = DMatrix::from_columns(&cols);
        let v_inv = v.clone().try_inverse().ok_or(QopError::SingularEigenbasis { k })?;
        let pc: Vec<Vec<C64>> = sec.plus.iter().map(|s| q_coefficients(s, m)).collect();
        let mc: Vec<Vec<C64>> = sec.minus.iter().map(|t| q_coefficients(t, m)).collect();
        for j in 0..=m {
            let dp = DMatrix::from_fn(dim, dim, |r, c| if r == c { pc[r][j] } else { c64(0.0, 0.0) });
            let dm = DMatrix::from_fn(dim, dim, |r, c| if r == c { mc[r][j] } else { c64(0.0, 0.0) });
            plus_blocks[j].push(&v * dp * &v_inv);
            minus_blocks[j].push(&v * dm * &v_inv);
        }
    }
    let assemble = |blocks: Vec<Vec<DMatrix<C64>>>| -> Result<OperatorSeries, QopError> {
        let coeffs = blocks
            .into_iter()
            .map(|bl| GradedOperator::from_block_fn(n, 0, |k, _| bl[k].clone()))
            .collect();
        Ok(OperatorSeries::new(SeriesVar::X, coeffs)?)
    };
    let wrap = |side, series| QOperatorSeries {
        side,
        twist,
        basis: Basis::Spin,
        normalization: Normalization::Raw,
        series,
    };
    Ok(SpinQ {
        q_plus: wrap(Side::Plus, assemble(plus_blocks)?),
        q_minus: wrap(Side::Minus, assemble(minus_blocks)?),
        parallel_defect: defect,
    })
}
