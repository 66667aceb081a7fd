//! Identity suites: eigenvalue theorem, top power versus line bundle,
//! identification of `Q+` with the quantum exterior powers, the quantum
//! Wronskian and the TQ relations.
//!
//! Every residual is coefficient-wise and relative:
//! `max|lhs - rhs| / max(1, max|rhs|)` per order of `x`.

use crate::classes::{classical_exterior, quantum_exterior_with, quantum_line_bundle_with};
use crate::coefficients::{normalization_f, FormulaOptions};
use crate::qseries::{chain_spectrum, q_plus_series, spin_q_series, synthesize_minus, SectorSpectrum};
use crate::QopError;
use kxxz_bethe::{solve_all, BetheSystem, Convention, StepControl};
use kxxz_chain::{alpha, bethe_vector, delta, eigen_residual, transfer_eigenvalue, transfer_polynomial, Side};
use kxxz_core::linalg::SpectralProjectors;
use kxxz_core::symmetric::elementary_all;
use kxxz_core::wire::params_hash;
use kxxz_core::{
    c64, GradedOperator, ModelParams, OperatorSeries, PowerSeries, RunMetadata, SectorTable, SeriesVar,
    VerificationReport, C64,
};
use nalgebra::DMatrix;

/// Options shared by the identity suites.
#[derive(Clone, Debug)]
pub struct SuiteOptions {
    pub formula: FormulaOptions,
    /// Use `-Z` on the right-hand side of the Wronskian only.
    pub wrong_branch: bool,
    pub tol: f64,
    pub step: StepControl,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            formula: FormulaOptions::default(),
            wrong_branch: false,
            tol: 1e-8,
            step: StepControl::default(),
        }
    }
}

fn new_report(params: &ModelParams) -> VerificationReport {
    VerificationReport::new(RunMetadata {
        params_hash: params_hash(params),
        precision_bits: params.precision_bits(),
        wall_time_s: None,
    })
}

fn relative(diff: &GradedOperator, rhs: &GradedOperator) -> f64 {
    diff.max_abs() / rhs.max_abs().max(1.0)
}

/// Per-order relative residuals of `lhs - rhs`.
fn series_residuals(lhs: &OperatorSeries, rhs: &OperatorSeries) -> Result<Vec<f64>, QopError> {
    let diff = lhs.sub(rhs)?;
    Ok(diff
        .coeffs()
        .iter()
        .zip(rhs.coeffs())
        .map(|(d, r)| relative(d, r))
        .collect())
}

/// Scalar series times an operator series.
fn scalar_times(s: &PowerSeries, op: &OperatorSeries) -> Result<OperatorSeries, QopError> {
    Ok(OperatorSeries::from_scalar(s, op.n()).mul(op)?)
}

/// Eigenvalue theorem, classical limit, commutativity and the top power.
///
/// On every sector the eigenvalues of `Lambda-hat^1..Lambda-hat^n` are checked
/// to be `e_l` of the geometric Bethe roots at `(hbar, z)`.
pub fn check_quantum_eigenvalues(z: C64, params: &ModelParams, opts: &SuiteOptions) -> Result<VerificationReport, QopError> {
    let n = params.n();
    let mut report = new_report(params);
    let lam: Vec<GradedOperator> = (0..=n)
        .map(|l| Ok(quantum_exterior_with(l, z, params, &opts.formula)?.operator))
        .collect::<Result<_, QopError>>()?;
    for k in 0..=n {
        let set = solve_all(&BetheSystem::new(params, k, Convention::Geometric, z)?, &opts.step)?;
        let ops: Vec<DMatrix<C64>> = lam[1..].iter().map(|op| op.block(k).cloned().expect("sector")).collect();
        let eigen: Vec<Vec<C64>> = set
            .solutions
            .iter()
            .map(|s| {
                let e = elementary_all(&s.roots);
                (1..=n).map(|l| e.get(l).copied().unwrap_or(c64(0.0, 0.0))).collect()
            })
            .collect();
        let proj = SpectralProjectors::build(&ops, &eigen)?;
        report.push(format!("qop.eigen.k{k}"), "eigenvalue theorem", proj.joint_residual, opts.tol);
    }
    // Top exterior power against the line bundle, sector by sector.
    let line = quantum_line_bundle_with(z, params, &opts.formula)?.operator;
    for (k, top) in lam.iter().enumerate() {
        let a = top.block(k).expect("sector");
        let b = line.block(k).expect("sector");
        let scale = kxxz_core::linalg::max_abs(b).max(1.0);
        report.push(
            format!("qop.linebundle.k{k}"),
            "top exterior power equals line bundle",
            kxxz_core::linalg::max_abs(&(a - b)) / scale,
            1e-10,
        );
    }
    for l in 1..=n {
        for m in l + 1..=n {
            let c = lam[l].commutator(&lam[m])?;
            let scale = lam[l].max_abs().max(1.0) * lam[m].max_abs().max(1.0);
            report.push(
                format!("qop.commute.l{l}.m{m}"),
                "quantum classes commute",
                c.max_abs() / scale,
                1e-10,
            );
        }
    }
    Ok(report)
}

/// `||Lambda-hat^l(z) - diag e_l(a_p)||_max / max(1, ||diag e_l(a_p)||_max)`
/// for small `z`.
pub fn check_classical_limit(z: C64, params: &ModelParams, opts: &SuiteOptions, tol: f64) -> Result<VerificationReport, QopError> {
    let mut report = new_report(params);
    for l in 0..=params.n() {
        let q = quantum_exterior_with(l, z, params, &opts.formula)?.operator;
        let classical = classical_exterior(l, params);
        let d = q.try_sub(&classical)?;
        report.push(format!("qop.classical.l{l}"), "classical limit", relative(&d, &classical), tol);
    }
    Ok(report)
}

/// `Q+` at `(hbar_c = 1/hbar, Z^2 = (-1)^n z)` against
/// `sum_l (-1)^l Lambda-hat^l(z) x^l`, order by order through `x^m`.
pub fn identify_q_with_exterior(z: C64, m: usize, params: &ModelParams, opts: &SuiteOptions) -> Result<VerificationReport, QopError> {
    let n = params.n();
    let chain = params.with_inverted_hbar();
    let sign = if n % 2 == 1 { -1.0 } else { 1.0 };
    let twist = (z * sign).sqrt();
    let q = q_plus_series(twist, m, &chain)?;
    let mut report = new_report(params);
    for j in 0..=m {
        let s = if j % 2 == 0 { 1.0 } else { -1.0 };
        let ext = if j <= n {
            quantum_exterior_with(j, z, params, &opts.formula)?.operator.scale(&c64(s, 0.0))
        } else {
            GradedOperator::zero(n, 0)
        };
        let w = q.series.coeff(j).expect("order");
        report.push(
            format!("qop.identify.x{j}"),
            "Q+ equals the alternating exterior series",
            relative(&w.try_sub(&ext)?, &ext),
            1e-9,
        );
    }
    Ok(report)
}

/// The Wronskian left and right sides for a pair of Q-series.
fn wronskian_sides(
    q_plus: &OperatorSeries,
    q_minus: &OperatorSeries,
    twist: C64,
    params: &ModelParams,
    wrong_branch: bool,
) -> Result<(OperatorSeries, OperatorSeries), QopError> {
    let n = params.n();
    let br = params.branches();
    let sh = br.sqrt_hbar;
    let qh = |k: usize| br.hbar_quarter_pow(n as i32 - 2 * k as i32);
    let first = q_plus.rescale(sh).mul(&q_minus.rescale(sh.inv()))?.scale_by_sector(|k| twist * qh(k));
    let second = q_plus.rescale(sh.inv()).mul(&q_minus.rescale(sh))?.scale_by_sector(|k| (twist * qh(k)).inv());
    let lhs = first.sub(&second)?;
    let z_rhs = if wrong_branch { -twist } else { twist };
    let g = PowerSeries::product_of_linear(SeriesVar::X, params.a(), q_plus.order()).rescale(sh.inv());
    let rhs = OperatorSeries::from_scalar(&g, n).scale_by_sector(|k| z_rhs * qh(k) - (z_rhs * qh(k)).inv());
    Ok((lhs, rhs))
}

/// Quantum Wronskian through `x^m`, in the fixed-point basis (combinatorial
/// `Q+`, synthesized `Q-`) and in the spin basis (both from Bethe vectors).
pub fn check_wronskian(twist: C64, m: usize, params: &ModelParams, opts: &SuiteOptions) -> Result<VerificationReport, QopError> {
    let spectrum = chain_spectrum(twist, params, &opts.step)?;
    check_wronskian_with(twist, m, params, opts, &spectrum)
}

/// [`check_wronskian`] with a precomputed spectrum.
pub fn check_wronskian_with(
    twist: C64,
    m: usize,
    params: &ModelParams,
    opts: &SuiteOptions,
    spectrum: &[SectorSpectrum],
) -> Result<VerificationReport, QopError> {
    let n = params.n();
    let mut report = new_report(params);
    let pairing = spectrum.iter().fold(0.0f64, |a, s| a.max(s.pairing_defect));
    report.push("wronskian.pairing", "plus and minus roots share transfer eigenvalues", pairing, opts.tol);

    let q_plus = q_plus_series(twist, m.max(n), params)?;
    let minus = synthesize_minus(&q_plus, spectrum, m)?;
    report.push(
        "wronskian.fp.projectors",
        "Q+ eigenvalues on fixed-point basis",
        minus.joint_residual,
        opts.tol,
    );
    let (lhs, rhs) = wronskian_sides(&q_plus.series.truncate(m), &minus.q_minus.series, twist, params, opts.wrong_branch)?;
    for (j, r) in series_residuals(&lhs, &rhs)?.into_iter().enumerate() {
        report.push(format!("wronskian.fp.x{j}"), "quantum Wronskian", r, opts.tol);
    }

    let spin = spin_q_series(twist, m, params, spectrum)?;
    report.push(
        "wronskian.spin.parallel",
        "B-chain and C-chain vectors are parallel",
        spin.parallel_defect,
        opts.tol,
    );
    let (lhs, rhs) = wronskian_sides(&spin.q_plus.series, &spin.q_minus.series, twist, params, opts.wrong_branch)?;
    for (j, r) in series_residuals(&lhs, &rhs)?.into_iter().enumerate() {
        report.push(format!("wronskian.spin.x{j}"), "quantum Wronskian", r, opts.tol);
    }
    Ok(report)
}

/// TQ relations: the vacuum eigenvalue, Bethe-vector eigen-residuals on
/// `u_grid`, and the operator relations for `Q+`, `Q-` and normalized `Q+`
/// in the spin basis through `x^m`.
pub fn check_tq(twist: C64, u_grid: &[C64], m: usize, params: &ModelParams, opts: &SuiteOptions) -> Result<VerificationReport, QopError> {
    let spectrum = chain_spectrum(twist, params, &opts.step)?;
    check_tq_with(twist, u_grid, m, params, opts, &spectrum)
}

/// [`check_tq`] with a precomputed spectrum.
pub fn check_tq_with(
    twist: C64,
    u_grid: &[C64],
    m: usize,
    params: &ModelParams,
    opts: &SuiteOptions,
    spectrum: &[SectorSpectrum],
) -> Result<VerificationReport, QopError> {
    let n = params.n();
    let hbar = params.hbar();
    let br = params.branches();
    let mut report = new_report(params);

    for (i, &u) in u_grid.iter().enumerate() {
        let lam = transfer_eigenvalue(u, &[], twist, params)?;
        let vac = alpha(u, twist, params) + delta(u, twist, params);
        report.push(
            format!("tq.vacuum.u{i}"),
            "reference-state eigenvalue",
            (lam - vac).norm() / vac.norm().max(1.0),
            opts.tol,
        );
        let mut worst = 0.0f64;
        for sec in spectrum {
            for s in &sec.plus {
                let bv = bethe_vector(s, twist, params, Side::Plus)?;
                worst = worst.max(eigen_residual(u, &bv, twist, params)?);
            }
        }
        report.push(format!("tq.eigen.u{i}"), "Bethe vectors are transfer eigenvectors", worst, opts.tol);
    }

    // Transfer matrix as an operator polynomial in x, padded to order m. The
    // polynomial gauge is brought to the basis of the Bethe vectors as
    // D t D^{-1}, with D diagonal and d(mask) = prod_{i in mask} xi_i.
    let table = SectorTable::new(n);
    let gauge = |mask: u32| {
        (0..n)
            .filter(|&i| mask >> i & 1 == 1)
            .fold(c64(1.0, 0.0), |acc, i| acc * br.sqrt_a[i])
    };
    let t_coeffs: Vec<GradedOperator> = transfer_polynomial(twist, params)
        .iter()
        .map(|t| {
            t.map_blocks(|k, b| {
                let masks = table.sector(k);
                DMatrix::from_fn(b.nrows(), b.ncols(), |r, c| b[(r, c)] * gauge(masks[r]) / gauge(masks[c]))
            })
        })
        .collect();
    let t_series = OperatorSeries::new(
        SeriesVar::X,
        (0..=m).map(|j| t_coeffs.get(j).cloned().unwrap_or_else(|| GradedOperator::zero(n, 0))).collect(),
    )?;
    let g = PowerSeries::product_of_linear(SeriesVar::X, params.a(), m);
    let g_shift = g.rescale(hbar.inv());
    let spin = spin_q_series(twist, m, params, spectrum)?;

    // T Q+ = Z sh^{n-k} G(x/hbar) Q+(hbar x) + Z^{-1} sh^k G(x) Q+(x/hbar).
    let tq_rhs = |q: &OperatorSeries, plus: bool| -> Result<OperatorSeries, QopError> {
        let (z1, z2) = if plus { (twist, twist.inv()) } else { (twist.inv(), twist) };
        let p1 = |k: usize| if plus { br.hbar_half_pow((n - k) as i32) } else { br.hbar_half_pow(k as i32) };
        let p2 = |k: usize| if plus { br.hbar_half_pow(k as i32) } else { br.hbar_half_pow((n - k) as i32) };
        let a = scalar_times(&g_shift, &q.rescale(hbar))?.scale_by_sector(|k| z1 * p1(k));
        let b = scalar_times(&g, &q.rescale(hbar.inv()))?.scale_by_sector(|k| z2 * p2(k));
        Ok(a.add(&b)?)
    };
    for (label, q, plus) in [("plus", &spin.q_plus.series, true), ("minus", &spin.q_minus.series, false)] {
        let lhs = t_series.mul(q)?;
        for (j, r) in series_residuals(&lhs, &tq_rhs(q, plus)?)?.into_iter().enumerate() {
            report.push(format!("tq.{label}.x{j}"), "operator TQ relation", r, opts.tol);
        }
    }

    // Normalized form: T^f = T F(x) / (G(x/hbar) F(hbar x)), Q^f = Q / F.
    let f = normalization_f(params, m)?;
    let tf_scalar = f.div(&g_shift.mul(&f.rescale(hbar))?)?;
    let t_f = scalar_times(&tf_scalar, &t_series)?;
    let q_f = scalar_times(&f.inverse()?, &spin.q_plus.series)?;
    let lhs = t_f.mul(&q_f)?;
    let rhs = q_f
        .rescale(hbar)
        .scale_by_sector(|k| twist * br.hbar_half_pow((n - k) as i32))
        .add(&q_f.rescale(hbar.inv()).scale_by_sector(|k| twist.inv() * br.hbar_half_pow(k as i32)))?;
    for (j, r) in series_residuals(&lhs, &rhs)?.into_iter().enumerate() {
        report.push(format!("tq.normalized.x{j}"), "normalized TQ relation", r, opts.tol);
    }
    Ok(report)
}

