//! Verification of the Drinfeld relations on the fixed-point space.

use crate::generators::DrinfeldGenerators;
use crate::UqError;
use kxxz_core::wire::params_hash;
use kxxz_core::{ExactComplex, Field, GradedOperator, ModelParams, RunMetadata, VerificationReport, C64};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Which relations to check and how.
#[derive(Clone, Copy, Debug)]
pub struct DrinfeldOptions {
    /// Generator indices `-range..=range` are tested.
    pub range: i32,
    /// Pass threshold for every residual.
    pub tol: f64,
    /// Negate `K` as a negative control.
    pub wrong_k_sign: bool,
}

impl Default for DrinfeldOptions {
    fn default() -> Self {
        DrinfeldOptions {
            range: 2,
            tol: 1e-10,
            wrong_k_sign: false,
        }
    }
}

/// Runs the relation suite, in exact arithmetic when the parameters ask for
/// more than 53 bits and in double precision otherwise.
pub fn check_drinfeld(params: &ModelParams, opts: &DrinfeldOptions) -> Result<VerificationReport, UqError> {
    let metadata = RunMetadata {
        params_hash: params_hash(params),
        precision_bits: params.precision_bits(),
        wall_time_s: None,
    };
    let mut report = VerificationReport::new(metadata);
    let entries = if params.precision_bits() > 53 {
        let mut g = DrinfeldGenerators::<ExactComplex>::exact(params);
        if opts.wrong_k_sign {
            g = g.with_wrong_k_sign();
        }
        check_relations(&g, opts)?
    } else {
        let mut g = DrinfeldGenerators::<C64>::new(params);
        if opts.wrong_k_sign {
            g = g.with_wrong_k_sign();
        }
        check_relations(&g, opts)?
    };
    report.merge(entries);
    Ok(report)
}

/// Residual of `lhs = rhs`: largest entry of the difference over
/// `max(1, largest entry of rhs)`.
fn residual<T: Field>(lhs: &GradedOperator<T>, rhs: &GradedOperator<T>) -> Result<f64, UqError> {
    let diff = lhs.try_sub(rhs)?.max_abs();
    Ok(diff / rhs.max_abs().max(1.0))
}

/// Runs every relation for the given generators.
pub fn check_relations<T: Field>(g: &DrinfeldGenerators<T>, opts: &DrinfeldOptions) -> Result<VerificationReport, UqError> {
    let r = opts.range;
    let tol = opts.tol;
    let n = g.n();
    let mut report = VerificationReport::default();

    // E and F are needed up to index 2r because [H_k, E_m] involves E_{k+m}.
    let e: BTreeMap<i32, GradedOperator<T>> =
        (-2 * r..=2 * r).into_par_iter().map(|m| Ok((m, g.op_e(m)?))).collect::<Result<_, UqError>>()?;
    let f: BTreeMap<i32, GradedOperator<T>> =
        (-2 * r..=2 * r).into_par_iter().map(|m| Ok((m, g.op_f(m)?))).collect::<Result<_, UqError>>()?;
    let h: BTreeMap<i32, GradedOperator<T>> =
        (-r..=r).filter(|&m| m != 0).map(|m| Ok((m, g.op_h(m)?))).collect::<Result<_, UqError>>()?;
    let k = g.op_k();
    let k_inv = g.op_k_inv();
    let (psi_plus, psi_minus) = g.psi_series((2 * r) as usize);
    let c = g.c();

    // Grading: E lowers and F raises the sector; E kills k = 0 and F kills k = n.
    for m in -r..=r {
        let (em, fm) = (&e[&m], &f[&m]);
        let graded = em.shift() == -1 && fm.shift() == 1 && em.block(0).is_none() && fm.block(n).is_none();
        report.push_flag(format!("algebra.grading.m{m}"), "E lowers and F raises the number of boxes", graded);
    }

    for m in -r..=r {
        let lhs = k.compose(&e[&m])?.compose(&k_inv)?;
        let res = residual(&lhs, &e[&m].scale(g.hbar()))?;
        report.push(format!("algebra.k_e.m{m}"), "K E_m K^-1 = hbar E_m", res, tol);
        let lhs = k.compose(&f[&m])?.compose(&k_inv)?;
        let res = residual(&lhs, &f[&m].scale(&(T::one() / g.hbar().clone())))?;
        report.push(format!("algebra.k_f.m{m}"), "K F_m K^-1 = hbar^-1 F_m", res, tol);
    }

    for (&a, ha) in &h {
        for (&b, hb) in h.range(a + 1..) {
            let res = ha.commutator(hb)?.max_abs();
            report.push(format!("algebra.h_h.m{a}.l{b}"), "[H_m, H_l] = 0", res, tol);
        }
    }

    // The expensive commutators run in parallel; results are pushed in a
    // fixed order so the report does not depend on scheduling.
    let zero_diag = GradedOperator::<T>::zero(n, 0);
    let pairs: Vec<(i32, i32)> = (-r..=r).flat_map(|m| (-r..=r).map(move |l| (m, l))).collect();
    let ef: Vec<f64> = pairs
        .par_iter()
        .map(|&(m, l)| {
            let s = m + l;
            let plus = if s >= 0 { &psi_plus[s as usize] } else { &zero_diag };
            let minus = if s <= 0 { &psi_minus[(-s) as usize] } else { &zero_diag };
            let rhs = plus.try_sub(minus)?.scale(&(T::one() / c.clone()));
            residual(&e[&m].commutator(&f[&l])?, &rhs)
        })
        .collect::<Result<_, UqError>>()?;
    for (&(m, l), res) in pairs.iter().zip(ef) {
        report.push(
            format!("algebra.e_f.m{m}.l{l}"),
            "[E_m, F_l] = (psi+_{m+l} - psi-_{m+l}) / (hbar^1/2 - hbar^-1/2)",
            res,
            tol,
        );
    }

    let hk_pairs: Vec<(i32, i32)> = h.keys().flat_map(|&kk| (-r..=r).map(move |m| (kk, m))).collect();
    let he_hf: Vec<(f64, f64)> = hk_pairs
        .par_iter()
        .map(|&(kk, m)| {
            let hk = &h[&kk];
            let coeff = g.quantum_integer(2 * kk) / T::from_c64(C64::new(kk as f64, 0.0));
            let he = residual(&hk.commutator(&e[&m])?, &e[&(kk + m)].scale(&coeff))?;
            let hf = residual(&hk.commutator(&f[&m])?, &f[&(kk + m)].scale(&(-coeff)))?;
            Ok((he, hf))
        })
        .collect::<Result<_, UqError>>()?;
    for (&(kk, m), (he, hf)) in hk_pairs.iter().zip(he_hf) {
        report.push(format!("algebra.h_e.k{kk}.m{m}"), "[H_k, E_m] = ([2k]/k) E_{k+m}", he, tol);
        report.push(format!("algebra.h_f.k{kk}.m{m}"), "[H_k, F_m] = -([2k]/k) F_{k+m}", hf, tol);
    }
    Ok(report)
}
