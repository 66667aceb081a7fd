//! Quantum classes, Q-operators and the identity suites against hand-computed
//! values and the closed-form two-site Bethe roots.

use kxxz_chain::{bethe_vector, Side};
use kxxz_core::linalg::max_abs;
use kxxz_core::{c64, make_params, ModelParams, PowerSeries, SeriesVar, C64};
use kxxz_qop::*;
use proptest::prelude::*;

fn params(a: &[C64], hbar: C64) -> ModelParams {
    make_params(a.len(), a, hbar, c64(0.9, 0.0), 53).unwrap()
}

fn generic(n: usize) -> ModelParams {
    let a: Vec<C64> = (0..n)
        .map(|i| c64(1.0 + 0.37 * i as f64, 0.11 * i as f64 - 0.03 * (i * i) as f64))
        .collect();
    params(&a, c64(0.42, 0.13))
}

/// Roots of `(s - a1)(s - a2) = z hbar^{-1} (hbar a1 - s)(hbar a2 - s)`.
fn two_site_roots(a: [C64; 2], hbar: C64, z: C64) -> [C64; 2] {
    let r = z / hbar;
    let qa = 1.0 - r;
    let qb = -(a[0] + a[1]) + r * hbar * (a[0] + a[1]);
    let qc = a[0] * a[1] - r * hbar * hbar * a[0] * a[1];
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
}

/// Eigenvalues of a 2x2 matrix.
fn eig2(m: &nalgebra::DMatrix<C64>) -> [C64; 2] {
    let tr = m[(0, 0)] + m[(1, 1)];
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let disc = (tr * tr - 4.0 * det).sqrt();
    [(tr + disc) / 2.0, (tr - disc) / 2.0]
}

fn same_pair(a: [C64; 2], b: [C64; 2], tol: f64) -> bool {
    let d = |x: C64, y: C64| (x - y).norm() / x.norm().max(1.0);
    (d(a[0], b[0]) < tol && d(a[1], b[1]) < tol) || (d(a[0], b[1]) < tol && d(a[1], b[0]) < tol)
}

#[test]
fn coefficient_a_by_hand() {
    let hbar = c64(0.3, 0.0);
    let p = params(&[c64(1.0, 0.0), c64(1.5, 0.2)], hbar);
    let z = c64(0.2, 0.0);
    assert_eq!(coeff_a(0, z, &p, 1).unwrap(), c64(1.0, 0.0));
    // n = 2, k = 1: K = 1.
    let expected = (hbar - 1.0) * hbar.sqrt() / (1.0 - hbar / z);
    assert!((coeff_a(1, z, &p, 1).unwrap() - expected).norm() < 1e-15);
    // Second coefficient on the top sector, K = hbar^{-1}.
    let kk = hbar.inv();
    let fact = (1.0 - hbar * hbar) / (1.0 - hbar);
    let expected2 = (hbar - 1.0).powi(2) * hbar.powi(2) * kk * kk / (fact * (1.0 - hbar * kk / z) * (1.0 - hbar * hbar * kk / z));
    assert!((coeff_a(2, z, &p, 2).unwrap() - expected2).norm() < 1e-14);
    // Vanishes as z -> 0.
    assert!(coeff_a(1, c64(1e-12, 0.0), &p, 1).unwrap().norm() < 1e-11);
    assert_eq!(coeff_a(2, c64(0.0, 0.0), &p, 2).unwrap(), c64(0.0, 0.0));
}

#[test]
fn resonant_z_is_rejected() {
    let hbar = c64(0.3, 0.0);
    let p = params(&[c64(1.0, 0.0), c64(1.5, 0.2)], hbar);
    // 1 - z^{-1} hbar K = 0 at z = hbar on sector 1.
    assert!(matches!(coeff_a(1, hbar, &p, 1), Err(QopError::ResonantZ { .. })));
    assert!(matches!(quantum_exterior(1, hbar, &p), Err(QopError::ResonantZ { .. })));
}

#[test]
fn exterior_zero_is_identity_and_classical_limit() {
    let p = generic(3);
    assert!(quantum_exterior(0, c64(0.2, 0.1), &p).unwrap().operator.is_identity());
    let q = quantum_exterior(1, c64(0.0, 0.0), &generic(2)).unwrap().operator;
    let a = generic(2).a().to_vec();
    assert_eq!(q.diagonal_of(2).unwrap()[0], a[0] + a[1]);
    let report = check_classical_limit(c64(1e-6, 0.0), &params(generic(4).a(), c64(0.8, 0.15)), &SuiteOptions::default(), 1e-4).unwrap();
    assert!(report.passed(), "{:?}", report.failures().collect::<Vec<_>>());
    // The deviation is linear in z.
    let dev = |z: f64| {
        check_classical_limit(c64(z, 0.0), &generic(4), &SuiteOptions::default(), 1.0)
            .unwrap()
            .max_residual("qop.classical")
    };
    assert!((dev(1e-6) / dev(1e-7) - 10.0).abs() < 0.01);
}

#[test]
fn two_site_eigenvalues_are_quadratic_roots() {
    let a = [c64(1.0, 0.0), c64(1.7, 0.25)];
    let hbar = c64(0.4, 0.15);
    let p = params(&a, hbar);
    let z = c64(0.2, 0.0);
    let roots = two_site_roots(a, hbar, z);
    let ext = quantum_exterior(1, z, &p).unwrap().operator;
    assert!(same_pair(eig2(ext.block(1).unwrap()), roots, 1e-12));
    let line = quantum_line_bundle(z, &p).unwrap().operator;
    assert!(same_pair(eig2(line.block(1).unwrap()), roots, 1e-12));
    // Sector 0 of the line bundle is the scalar 1, and the z -> 0 limit is prod a_i.
    assert!((line.block(0).unwrap()[(0, 0)] - 1.0).norm() < 1e-15);
    let line0 = quantum_line_bundle(c64(0.0, 0.0), &p).unwrap().operator;
    assert!((line0.block(2).unwrap()[(0, 0)] - a[0] * a[1]).norm() < 1e-15);
}

#[test]
fn eigenvalue_theorem_up_to_five_sites() {
    for n in 1..=5 {
        for z in [c64(0.25, 0.0), c64(-0.2, 0.15)] {
            let report = check_quantum_eigenvalues(z, &generic(n), &SuiteOptions::default()).unwrap();
            let first = report.failures().next().map(|e| (e.check_id.clone(), e.residual));
            assert!(first.is_none(), "n = {n}: {first:?}");
        }
    }
}

#[test]
fn q_plus_identifies_with_exterior_series() {
    for n in 1..=4 {
        let report = identify_q_with_exterior(c64(0.2, 0.05), 4, &generic(n), &SuiteOptions::default()).unwrap();
        assert!(report.passed(), "n = {n}: {:?}", report.failures().collect::<Vec<_>>());
    }
}

#[test]
fn q_plus_basics() {
    let p = generic(3);
    let q = q_plus_series(c64(0.4, 0.1), 0, &p).unwrap();
    assert_eq!(q.series.order(), 0);
    assert!(q.series.coeff(0).unwrap().is_identity());
    // Twist -> 0 makes Q+ diagonal with eigenvalue prod_{i in p} (1 - a_i x).
    let q = q_plus_series(c64(1e-5, 0.0), 3, &p).unwrap();
    for (j, op) in q.series.coeffs().iter().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let d = op.try_sub(&classical_exterior(j, &p).scale(&c64(sign, 0.0))).unwrap();
        assert!(d.max_abs() < 1e-6, "order {j}: {}", d.max_abs());
    }
}

#[test]
fn q_plus_spectrum_on_bethe_roots() {
    let p = generic(4);
    let twist = c64(0.5, 0.2);
    let spectrum = chain_spectrum(twist, &p, &Default::default()).unwrap();
    let q = q_plus_series(twist, 4, &p).unwrap();
    let minus = synthesize_minus(&q, &spectrum, 4).unwrap();
    assert!(minus.joint_residual < 1e-9);
    // Q- on the all-down sector is the constant 1; on the all-up sector it is
    // prod (1 - x t) over n minus roots.
    let top = minus.q_minus.series.coeff(0).unwrap().block(4).unwrap()[(0, 0)];
    assert!((top - 1.0).norm() < 1e-12);
    assert!(minus.q_minus.series.coeffs()[1..].iter().all(|c| c.block(4).unwrap()[(0, 0)].norm() < 1e-12));
    assert_eq!(spectrum[0].minus[0].len(), 4);
}

#[test]
fn normalization_series() {
    let a = c64(1.3, 0.2);
    let hbar = c64(0.45, 0.1);
    let p = params(&[a], hbar);
    let f = normalization_f(&p, 6).unwrap();
    assert_eq!(f.coeff(0), c64(1.0, 0.0));
    // First order from the two Euler expansions: -a/(1-hbar^2) + a hbar/(1-hbar^2).
    let expected = a * (hbar - 1.0) / (1.0 - hbar * hbar);
    assert!((f.coeff(1) - expected).norm() < 1e-14);
    // f(x / hbar^2) (1 - a x / hbar) = (1 - a x / hbar^2) f(x).
    let lhs = f.rescale((hbar * hbar).inv()).mul(&PowerSeries::from_poly(SeriesVar::X, &[c64(1.0, 0.0), -a / hbar], 6)).unwrap();
    let rhs = f.mul(&PowerSeries::from_poly(SeriesVar::X, &[c64(1.0, 0.0), -a / (hbar * hbar)], 6)).unwrap();
    assert!(lhs.max_diff(&rhs).unwrap() < 1e-12);
}

#[test]
fn wronskian_and_tq_suites() {
    for n in 1..=3 {
        for z in [c64(0.1, 0.0), c64(0.25, 0.0)] {
            let twist = z.sqrt();
            let p = generic(n);
            let w = check_wronskian(twist, 6, &p, &SuiteOptions::default()).unwrap();
            assert!(w.passed(), "n = {n}: {:?}", w.failures().collect::<Vec<_>>());
            let grid = [c64(0.7, 0.4), c64(-1.1, 0.3), c64(0.5, -0.9)];
            let t = check_tq(twist, &grid, 6, &p, &SuiteOptions::default()).unwrap();
            assert!(t.passed(), "n = {n}: {:?}", t.failures().collect::<Vec<_>>());
        }
    }
}

#[test]
fn wrong_branch_fails_wronskian() {
    let opts = SuiteOptions {
        wrong_branch: true,
        ..Default::default()
    };
    let w = check_wronskian(c64(0.2, 0.0).sqrt(), 4, &generic(2), &opts).unwrap();
    assert!(!w.passed());
    assert!(w.failures().all(|e| e.check_id.starts_with("wronskian.fp.x") || e.check_id.starts_with("wronskian.spin.x")));
}

#[test]
fn corrupted_formula_fails_eigenvalue_theorem() {
    let p = generic(3);
    for formula in [
        FormulaOptions {
            flip_sign: true,
            ..Default::default()
        },
        FormulaOptions {
            a1_factor: c64(1.0 + 1e-3, 0.0),
            ..Default::default()
        },
    ] {
        let opts = SuiteOptions {
            formula,
            ..Default::default()
        };
        assert!(!check_quantum_eigenvalues(c64(0.2, 0.0), &p, &opts).unwrap().passed());
        assert!(!identify_q_with_exterior(c64(0.2, 0.0), 3, &p, &opts).unwrap().passed());
    }
}

#[test]
fn spin_q_is_diagonal_on_bethe_vectors() {
    let p = generic(3);
    let twist = c64(0.45, -0.1);
    let spectrum = chain_spectrum(twist, &p, &Default::default()).unwrap();
    let spin = spin_q_series(twist, 3, &p, &spectrum).unwrap();
    assert!(spin.parallel_defect < 1e-9);
    let table = kxxz_core::SectorTable::new(3);
    for sec in &spectrum {
        for s in &sec.plus {
            let bv = bethe_vector(s, twist, &p, Side::Plus).unwrap();
            let v = nalgebra::DVector::from_iterator(table.dim(sec.k), table.sector(sec.k).iter().map(|&m| bv.vector[m as usize]));
            let coeffs = q_coefficients(s, 3);
            for (j, c) in coeffs.iter().enumerate() {
                let op = spin.q_plus.series.coeff(j).unwrap().block(sec.k).unwrap();
                let r = op * &v - &v * *c;
                assert!(r.norm() < 1e-9 * max_abs(op).max(1.0));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    /// The quantum classes commute for random deformations.
    #[test]
    fn quantum_classes_commute(zr in -0.4f64..0.4, zi in -0.4f64..0.4) {
        prop_assume!(zr.abs() + zi.abs() > 0.05);
        let p = generic(4);
        let z = c64(zr, zi);
        let ops: Vec<_> = (1..=3).map(|l| quantum_exterior(l, z, &p).unwrap().operator).collect();
        for i in 0..3 {
            for j in i + 1..3 {
                let c = ops[i].commutator(&ops[j]).unwrap();
                prop_assert!(c.max_abs() < 1e-10 * ops[i].max_abs().max(1.0) * ops[j].max_abs().max(1.0));
            }
        }
    }
}
