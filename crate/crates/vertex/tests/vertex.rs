//! Vertex series, q-brackets and the q -> 1 eigenvalue extraction.

use kxxz_bethe::{solve_all, BetheSystem, Convention, StepControl};
use kxxz_core::pochhammer::finite_pochhammer;
use kxxz_core::{c64, make_params, FixedPoint, ModelParams, SymmetricFunctionSpec, C64};
use kxxz_vertex::*;
use proptest::prelude::*;

fn params(a: &[C64], hbar: C64, q: C64) -> ModelParams {
    make_params(a.len(), a, hbar, q, 53).unwrap()
}

/// Well separated two-site parameters used for the extraction checks.
fn two_site() -> ModelParams {
    params(&[c64(1.0, 0.1), c64(2.1, -0.2)], c64(0.8, 0.15), c64(0.5, 0.0))
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + b.norm())
}

/// `(x; q)_inf` truncated after 50 factors, for `|q| < 1`.
fn phi(x: C64, q: C64) -> C64 {
    (0..50).fold(c64(1.0, 0.0), |acc, i| acc * (1.0 - x * q.powi(i)))
}

/// `(x; q)_d = phi(x) / phi(q^d x)`, valid for every integer `d`.
fn poch_by_phi(x: C64, q: C64, d: i32) -> C64 {
    phi(x, q) / phi(q.powi(d) * x, q)
}

/// The bracket from its definition, with any Pochhammer routine.
fn bracket_oracle(x: C64, d: i32, p: &ModelParams, poch: impl Fn(C64, C64, i32) -> C64) -> C64 {
    let unit = -p.q().sqrt() / p.hbar().sqrt();
    poch(p.hbar() / x, p.q(), d) / poch(p.q() / x, p.q(), d) * unit.powi(d)
}

/// Roots of the two-site, one-magnon Bethe equation
/// `(s - a_1)(s - a_2) = z hbar^{-1} (hbar a_1 - s)(hbar a_2 - s)`.
fn quadratic_roots(a: &[C64], hbar: C64, z: C64) -> [C64; 2] {
    let c = z / hbar;
    let (s1, s2) = (a[0] + a[1], a[0] * a[1]);
    let qa = 1.0 - c;
    let qb = -(s1 - c * hbar * s1);
    let qc = s2 - c * hbar * hbar * s2;
    let disc = (qb * qb - 4.0 * qa * qc).sqrt();
    [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)]
}

#[test]
fn bracket_small_degrees() {
    let p = params(&[c64(1.0, 0.0)], c64(0.4, 0.2), c64(0.6, 0.1));
    let x = c64(1.7, -0.3);
    assert_eq!(bracket(x, 0, &p).unwrap(), c64(1.0, 0.0));
    let by_hand = (1.0 - p.hbar() / x) / (1.0 - p.q() / x) * (-p.q().sqrt() / p.hbar().sqrt());
    assert!(close(bracket(x, 1, &p).unwrap(), by_hand, 1e-14));
    let minus_one = (1.0 - p.q() / x / p.q()) / (1.0 - p.hbar() / x / p.q()) / (-p.q().sqrt() / p.hbar().sqrt());
    assert!(close(bracket(x, -1, &p).unwrap(), minus_one, 1e-14));
}

#[test]
fn bracket_matches_phi_ratio_for_all_signs() {
    let p = params(&[c64(1.0, 0.0)], c64(0.4, 0.2), c64(0.5, 0.1));
    let x = c64(1.7, -0.3);
    for d in -4..=4 {
        let expected = bracket_oracle(x, d, &p, poch_by_phi);
        assert!(close(bracket(x, d as i64, &p).unwrap(), expected, 1e-12), "d = {d}");
        let inv = bracket_inverse(x, d as i64, &p).unwrap();
        assert!(close(inv * expected, c64(1.0, 0.0), 1e-12), "inverse at d = {d}");
    }
}

#[test]
fn bracket_pole_is_reported() {
    let p = params(&[c64(1.0, 0.0)], c64(0.4, 0.2), c64(0.5, 0.0));
    // (q/x; q)_1 = 1 - q/x vanishes at x = q.
    assert!(matches!(bracket(p.q(), 1, &p), Err(VertexError::PoleHit { .. })));
    // The inverse bracket divides by (hbar/x; q)_d instead.
    assert!(matches!(bracket_inverse(p.hbar(), 1, &p), Err(VertexError::PoleHit { .. })));
}

#[test]
fn trivial_series() {
    let p = two_site();
    let v = vertex_coefficient(FixedPoint::new(0b01), &SymmetricFunctionSpec::Elementary(0), 0, &p).unwrap();
    assert_eq!(v.series.coeffs(), &[c64(1.0, 0.0)]);
    assert_eq!(v.eval(c64(0.3, 0.1)), c64(1.0, 0.0));
}

#[test]
fn single_box_by_hand() {
    let p = params(&[c64(1.3, 0.2)], c64(0.4, 0.2), c64(0.6, 0.1));
    let v = vertex_coefficient(FixedPoint::new(1), &SymmetricFunctionSpec::Elementary(0), 1, &p).unwrap();
    let one_one = (1.0 - p.hbar()) / (1.0 - p.q()) * (-p.q().sqrt() / p.hbar().sqrt());
    assert!(close(v.series.coeff(1), p.q().sqrt() * one_one, 1e-14));
}

#[test]
fn constant_term_is_the_classical_descendant() {
    let a = [c64(1.0, 0.1), c64(2.1, -0.2), c64(3.3, 0.3), c64(4.6, 0.0)];
    let p = params(&a, c64(0.8, 0.15), c64(0.7, 0.0));
    for spec in [
        SymmetricFunctionSpec::Elementary(2),
        SymmetricFunctionSpec::PowerSum(-1),
        SymmetricFunctionSpec::WeightedExterior(c64(0.3, 0.1)),
    ] {
        let fp = FixedPoint::new(0b0101);
        let v = vertex_coefficient(fp, &spec, 3, &p).unwrap();
        assert_eq!(v.series.coeff(0), spec.eval(&[a[0], a[2]]));
    }
}

/// The two-magnon sum written out directly from the definition.
#[test]
fn two_magnon_series_matches_direct_sum() {
    let a = [c64(1.0, 0.1), c64(2.1, -0.2), c64(3.3, 0.3)];
    let p = params(&a, c64(0.8, 0.15), c64(0.6, 0.05));
    let fp = FixedPoint::new(0b101);
    let x = [a[0], a[2]];
    let tau = SymmetricFunctionSpec::Elementary(1);
    let d_max = 5;
    let v = vertex_coefficient(fp, &tau, d_max, &p).unwrap();
    let q = p.q();
    let poch = |y: C64, q: C64, d: i32| finite_pochhammer(y, q, d as i64);
    for d in 0..=d_max {
        let mut expected = c64(0.0, 0.0);
        for d1 in 0..=d {
            let ds = [d1 as i32, (d - d1) as i32];
            let mut w = q.sqrt().powi(3 * d as i32);
            for i in 0..2 {
                for j in 0..2 {
                    w /= bracket_oracle(x[i] / x[j], ds[i] - ds[j], &p, poch);
                }
                for &aj in &a {
                    w *= bracket_oracle(x[i] / aj, ds[i], &p, poch);
                }
            }
            expected += w * (x[0] * q.powi(-ds[0]) + x[1] * q.powi(-ds[1]));
        }
        assert!(close(v.series.coeff(d), expected, 1e-11), "degree {d}");
    }
}

#[test]
fn extraction_trivial_cases() {
    let p = two_site();
    let fp = FixedPoint::new(0b10);
    let e = extract_eigenvalue(fp, &SymmetricFunctionSpec::Elementary(1), c64(0.0, 0.0), &p).unwrap();
    assert_eq!(e.value, p.a()[1]);
    let one = extract_eigenvalue(fp, &SymmetricFunctionSpec::Elementary(0), c64(0.04, 0.01), &p).unwrap();
    assert!((one.value - 1.0).norm() < 1e-12);
}

#[test]
fn extraction_matches_quadratic_oracle() {
    let p = two_site();
    let opts = ExtractionOptions::default();
    assert_eq!(opts.d_max, 14);
    for z in [c64(0.01, 0.0), c64(0.05, 0.0), c64(-0.05, 0.0), c64(0.03, 0.04), c64(0.0, -0.05)] {
        let roots = quadratic_roots(p.a(), p.hbar(), z);
        for (mask, a_p) in [(0b01u32, p.a()[0]), (0b10, p.a()[1])] {
            let e = extract_eigenvalue(FixedPoint::new(mask), &SymmetricFunctionSpec::Elementary(1), z, &p).unwrap();
            // The root attached to the fixed point is the one that tends to a_p.
            let root = *roots.iter().min_by(|r, s| (*r - a_p).norm().total_cmp(&(*s - a_p).norm())).unwrap();
            let err = (e.value - root).norm();
            assert!(err < 1e-3, "z = {z}, p = {mask:b}: error {err:e}");
            assert!(err < 10.0 * e.error_estimate + 1e-10, "estimate {:e} misses error {err:e}", e.error_estimate);
        }
    }
}

#[test]
fn extraction_agrees_with_bethe_solver() {
    let p = two_site();
    let z = c64(0.04, -0.02);
    let system = BetheSystem::new(&p, 1, Convention::Saddle, z).unwrap();
    let set = solve_all(&system, &StepControl::default()).unwrap();
    for sol in &set.solutions {
        let e = extract_eigenvalue(FixedPoint::new(sol.origin), &SymmetricFunctionSpec::Elementary(1), z, &p).unwrap();
        assert!((e.value - sol.roots[0]).norm() < 1e-3);
    }
}

#[test]
fn ratio_stays_bounded_while_vertex_grows() {
    let p = two_site();
    let qs = [c64(1.0 - 1e-2, 0.0), c64(1.0 - 1e-3, 0.0), c64(1.0 - 1e-4, 0.0)];
    for mask in [0b01u32, 0b10] {
        let t = ratio_trend(FixedPoint::new(mask), &SymmetricFunctionSpec::Elementary(1), c64(2e-3, 0.0), &qs, 80, &p).unwrap();
        assert!(t.samples.iter().all(|s| s.tail < 1e-12), "series not converged");
        assert!(t.ratio_variation < 0.1, "ratio varies by {}", t.ratio_variation);
        assert!(t.v_one_spread > 10.0, "|V^(1)| only varies by {}", t.v_one_spread);
    }
}

#[test]
fn raising_the_degree_stays_within_the_error_estimate() {
    let p = two_site();
    for z in [c64(0.1, 0.0), c64(-0.07, 0.07)] {
        for mask in [0b01u32, 0b10] {
            let run = |d_max| {
                let opts = ExtractionOptions {
                    d_max,
                    ..ExtractionOptions::default()
                };
                extract_eigenvalue_with(FixedPoint::new(mask), &SymmetricFunctionSpec::Elementary(1), z, &p, &opts).unwrap()
            };
            let (lo, hi) = (run(14), run(16));
            let change = (lo.value - hi.value).norm();
            assert!(change <= lo.error_estimate, "z = {z}: change {change:e} vs estimate {:e}", lo.error_estimate);
        }
    }
}

#[test]
fn truncation_dominates_when_no_q_converges() {
    let p = two_site();
    let opts = ExtractionOptions {
        d_max: 3,
        ..ExtractionOptions::default()
    };
    let r = extract_eigenvalue_with(FixedPoint::new(1), &SymmetricFunctionSpec::Elementary(1), c64(0.5, 0.0), &p, &opts);
    assert!(matches!(r, Err(VertexError::TruncationDominates { .. })));
}

#[test]
fn series_is_deterministic() {
    let a = [c64(1.0, 0.1), c64(2.1, -0.2), c64(3.3, 0.3)];
    let p = params(&a, c64(0.8, 0.15), c64(0.6, 0.05));
    let run = || vertex_coefficient(FixedPoint::new(0b011), &SymmetricFunctionSpec::Elementary(2), 8, &p).unwrap().series;
    assert_eq!(run(), run());
}

proptest! {
    #[test]
    fn bracket_recursion(re in 0.5f64..3.0, im in -1.0f64..1.0, d in -6i64..6) {
        let p = params(&[c64(1.0, 0.0)], c64(0.4, 0.2), c64(0.6, 0.1));
        let x = c64(re, im);
        let (q, h) = (p.q(), p.hbar());
        let step = (1.0 - h * q.powi(d as i32) / x) / (1.0 - q.powi(d as i32 + 1) / x) * (-q.sqrt() / h.sqrt());
        let lhs = bracket(x, d + 1, &p).unwrap();
        let rhs = bracket(x, d, &p).unwrap() * step;
        prop_assert!(close(lhs, rhs, 1e-10));
    }
}
