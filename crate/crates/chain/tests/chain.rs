//! Monodromy, transfer matrix and Bethe vector checks against hand-computed
//! one- and two-site values.

use kxxz_chain::*;
use kxxz_core::linalg::{max_abs, projective_distance};
use kxxz_core::{c64, make_params, GradedOperator, ModelParams, C64};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn params(a: &[C64], hbar: C64) -> ModelParams {
    make_params(a.len(), a, hbar, c64(0.9, 0.0), 53).unwrap()
}

fn generic(n: usize) -> ModelParams {
    let a: Vec<C64> = (0..n).map(|i| c64(1.0 + 0.31 * i as f64, 0.05 * (i * i) as f64)).collect();
    params(&a, c64(0.45, 0.1))
}

fn basis(n: usize, mask: usize) -> DVector<C64> {
    let mut v = DVector::from_element(1 << n, c64(0.0, 0.0));
    v[mask] = c64(1.0, 0.0);
    v
}

fn random_c(rng: &mut ChaCha8Rng) -> C64 {
    c64(rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))
}

#[test]
fn one_site_entries_by_hand() {
    let (a, hbar, z, u) = (1.7, c64(0.3, 0.0), c64(0.8, 0.3), c64(0.6, -0.4));
    let p = params(&[c64(a, 0.0)], hbar);
    let (sh, xi) = (hbar.sqrt(), a.sqrt());
    let w = u / xi;
    let c = sh - sh.inv();
    let strong = w * sh - (w * sh).inv();
    let weak = w - w.inv();
    let t = Monodromy::spectral(u, z, &p).unwrap();
    let dense = |e| t.entry(e).to_dense();
    let close = |x: C64, y: C64| (x - y).norm() < 1e-13;
    let a_ = dense(Entry::A);
    assert!(close(a_[(0, 0)], z * strong) && close(a_[(1, 1)], z * weak) && close(a_[(0, 1)], c64(0.0, 0.0)));
    let d_ = dense(Entry::D);
    assert!(close(d_[(0, 0)], weak / z) && close(d_[(1, 1)], strong / z));
    let b_ = dense(Entry::B);
    assert!(close(b_[(1, 0)], c * sh.sqrt() / z) && close(b_[(0, 1)], c64(0.0, 0.0)));
    let c_ = dense(Entry::C);
    assert!(close(c_[(0, 1)], z * c / sh.sqrt()) && close(c_[(1, 0)], c64(0.0, 0.0)));
    // n = 1, Z = 1: the trace is diag(strong + weak, weak + strong).
    let tr = transfer(u, c64(1.0, 0.0), &p).unwrap().to_dense();
    assert!(close(tr[(0, 0)], strong + weak) && close(tr[(1, 1)], strong + weak));
}

#[test]
fn reference_state_eigenvalue() {
    let p = generic(3);
    let (u, z) = (c64(0.7, 0.2), c64(1.1, -0.3));
    let om = basis(3, 0);
    let tv = Monodromy::spectral(u, z, &p).unwrap().apply_transfer(&om);
    let lam = alpha(u, z, &p) + delta(u, z, &p);
    assert!((tv - &om * lam).norm() < 1e-12 * lam.norm());
    assert!((transfer_eigenvalue(u, &[], z, &p).unwrap() - lam).norm() < 1e-12 * lam.norm());
}

#[test]
fn creation_operators_respect_the_grading() {
    let p = generic(3);
    let t = Monodromy::spectral(c64(0.9, 0.1), c64(1.2, 0.0), &p).unwrap();
    assert_eq!(t.apply(Entry::B, &basis(3, 7)).norm(), 0.0);
    assert_eq!(t.apply(Entry::C, &basis(3, 0)).norm(), 0.0);
    assert_eq!(t.entry(Entry::B).shift(), 1);
    assert_eq!(t.entry(Entry::C).shift(), -1);
}

#[test]
fn transfer_matrices_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..10 {
        let n = 1 + trial % 5;
        let p = generic(n);
        let z = c64(0.8, 0.35);
        let (u1, u2) = (random_c(&mut rng), random_c(&mut rng));
        let t1 = transfer(u1, z, &p).unwrap();
        let t2 = transfer(u2, z, &p).unwrap();
        let scale = t1.max_abs().max(t2.max_abs());
        assert!(t1.commutator(&t2).unwrap().max_abs() < 1e-11 * scale * scale.max(1.0));
    }
}

#[test]
fn transfer_commutes_with_k_at_unit_twist() {
    let p = generic(4);
    let sh = p.branches().sqrt_hbar;
    let k = GradedOperator::diagonal(4, |m| sh.powi(4 - 2 * m.count_ones() as i32));
    let t = transfer(c64(0.5, 0.9), c64(1.0, 0.0), &p).unwrap();
    assert!(t.commutator(&k).unwrap().max_abs() < 1e-12);
}

#[test]
fn polynomial_gauge_matches_spectral_gauge_spectrum() {
    let p = generic(3);
    let (u, z) = (c64(0.8, -0.6), c64(1.3, 0.2));
    let x = (u * u).inv();
    let spectral = transfer(u, z, &p).unwrap().to_dense();
    let poly = Monodromy::polynomial(x, z, &p).transfer().to_dense();
    let pref: C64 = p.branches().sqrt_a.iter().map(|xi| u / xi).product();
    // Similar matrices: equal traces of the first two powers after scaling.
    let s1 = spectral.trace() - poly.trace() * pref;
    let s2 = (&spectral * &spectral).trace() - (&poly * &poly).trace() * pref * pref;
    assert!(s1.norm() < 1e-11 * spectral.trace().norm().max(1.0));
    assert!(s2.norm() < 1e-10 * (&spectral * &spectral).trace().norm().max(1.0));

    // The interpolated coefficients reproduce the polynomial gauge at x.
    let coeffs = transfer_polynomial(z, &p);
    assert_eq!(coeffs.len(), 4);
    let mut acc = GradedOperator::zero(3, 0);
    for (m, cm) in coeffs.iter().enumerate() {
        acc = acc.try_add(&cm.scale(&x.powi(m as i32))).unwrap();
    }
    assert!(max_abs(&(acc.to_dense() - poly)) < 1e-12 * max_abs(&spectral).max(1.0));
}

#[test]
fn one_site_one_root_vector_by_hand() {
    let (hbar, z) = (c64(0.3, 0.0), c64(0.8, 0.3));
    let p = params(&[c64(1.7, 0.0)], hbar);
    let bv = bethe_vector(&[c64(2.0, 0.5)], z, &p, Side::Plus).unwrap();
    let sh = hbar.sqrt();
    let expected = ((sh - sh.inv()) * sh.sqrt() / z).norm();
    assert!((bv.raw_norm - expected).abs() < 1e-14);
    assert!((bv.vector[1].norm() - 1.0).abs() < 1e-14 && bv.vector[0].norm() == 0.0);
    assert_eq!(bv.sector, 1);
    let empty = bethe_vector(&[], z, &p, Side::Plus).unwrap();
    assert_eq!(empty.vector, basis(1, 0));
}

/// Roots of the one-root equation
/// `prod_j (a_j/hbar - s)/(a_j - s) = Z^{-2} hbar^{-n/2}` by the quadratic formula.
fn one_root_solutions(a: [C64; 2], hbar: C64, z: C64) -> [C64; 2] {
    let r = (z * z * hbar).inv();
    let qa = c64(1.0, 0.0) - r;
    let qb = -((a[0] + a[1]) / hbar - r * (a[0] + a[1]));
    let qc = a[0] * a[1] / (hbar * hbar) - r * a[0] * a[1];
    let disc = (qb * qb - qa * qc * 4.0).sqrt();
    [(-qb + disc) / (qa * 2.0), (-qb - disc) / (qa * 2.0)]
}

#[test]
fn two_site_bethe_vectors_are_eigenvectors() {
    let a = [c64(1.0, 0.0), c64(1.6, 0.2)];
    let hbar = c64(0.45, 0.1);
    let p = params(&a, hbar);
    let z = c64(0.9, 0.4);
    let probes = [c64(0.7, 0.3), c64(-1.1, 0.5), c64(0.4, -1.3)];
    let mut vectors = Vec::new();
    for s in one_root_solutions(a, hbar, z) {
        let bv = bethe_vector(&[s], z, &p, Side::Plus).unwrap();
        for u in probes {
            assert!(eigen_residual(u, &bv, z, &p).unwrap() < 1e-10);
        }
        // Finite at the site values u^2 = a_j.
        for &xi in &p.branches().sqrt_a {
            assert!(transfer_eigenvalue(xi, &[s], z, &p).unwrap().is_finite());
        }
        vectors.push(bv.vector);
    }
    assert_eq!(kxxz_core::linalg::gram_rank(&vectors, 1e-8).unwrap(), 2);

    // Minus side: one root with twist Z^{-1}, vector in sector 1.
    for t in one_root_solutions(a, hbar, z.inv()) {
        let bv = bethe_vector(&[t], z, &p, Side::Minus).unwrap();
        assert_eq!(bv.sector, 1);
        assert!(bv.vector[0].norm() == 0.0 && bv.vector[3].norm() == 0.0);
        for u in probes {
            assert!(eigen_residual(u, &bv, z, &p).unwrap() < 1e-10);
        }
    }
}

#[test]
fn one_site_root_is_an_eigenvector() {
    let (a, hbar, z) = (c64(1.7, 0.0), c64(0.3, 0.1), c64(0.8, 0.3));
    let p = params(&[a], hbar);
    let r = (z * z * hbar.sqrt()).inv();
    let s = (a / hbar - r * a) / (c64(1.0, 0.0) - r);
    let bv = bethe_vector(&[s], z, &p, Side::Plus).unwrap();
    assert!(eigen_residual(c64(0.3, 0.8), &bv, z, &p).unwrap() < 1e-12);
}

#[test]
fn random_roots_are_not_eigenvectors() {
    let p = generic(2);
    let z = c64(0.9, 0.4);
    let bv = bethe_vector(&[c64(1.9, -0.7)], z, &p, Side::Plus).unwrap();
    assert!(eigen_residual(c64(0.7, 0.3), &bv, z, &p).unwrap() > 1e-3);
}

#[test]
fn inadmissible_roots_are_rejected() {
    let p = generic(3);
    let hbar = p.hbar();
    let s = c64(1.2, 0.3);
    let z = c64(1.0, 0.0);
    assert!(matches!(
        bethe_vector(&[s, s], z, &p, Side::Plus),
        Err(ChainError::InadmissibleRoots { .. })
    ));
    assert!(bethe_vector(&[s, s * hbar], z, &p, Side::Plus).is_err());
    assert!(bethe_vector(&[s, c64(0.0, 0.0)], z, &p, Side::Plus).is_err());
    assert!(matches!(
        transfer(c64(0.0, 0.0), z, &p),
        Err(ChainError::ZeroSpectralParameter)
    ));
    assert!(matches!(
        transfer_eigenvalue(s.sqrt(), &[s], z, &p),
        Err(ChainError::PoleAtSpectralParameter)
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn transfer_preserves_sectors(ur in -2.0f64..2.0, ui in -2.0f64..2.0, n in 1usize..5) {
        prop_assume!(ur.abs() + ui.abs() > 0.1);
        let p = generic(n);
        let t = Monodromy::spectral(c64(ur, ui), c64(1.1, -0.2), &p).unwrap();
        // Applying to every basis vector never leaves its sector.
        for mask in 0..1usize << n {
            let img = t.apply_transfer(&basis(n, mask));
            for (m, x) in img.iter().enumerate() {
                if m.count_ones() != mask.count_ones() {
                    prop_assert_eq!(x.norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn creation_operators_commute_projectively(
        v1r in 0.5f64..2.0, v1i in -1.0f64..1.0, v2r in 0.5f64..2.0, v2i in -1.0f64..1.0,
    ) {
        let p = generic(3);
        let z = c64(0.9, 0.2);
        let (v1, v2) = (c64(v1r, v1i), c64(v2r, v2i));
        let t1 = Monodromy::spectral(v1, z, &p).unwrap();
        let t2 = Monodromy::spectral(v2, z, &p).unwrap();
        let om = basis(3, 0);
        let a = t1.apply(Entry::B, &t2.apply(Entry::B, &om));
        let b = t2.apply(Entry::B, &t1.apply(Entry::B, &om));
        prop_assume!(a.norm() > 1e-8);
        prop_assert!(projective_distance(&a, &b) < 1e-7);
    }
}
