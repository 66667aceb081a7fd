//! Property tests for the algebraic building blocks.

use kxxz_core::pochhammer::{inverse_q_pochhammer_series, q_pochhammer_series};
use kxxz_core::{c64, GradedOperator, PowerSeries, SeriesVar, SymmetricFunctionSpec, C64};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn complex() -> impl Strategy<Value = C64> {
    (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(re, im)| c64(re, im))
}

fn series(m: usize) -> impl Strategy<Value = PowerSeries> {
    prop::collection::vec(complex(), m + 1).prop_map(|c| PowerSeries::new(SeriesVar::X, c))
}

fn random_operator(n: usize, shift: i32, seed: u64) -> GradedOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    GradedOperator::from_block_fn(n, shift, |k, t| {
        let (rows, cols) = (kxxz_core::binomial(n, t), kxxz_core::binomial(n, k));
        nalgebra::DMatrix::from_fn(rows, cols, |_, _| {
            c64(rand::Rng::random_range(&mut rng, -1.0..1.0), rand::Rng::random_range(&mut rng, -1.0..1.0))
        })
    })
}

proptest! {
    #[test]
    fn series_multiplication_is_associative_and_commutative(a in series(6), b in series(6), c in series(6)) {
        let ab_c = a.mul(&b).unwrap().mul(&c).unwrap();
        let a_bc = a.mul(&b.mul(&c).unwrap()).unwrap();
        prop_assert!(ab_c.max_diff(&a_bc).unwrap() < 1e-11);
        prop_assert!(a.mul(&b).unwrap().max_diff(&b.mul(&a).unwrap()).unwrap() < 1e-12);
    }

    #[test]
    fn series_multiplication_distributes(a in series(5), b in series(5), c in series(5)) {
        let lhs = a.mul(&b.add(&c).unwrap()).unwrap();
        let rhs = a.mul(&b).unwrap().add(&a.mul(&c).unwrap()).unwrap();
        prop_assert!(lhs.max_diff(&rhs).unwrap() < 1e-12);
    }

    #[test]
    fn series_inverse_is_two_sided(mut a in series(7), c0 in complex()) {
        prop_assume!(c0.norm() > 0.3);
        let mut coeffs = a.coeffs().to_vec();
        coeffs[0] = c0;
        a = PowerSeries::new(SeriesVar::X, coeffs);
        let prod = a.mul(&a.inverse().unwrap()).unwrap();
        let one = PowerSeries::one(SeriesVar::X, 7);
        let scale = a.coeffs().iter().fold(1.0f64, |m, z| m.max(z.norm() / c0.norm()));
        prop_assert!(prod.max_diff(&one).unwrap() < 1e-10 * scale.powi(7));
    }

    #[test]
    fn pochhammer_times_inverse_is_one(c in complex(), br in -0.8f64..0.8, bi in -0.5f64..0.5) {
        let b = c64(br, bi);
        prop_assume!(b.norm() < 0.9);
        let p = q_pochhammer_series(c, b, 8).unwrap();
        let ip = inverse_q_pochhammer_series(c, b, 8).unwrap();
        let prod = p.mul(&ip).unwrap();
        let scale = (1.0 + c.norm()).powi(8) / (1.0 - b.norm()).powi(8);
        prop_assert!(prod.max_diff(&PowerSeries::one(SeriesVar::T, 8)).unwrap() < 1e-12 * scale);
    }

    #[test]
    fn pochhammer_matches_truncated_product(c in complex(), br in -0.5f64..0.5) {
        // prod_{i<60} (1 - c b^i t) agrees with the closed form to far below 1e-10.
        let b = c64(br, 0.1);
        let m = 6;
        let mut prod = PowerSeries::one(SeriesVar::T, m);
        let mut bi = c64(1.0, 0.0);
        for _ in 0..60 {
            prod = prod.mul(&PowerSeries::product_of_linear(SeriesVar::T, &[c * bi], m)).unwrap();
            bi *= b;
        }
        let closed = q_pochhammer_series(c, b, m).unwrap();
        prop_assert!(prod.max_diff(&closed).unwrap() < 1e-10 * (1.0 + c.norm()).powi(m as i32));
    }

    #[test]
    fn graded_composition_matches_dense(n in 1usize..5, s1 in -1i32..2, s2 in -1i32..2, seed in any::<u64>()) {
        let a = random_operator(n, s1, seed);
        let b = random_operator(n, s2, seed.wrapping_add(1));
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.shift(), s1 + s2);
        let dense = a.to_dense() * b.to_dense();
        prop_assert!(kxxz_core::linalg::max_abs(&(ab.to_dense() - dense)) < 1e-12);
    }

    #[test]
    fn graded_composition_is_associative(n in 1usize..5, seed in any::<u64>()) {
        let a = random_operator(n, 1, seed);
        let b = random_operator(n, -1, seed ^ 7);
        let c = random_operator(n, 0, seed ^ 13);
        let l = a.compose(&b).unwrap().compose(&c).unwrap();
        let r = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert!(l.try_sub(&r).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn symmetric_functions_are_permutation_invariant(
        roots in prop::collection::vec(complex(), 0..6),
        l in 0usize..6,
        m in -3i32..4,
        x in complex(),
        seed in any::<u64>(),
    ) {
        prop_assume!(roots.iter().all(|r| r.norm() > 0.1));
        let mut shuffled = roots.clone();
        shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        for spec in [
            SymmetricFunctionSpec::Elementary(l),
            SymmetricFunctionSpec::PowerSum(m),
            SymmetricFunctionSpec::WeightedExterior(x),
        ] {
            let (u, v) = (spec.eval(&roots), spec.eval(&shuffled));
            prop_assert!((u - v).norm() <= 1e-12 * (1.0 + u.norm()), "{:?}", spec);
        }
    }
}
