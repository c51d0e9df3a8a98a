mod common;

use common::*;
use num_complex::Complex64;
use qwind::curve::constant;
use qwind::winding::winding_number_oriented;
use qwind::{localize_roots, QuadratureConfig, Quaternion, RealPolynomial, SlicePlane};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn product_matches_matrix_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let p = Quaternion::from_array([(); 4].map(|_| rng.gen_range(-5.0..5.0)));
        let q = Quaternion::from_array([(); 4].map(|_| rng.gen_range(-5.0..5.0)));
        assert!((p * q - matrix_product(p, q)).norm() <= 1e-12 * (1.0 + p.norm() * q.norm()));
    }
}

#[test]
fn slice_polygons_match_argument_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let quad = QuadratureConfig::with_panels(1024);
    for _ in 0..20 {
        let u = random_unit(&mut rng);
        let v = random_polygon(&mut rng);
        let q = polygon_curve(&v, u);
        let w = winding_number_oriented(&q, &constant(q.domain(), Quaternion::ZERO), &quad, u).unwrap();
        assert_eq!(w.turns, polygon_winding(&v), "{v:?}");
    }
}

#[test]
fn slice_trigonometric_curves_match_argument_summation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let quad = QuadratureConfig::with_panels(1024);
    for _ in 0..20 {
        let u = random_unit(&mut rng);
        let modes = random_trig(&mut rng);
        let q = trig_curve(&modes, u);
        let w = winding_number_oriented(&q, &constant(q.domain(), Quaternion::ZERO), &quad, u).unwrap();
        let oracle = sampled_winding(trig_eval(&modes), 0.0, std::f64::consts::TAU, 20_000);
        assert_eq!(w.turns, oracle, "{modes:?}");
    }
}

#[test]
fn durand_kerner_recovers_known_roots() {
    // (x − 1)(x + 2)(x² + 4)
    let roots = durand_kerner(&[1.0, 1.0, 2.0, 4.0, -8.0]);
    for expected in [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(0.0, 2.0), Complex64::new(0.0, -2.0)] {
        assert!(roots.iter().any(|(z, e)| (z - expected).norm() < 1e-12 && *e < 1e-10));
    }
}

#[test]
fn enclosures_match_durand_kerner() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let quad = QuadratureConfig::default();
    for _ in 0..5 {
        let n = rng.gen_range(2..=5);
        let coeffs: Vec<f64> = (0..=n).map(|k| if k == 0 { 1.0 } else { rng.gen_range(-3.0..3.0) }).collect();
        let f = RealPolynomial::new(coeffs.clone(), Quaternion::ZERO).unwrap();
        let slice = SlicePlane::from_unit(random_unit(&mut rng)).unwrap();
        let found = localize_roots(&f, &slice, 1e-8, &quad).unwrap();
        for (z, err) in durand_kerner(&coeffs) {
            let hit = found
                .iter()
                .any(|e| (Complex64::new(e.center.0, e.center.1) - z).norm() <= e.radius + 1e-6 + err);
            assert!(hit, "oracle root {z} missing from {found:?}");
        }
    }
}
