use std::f64::consts::{PI, TAU};

use proptest::prelude::*;
use qwind::curve::{check_omega_identities, constant, omega_of};
use qwind::families::{circle, circle_spiral, OmegaFamily};
use qwind::homotopy::{poincare_bohl_check, rouche_check};
use qwind::quaternion::{fold_angle_cartesian, fold_angle_symplectic, symplectic_quaternion, to_polar_cartesian};
use qwind::roots::{RealPolynomial, SlicePlane};
use qwind::winding::{winding_number, winding_number_oriented};
use qwind::{Curve, Interval, QuadratureConfig, Quaternion};

fn quat() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-10.0..10.0f64).prop_map(Quaternion::from_array)
}

fn unit3() -> impl Strategy<Value = [f64; 3]> {
    prop::array::uniform3(-1.0..1.0f64)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            [v[0] / n, v[1] / n, v[2] / n]
        })
}

fn quick() -> QuadratureConfig {
    QuadratureConfig::with_panels(1024)
}

/// Trigonometric curve in the slice ℝ + ℝu around `c`: radius wobbles but stays positive.
fn slice_curve(u: [f64; 3], c: Quaternion, k: f64, wobble: f64) -> Curve {
    let u = Quaternion::pure(u);
    Curve::new(Interval::new(0.0, TAU).unwrap(), move |t| {
        let r = 1.0 + wobble * (3.0 * t).cos();
        c + Quaternion::exp_unit(k * t, u).scale(r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn norm_is_multiplicative(p in quat(), q in quat()) {
        let lhs = (p * q).norm();
        let rhs = p.norm() * q.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1e-300));
    }

    #[test]
    fn polar_round_trip(q in quat()) {
        prop_assume!(q.vector_norm() > 1e-6);
        let back = to_polar_cartesian(q).unwrap().to_quaternion();
        prop_assert!((back - q).norm() <= 1e-12 * q.norm());
    }

    #[test]
    fn basis_rotations_are_orthogonal(q in quat()) {
        let n2 = q.norm_sqr();
        for e in [Quaternion::I, Quaternion::J, Quaternion::K] {
            prop_assert!(q.inner(e * q).abs() <= 1e-12 * n2);
            prop_assert!(q.inner(q * e).abs() <= 1e-12 * n2);
        }
    }

    #[test]
    fn cartesian_fold_is_idempotent(theta in -50.0..50.0f64, u in unit3()) {
        let omega = Quaternion::pure(u);
        let (t0, w0) = fold_angle_cartesian(theta, omega);
        let (t1, w1) = fold_angle_cartesian(t0, w0);
        prop_assert!((t1 - t0).abs() <= 1e-15);
        prop_assert_eq!(w1, w0);
        let original = Quaternion::exp_unit(theta, omega);
        prop_assert!((Quaternion::exp_unit(t0, w0) - original).norm() <= 1e-12);
    }

    #[test]
    fn symplectic_fold_reconstructs(v in -50.0..50.0f64, phi in -10.0..10.0f64, psi in -10.0..10.0f64) {
        let a = fold_angle_symplectic(v, phi, psi);
        prop_assert!((0.0..=PI / 2.0).contains(&a.vartheta));
        let lhs = symplectic_quaternion(1.0, a.vartheta, a.phi, a.psi);
        prop_assert!((lhs - symplectic_quaternion(1.0, v, phi, psi)).norm() <= 1e-12);
    }

    #[test]
    fn omega_is_a_unit_imaginary(u in unit3(), tilt in 0.0..1.5f64, rate in 0.5..3.0f64) {
        let omega = OmegaFamily::Precessing { axis: u, tilt, rate };
        let p = Curve::new(Interval::new(0.0, TAU).unwrap(), move |t| {
            Quaternion::real(3.0 * t.cos()) + omega.eval(t).scale(1.5 + t.sin())
        });
        let w = omega_of(&p).unwrap();
        for t in p.domain().linspace(64) {
            let v = w.eval(t);
            prop_assert!(v.scalar().abs() <= 1e-12);
            prop_assert!((v.norm() - 1.0).abs() <= 1e-10);
            prop_assert!((v - omega.eval(t)).norm() <= 1e-10);
        }
    }

    #[test]
    fn omega_identities_analytic(u in unit3(), tilt in 0.0..1.5f64, rate in 0.5..3.0f64) {
        let omega = OmegaFamily::Precessing { axis: u, tilt, rate };
        let x = Curve::new(Interval::new(0.0, TAU).unwrap(), move |t| omega.eval(t).scale(2.0 + t.sin()))
            .with_derivative(move |t| {
                let (w, dw, _) = omega.jet(t);
                w.scale(t.cos()) + dw.scale(2.0 + t.sin())
            })
            .with_second_derivative(move |t| {
                let (w, dw, ddw) = omega.jet(t);
                w.scale(-t.sin()) + dw.scale(2.0 * t.cos()) + ddw.scale(2.0 + t.sin())
            });
        let r = check_omega_identities(&x, &x.domain().linspace(200)).unwrap();
        prop_assert!(r.max_residual() < 1e-8, "{:?}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn translation_invariance(k in 1i32..4, u in unit3(), c in quat(), wobble in 0.0..0.5f64) {
        let q = slice_curve(u, Quaternion::ZERO, k as f64, wobble);
        let p0 = constant(q.domain(), Quaternion::ZERO);
        let base = winding_number(&q, &p0, &quick()).unwrap().turns;
        let moved = winding_number(&q.translated(c), &p0.translated(c), &quick()).unwrap().turns;
        prop_assert_eq!(base, moved);
    }

    #[test]
    fn positive_scale_invariance(k in 1i32..4, u in unit3(), lambda in 0.01..100.0f64) {
        let q = slice_curve(u, Quaternion::ZERO, k as f64, 0.3);
        let p0 = constant(q.domain(), Quaternion::ZERO);
        let base = winding_number(&q, &p0, &quick()).unwrap().turns;
        let scaled = winding_number(&q.scaled(lambda), &p0.scaled(lambda), &quick()).unwrap().turns;
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn negative_scale_invariance_with_fixed_orientation(k in 1i32..4, u in unit3(), lambda in -100.0..-0.01f64) {
        let q = slice_curve(u, Quaternion::ZERO, k as f64, 0.3);
        let p0 = constant(q.domain(), Quaternion::ZERO);
        let w = Quaternion::pure(u);
        let base = winding_number_oriented(&q, &p0, &quick(), w).unwrap().turns;
        let scaled = winding_number_oriented(&q.scaled(lambda), &p0.scaled(lambda), &quick(), w).unwrap().turns;
        prop_assert_eq!(base, scaled);
    }

    #[test]
    fn residual_is_small_on_spirals(n in 1u32..4, u in unit3(), tilt in 0.0..1.2f64) {
        let (q, p0) = circle_spiral(1.0, n, OmegaFamily::Precessing { axis: u, tilt, rate: 1.0 }).unwrap();
        let w = winding_number(&q, &p0, &QuadratureConfig::default()).unwrap();
        prop_assert!(w.residual < 1e-3);
        prop_assert_eq!(w.turns, n as i64);
    }

    #[test]
    fn no_false_certification(u in unit3(), r in 0.1..3.0f64, k in 1i32..3, shift in -2.0..2.0f64) {
        let p = circle(Quaternion::ZERO, 1.0, u, 1.0, 0.0).unwrap();
        let q = circle(Quaternion::real(shift), r, u, k as f64, 0.0).unwrap();
        let p0 = constant(p.domain(), Quaternion::ZERO);
        prop_assume!(q.min_norm(2048) > 1e-3);
        let rouche = rouche_check(&p, &q, &p0, 2048, &quick()).unwrap();
        let pb = poincare_bohl_check(&p, &q, &p0, 2048, &quick()).unwrap();
        if !rouche.hypothesis_holds {
            prop_assert_eq!(rouche.conclusion, None);
        }
        if !pb.segments_clear {
            prop_assert_eq!(pb.conclusion, None);
        }
        if rouche.hypothesis_holds {
            prop_assert!(pb.segments_clear);
        }
    }

    #[test]
    fn slice_closure(coeffs in prop::collection::vec(-5.0..5.0f64, 2..7), u in unit3(), x in -3.0..3.0f64, y in -3.0..3.0f64) {
        prop_assume!(coeffs[0].abs() > 1e-3);
        let f = RealPolynomial::new(coeffs, Quaternion::ZERO).unwrap();
        let slice = SlicePlane::new(u).unwrap();
        let v = f.evaluate(slice.point(x, y));
        prop_assert!(slice.off_slice(v) <= 1e-10 * f.coefficient_scale(slice.point(x, y)));
    }
}
