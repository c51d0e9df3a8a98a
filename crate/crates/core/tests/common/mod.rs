//! Independent reference computations shared by the integration tests.
//! Nothing here calls into the winding or root-finding code under test.

#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use qwind::curve::SampledCurve;
use qwind::{Curve, Interval, Quaternion};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Hamilton product through the left-multiplication matrix of `p`.
pub fn matrix_product(p: Quaternion, q: Quaternion) -> Quaternion {
    let [a, b, c, d] = p.to_array();
    let m = [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]];
    let v = q.to_array();
    let mut out = [0.0; 4];
    for (r, row) in m.iter().enumerate() {
        out[r] = row.iter().zip(&v).map(|(x, y)| x * y).sum();
    }
    Quaternion::from_array(out)
}

/// Winding of a closed polygon around 0 by summing principal arguments of
/// consecutive vertex ratios. Exact when no edge passes through 0.
pub fn polygon_winding(vertices: &[Complex64]) -> i64 {
    let n = vertices.len();
    let total: f64 = (0..n).map(|k| (vertices[(k + 1) % n] / vertices[k]).arg()).sum();
    (total / TAU).round() as i64
}

/// Argument summation on `n` uniform samples of a closed curve. Panics when
/// consecutive samples turn by more than π/2, which would make the count
/// ambiguous.
pub fn sampled_winding(f: impl Fn(f64) -> Complex64, a: f64, b: f64, n: usize) -> i64 {
    let mut total = 0.0;
    let mut prev = f(a);
    for k in 1..=n {
        let z = f(a + (b - a) * k as f64 / n as f64);
        let d = (z / prev).arg();
        assert!(d.abs() < PI / 2.0, "oracle sampling too coarse");
        total += d;
        prev = z;
    }
    (total / TAU).round() as i64
}

/// Minimum distance from 0 to the edges of a closed polygon.
pub fn polygon_clearance(vertices: &[Complex64]) -> f64 {
    let n = vertices.len();
    (0..n)
        .map(|k| {
            let (a, b) = (vertices[k], vertices[(k + 1) % n]);
            let d = b - a;
            let s = (-(a.re * d.re + a.im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
            (a + d * s).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn lift(z: Complex64, u: Quaternion) -> Quaternion {
    Quaternion::real(z.re) + u.scale(z.im)
}

pub fn random_unit(rng: &mut ChaCha8Rng) -> Quaternion {
    loop {
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if n2 > 1e-2 && n2 <= 1.0 {
            let n = n2.sqrt();
            return Quaternion::pure([v[0] / n, v[1] / n, v[2] / n]);
        }
    }
}

/// Closed random polygon around 0 that may wind several times either way.
pub fn random_polygon(rng: &mut ChaCha8Rng) -> Vec<Complex64> {
    loop {
        let n = rng.gen_range(5..40);
        let drift = rng.gen_range(-0.6..1.2) * TAU / n as f64 * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let mut angle = 0.0f64;
        let vertices: Vec<Complex64> = (0..n)
            .map(|_| {
                angle += drift + rng.gen_range(-0.5..0.5);
                Complex64::from_polar(rng.gen_range(0.3..3.0), angle)
            })
            .collect();
        if polygon_clearance(&vertices) > 0.05 {
            return vertices;
        }
    }
}

/// The polygon as a curve on `[0, n]` in the slice of `u`.
pub fn polygon_curve(vertices: &[Complex64], u: Quaternion) -> Curve {
    let n = vertices.len();
    let points = (0..=n).map(|k| (k as f64, lift(vertices[k % n], u))).collect();
    SampledCurve::new(points).expect("increasing knots").into_curve()
}

/// `Σ c_m e^{imt}` with a few random modes; returned as (mode, coefficient).
pub fn random_trig(rng: &mut ChaCha8Rng) -> Vec<(i32, Complex64)> {
    loop {
        let modes: Vec<(i32, Complex64)> = (0..rng.gen_range(1..5))
            .map(|_| {
                let m = rng.gen_range(-4..=4);
                (m, Complex64::from_polar(rng.gen_range(0.1..2.0), rng.gen_range(0.0..TAU)))
            })
            .collect();
        let f = trig_eval(&modes);
        let clearance = (0..4096).map(|k| f(TAU * k as f64 / 4096.0).norm()).fold(f64::INFINITY, f64::min);
        if clearance > 0.05 {
            return modes;
        }
    }
}

pub fn trig_eval(modes: &[(i32, Complex64)]) -> impl Fn(f64) -> Complex64 + Clone + Send + Sync + 'static {
    let modes = modes.to_vec();
    move |t| modes.iter().map(|(m, c)| c * Complex64::from_polar(1.0, *m as f64 * t)).sum()
}

pub fn trig_curve(modes: &[(i32, Complex64)], u: Quaternion) -> Curve {
    let f = trig_eval(modes);
    let g = modes.to_vec();
    Curve::new(Interval::new(0.0, TAU).unwrap(), move |t| lift(f(t), u)).with_derivative(move |t| {
        let d: Complex64 = g
            .iter()
            .map(|(m, c)| c * Complex64::new(0.0, *m as f64) * Complex64::from_polar(1.0, *m as f64 * t))
            .sum();
        lift(d, u)
    })
}

fn horner(coeffs: &[f64], z: Complex64) -> Complex64 {
    coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

/// Complex roots of a real polynomial (descending coefficients) by
/// Durand–Kerner, each with an inclusion radius `n·|p(z)| / |a_n Π (z − z_j)|`.
pub fn durand_kerner(coeffs: &[f64]) -> Vec<(Complex64, f64)> {
    let n = coeffs.len() - 1;
    let lead = coeffs[0];
    let bound = 1.0 + coeffs[1..].iter().map(|c| (c / lead).abs()).fold(0.0, f64::max);
    let seed = Complex64::from_polar(0.9 * bound, 0.4);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1) / bound.powi(k as i32)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for k in 0..n {
            let denom: Complex64 = (0..n).filter(|&j| j != k).map(|j| z[k] - z[j]).product::<Complex64>() * lead;
            let step = horner(coeffs, z[k]) / denom;
            if step.is_finite() {
                z[k] -= step;
                delta = delta.max(step.norm());
            }
        }
        if delta < 1e-15 * bound {
            break;
        }
    }
    (0..n)
        .map(|k| {
            let denom: Complex64 = (0..n).filter(|&j| j != k).map(|j| z[k] - z[j]).product::<Complex64>() * lead;
            let w = (horner(coeffs, z[k]) / denom).norm() * n as f64;
            (z[k], if w.is_finite() { w } else { f64::INFINITY })
        })
        .collect()
}
