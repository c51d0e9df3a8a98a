//! Built-in analytic curve families, all with analytic derivatives.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::CurveError;
use crate::quaternion::{symplectic_quaternion, Quaternion};

/// A smooth unit pure imaginary function `ω(t)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OmegaFamily {
    /// `ω(t) = u` for a fixed unit vector.
    Constant { axis: [f64; 3] },
    /// `ω(t) = cos β·a + sin β·(cos(m t)·b + sin(m t)·c)` where `(a, b, c)` is a
    /// right-handed frame built around `axis`; `β` is the tilt and `m` the rate.
    Precessing { axis: [f64; 3], tilt: f64, rate: f64 },
}

impl Default for OmegaFamily {
    fn default() -> Self {
        OmegaFamily::Constant { axis: [1.0, 0.0, 0.0] }
    }
}

fn unit3(v: [f64; 3]) -> Result<[f64; 3], CurveError> {
    let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if n == 0.0 || !n.is_finite() {
        return Err(CurveError::InvalidSamples("axis must be a nonzero vector".into()));
    }
    Ok([v[0] / n, v[1] / n, v[2] / n])
}

/// Two unit vectors completing `a` to a right-handed orthonormal frame.
pub fn complete_frame(a: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let seed = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = seed[0] * a[0] + seed[1] * a[1] + seed[2] * a[2];
    let b = [seed[0] - d * a[0], seed[1] - d * a[1], seed[2] - d * a[2]];
    let nb = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    let b = [b[0] / nb, b[1] / nb, b[2] / nb];
    let c = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    (b, c)
}

impl OmegaFamily {
    pub fn validate(&self) -> Result<(), CurveError> {
        match self {
            OmegaFamily::Constant { axis } | OmegaFamily::Precessing { axis, .. } => {
                unit3(*axis).map(|_| ())
            }
        }
    }

    /// `(ω, ω′, ω″)` at `t`.
    pub fn jet(&self, t: f64) -> (Quaternion, Quaternion, Quaternion) {
        match *self {
            OmegaFamily::Constant { axis } => {
                let u = unit3(axis).unwrap_or([1.0, 0.0, 0.0]);
                (Quaternion::pure(u), Quaternion::ZERO, Quaternion::ZERO)
            }
            OmegaFamily::Precessing { axis, tilt, rate } => {
                let a = unit3(axis).unwrap_or([1.0, 0.0, 0.0]);
                let (b, c) = complete_frame(a);
                let (a, b, c) = (Quaternion::pure(a), Quaternion::pure(b), Quaternion::pure(c));
                let (sb, cb) = tilt.sin_cos();
                let (s, co) = (rate * t).sin_cos();
                let w = a.scale(cb) + (b.scale(co) + c.scale(s)).scale(sb);
                let dw = (b.scale(-s) + c.scale(co)).scale(sb * rate);
                let ddw = (b.scale(co) + c.scale(s)).scale(-sb * rate * rate);
                (w, dw, ddw)
            }
        }
    }

    pub fn eval(&self, t: f64) -> Quaternion {
        self.jet(t).0
    }
}

fn spiral_domain(turns: u32) -> Result<Interval, CurveError> {
    if turns == 0 {
        return Err(CurveError::InvalidSamples("turns must be at least 1".into()));
    }
    Interval::new(0.0, TAU * turns as f64)
}

/// Spiral around the moving center `R·ω(t)`:
/// `q(t) = R ω(t) + R(cos t + ω(t) sin t)`, `t ∈ [0, 2nπ]`.
///
/// Returns `(q, p0)` with `p0(t) = R ω(t)`. The difference `q − p0` sweeps `n`
/// full turns in the moving plane `ℝ + ℝω(t)`.
pub fn circle_spiral(radius: f64, turns: u32, omega: OmegaFamily) -> Result<(Curve, Curve), CurveError> {
    omega.validate()?;
    let domain = spiral_domain(turns)?;
    let r = radius;
    let q = Curve::new(domain, move |t| {
        let (w, _, _) = omega.jet(t);
        let (s, c) = t.sin_cos();
        w.scale(r) + (Quaternion::real(c) + w.scale(s)).scale(r)
    })
    .with_derivative(move |t| {
        let (w, dw, _) = omega.jet(t);
        let (s, c) = t.sin_cos();
        dw.scale(r) + (Quaternion::real(-s) + w.scale(c) + dw.scale(s)).scale(r)
    })
    .with_second_derivative(move |t| {
        let (w, dw, ddw) = omega.jet(t);
        let (s, c) = t.sin_cos();
        ddw.scale(r)
            + (Quaternion::real(-c) - w.scale(s) + dw.scale(2.0 * c) + ddw.scale(s)).scale(r)
    });
    Ok((q, spiral_center(radius, domain, omega)))
}

/// The moving center `R ω(t)` on `domain`.
pub fn spiral_center(radius: f64, domain: Interval, omega: OmegaFamily) -> Curve {
    Curve::new(domain, move |t| omega.eval(t).scale(radius))
        .with_derivative(move |t| omega.jet(t).1.scale(radius))
        .with_second_derivative(move |t| omega.jet(t).2.scale(radius))
}

/// Phase laws `φ(t) = phase + rate·t`, `ψ(t) = φ(t) + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseLaw {
    #[serde(default)]
    pub phase: f64,
    #[serde(default)]
    pub rate: f64,
    #[serde(default)]
    pub offset: f64,
}

impl Default for PhaseLaw {
    fn default() -> Self {
        PhaseLaw { phase: 0.0, rate: 0.0, offset: 0.0 }
    }
}

impl PhaseLaw {
    fn phi(&self, t: f64) -> f64 {
        self.phase + self.rate * t
    }

    fn psi(&self, t: f64) -> f64 {
        self.phi(t) + self.offset
    }
}

/// `d/dt ρ(cos ϑ e^{iφ} + sin ϑ e^{iψ} j)` for constant `ρ`.
pub fn symplectic_velocity(rho: f64, th: (f64, f64), phi: (f64, f64), psi: (f64, f64)) -> Quaternion {
    let (sv, cv) = th.0.sin_cos();
    let (sp, cp) = phi.0.sin_cos();
    let (ss, cs) = psi.0.sin_cos();
    Quaternion::new(
        -sv * th.1 * cp - cv * sp * phi.1,
        -sv * th.1 * sp + cv * cp * phi.1,
        cv * th.1 * cs - sv * ss * psi.1,
        cv * th.1 * ss + sv * cs * psi.1,
    )
    .scale(rho)
}

/// Symplectic spiral `q(t) = R(e^{iφ} + e^{iψ} j) + R(cos ϑ e^{iφ} + sin ϑ e^{iψ} j)`
/// with `ϑ(t) = t ∈ [0, 2nπ]`.
///
/// Returns `(q, p0)` with `p0(t) = R(e^{iφ} + e^{iψ} j)`.
pub fn symplectic_spiral(radius: f64, turns: u32, law: PhaseLaw) -> Result<(Curve, Curve), CurveError> {
    let domain = spiral_domain(turns)?;
    let p0 = symplectic_center(radius, domain, law);
    let r = radius;
    let offset_curve = Curve::new(domain, move |t| symplectic_quaternion(r, t, law.phi(t), law.psi(t)))
        .with_derivative(move |t| {
            symplectic_velocity(r, (t, 1.0), (law.phi(t), law.rate), (law.psi(t), law.rate))
        });
    let q = Curve::linear_combination(&[(1.0, &p0), (1.0, &offset_curve)])?;
    Ok((q, p0))
}

/// The moving center `R(e^{iφ} + e^{iψ} j)`.
pub fn symplectic_center(radius: f64, domain: Interval, law: PhaseLaw) -> Curve {
    let r = radius;
    Curve::new(domain, move |t| {
        let (sp, cp) = law.phi(t).sin_cos();
        let (ss, cs) = law.psi(t).sin_cos();
        Quaternion::new(cp, sp, cs, ss).scale(r)
    })
    .with_derivative(move |t| {
        let (sp, cp) = law.phi(t).sin_cos();
        let (ss, cs) = law.psi(t).sin_cos();
        Quaternion::new(-sp, cp, -ss, cs).scale(r * law.rate)
    })
}

/// `c + r(cos(k t + s) + u sin(k t + s))` on `[0, 2π]`: a circle in the slice
/// `c + (ℝ + ℝu)` traversed `k` times.
pub fn circle(
    center: Quaternion,
    radius: f64,
    axis: [f64; 3],
    turns: f64,
    start: f64,
) -> Result<Curve, CurveError> {
    let u = Quaternion::pure(unit3(axis)?);
    let domain = Interval::new(0.0, TAU)?;
    let k = turns;
    Ok(Curve::new(domain, move |t| {
        center + Quaternion::exp_unit(k * t + start, u).scale(radius)
    })
    .with_derivative(move |t| {
        let (s, c) = (k * t + start).sin_cos();
        (Quaternion::real(-s) + u.scale(c)).scale(radius * k)
    })
    .with_second_derivative(move |t| {
        let (s, c) = (k * t + start).sin_cos();
        (Quaternion::real(-c) - u.scale(s)).scale(radius * k * k)
    }))
}

/// `start + t·velocity`.
pub fn line(domain: Interval, start: Quaternion, velocity: Quaternion) -> Curve {
    Curve::new(domain, move |t| start + velocity.scale(t))
        .with_derivative(move |_| velocity)
        .with_second_derivative(|_| Quaternion::ZERO)
}

/// `Σ cₖ tᵏ` with quaternion coefficients in ascending powers.
pub fn polynomial_in_t(domain: Interval, coeffs: Vec<Quaternion>) -> Curve {
    let eval = |cs: &[Quaternion], t: f64| cs.iter().rev().fold(Quaternion::ZERO, |acc, c| acc.scale(t) + *c);
    let d1: Vec<Quaternion> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(k as f64))
        .collect();
    let d2: Vec<Quaternion> = d1
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c.scale(k as f64))
        .collect();
    Curve::new(domain, move |t| eval(&coeffs, t))
        .with_derivative(move |t| eval(&d1, t))
        .with_second_derivative(move |t| eval(&d2, t))
}
