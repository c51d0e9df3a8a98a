//! Polar angular functions and winding numbers of closed quaternionic curves.
//!
//! For a curve `q` and a reference curve `p0` the difference `p = q − p0` is
//! written as `|p|(cos θ + ω sin θ)`. The angular function is the running
//! integral of `⟨p ω, p′⟩ / |p|²`, which equals `θ′` pointwise.
//!
//! The imaginary unit `ω(t)` is the polar unit of `p(t)` up to sign. Keeping
//! the canonical sign (`sin θ ≥ 0`) everywhere would fold θ back into `[0, π]`
//! and the integral over a closed curve would always vanish. Instead the sign
//! is chosen continuously along the curve: whenever `p` crosses the real axis
//! the frame keeps its direction and `θ` leaves `[0, π]`, which is exactly the
//! `θ → π − θ`, `ω → −ω` reflection applied segment by segment. The unwrapped
//! angle then accumulates `2π` per turn.
//!
//! The starting sign is the canonical one at `t = a` (the direction in which the
//! vector part grows if `p(a)` is real) unless an orientation is supplied; the
//! sign of a winding number is only meaningful relative to that orientation.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, DEFAULT_VALIDATION_GRID};
use crate::error::{CurveError, WindingError};
use crate::quadrature::{panel_layout, richardson, QuadratureConfig};
use crate::quaternion::{inner, Quaternion};

/// Collision tolerance is `COLLISION_SCALE·(1 + max|q|)`.
pub const COLLISION_SCALE: f64 = 1e-9;
/// Closure tolerance is `CLOSURE_SCALE·(1 + max|q|)`.
pub const CLOSURE_SCALE: f64 = 1e-9;
/// Maximum `|sin(φ − ψ)|` accepted by the symplectic winding number.
pub const PHASE_TOL: f64 = 1e-6;

const SCALE_GRID: usize = 1025;
const MAX_DEPTH: u32 = 24;
/// Vector parts shorter than this fraction of `|p|` count as a real-axis crossing.
const DEGENERATE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindingResult {
    /// Accumulated angle `θ(b)` in radians.
    pub raw_angle: f64,
    pub turns_real: f64,
    pub turns: i64,
    /// `|turns_real − turns|`, in `[0, 0.5]`.
    pub residual: f64,
    pub certified: bool,
    pub samples_used: usize,
    /// `(max |p|, min |p|)` over the integration nodes.
    pub max_min_distance: (f64, f64),
}

impl WindingResult {
    fn from_angle(raw: f64, threshold: f64, samples_used: usize, max: f64, min: f64) -> Self {
        let turns_real = raw / TAU;
        let turns = turns_real.round();
        let residual = (turns_real - turns).abs();
        Self {
            raw_angle: raw,
            turns_real,
            turns: turns as i64,
            residual,
            certified: residual < threshold,
            samples_used,
            max_min_distance: (max, min),
        }
    }
}

/// Running integral `θ(t)` sampled at panel boundaries, with `θ(a) = 0`.
#[derive(Debug, Clone)]
pub struct AngularFunction {
    grid: Vec<(f64, f64)>,
    difference: Curve,
}

impl AngularFunction {
    pub fn grid(&self) -> &[(f64, f64)] {
        &self.grid
    }

    /// The difference curve `p = q − p0`.
    pub fn difference(&self) -> &Curve {
        &self.difference
    }

    pub fn total(&self) -> f64 {
        self.grid.last().map_or(0.0, |(_, th)| *th)
    }

    /// Largest jump between consecutive grid values.
    pub fn max_step(&self) -> f64 {
        self.grid
            .windows(2)
            .map(|w| (w[1].1 - w[0].1).abs())
            .fold(0.0, f64::max)
    }

    /// Linear interpolation between grid values.
    pub fn at(&self, t: f64) -> f64 {
        let k = self.grid.partition_point(|(s, _)| *s <= t);
        if k == 0 {
            return self.grid[0].1;
        }
        if k == self.grid.len() {
            return self.grid[k - 1].1;
        }
        let (t0, a) = self.grid[k - 1];
        let (t1, b) = self.grid[k];
        a + (b - a) * (t - t0) / (t1 - t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Integrand {
    /// `⟨p ω, p′⟩ / |p|²` with the lifted polar unit `ω`.
    Polar,
    /// `⟨p j, p′⟩ / |p|²`.
    Symplectic,
}

#[derive(Debug, Clone, Copy)]
struct Node {
    t: f64,
    p: Quaternion,
    dp: Quaternion,
}

/// Direction of the polar unit at a node, up to sign. At a real-axis crossing
/// the vector part behaves like `(t − t*)·x⃗′`, so the derivative gives the
/// one-sided limit.
fn axis_direction(n: &Node) -> Option<Quaternion> {
    let v = n.p.vector();
    let vn = v.norm();
    if vn > DEGENERATE * n.p.norm() {
        return Some(v.scale(1.0 / vn));
    }
    n.dp.vector().normalized()
}

/// Carry a frame to a new point: the polar unit of `value` (or of the vector
/// part of `velocity` if `value` is real) with the sign closest to `prev`.
pub fn lift_frame(prev: Quaternion, value: Quaternion, velocity: Quaternion) -> Quaternion {
    lift(&Node { t: 0.0, p: value, dp: velocity }, prev)
}

fn lift(n: &Node, prev: Quaternion) -> Quaternion {
    match axis_direction(n) {
        Some(d) if inner(d, prev) < 0.0 => -d,
        Some(d) => d,
        None => prev,
    }
}

struct Pass {
    total: f64,
    points: Vec<(f64, f64)>,
}

struct Integrator<'a> {
    curve: &'a Curve,
    kind: Integrand,
    orientation: Option<Quaternion>,
    collision_tol: f64,
    evals: usize,
    max_abs: f64,
    min_abs: f64,
}

impl<'a> Integrator<'a> {
    fn new(curve: &'a Curve, kind: Integrand, orientation: Option<Quaternion>, collision_tol: f64) -> Self {
        Self {
            curve,
            kind,
            orientation,
            collision_tol,
            evals: 0,
            max_abs: 0.0,
            min_abs: f64::INFINITY,
        }
    }

    /// Node at `t` with the derivative taken at `dt` (differs only at a
    /// breakpoint approached from the left).
    fn node_at(&mut self, t: f64, dt: f64) -> Result<Node, WindingError> {
        let p = self.curve.eval(t);
        let dp = self.curve.derivative(dt);
        if !p.is_finite() || !dp.is_finite() {
            return Err(CurveError::NonFinite { t }.into());
        }
        let n = p.norm();
        self.evals += 1;
        self.max_abs = self.max_abs.max(n);
        self.min_abs = self.min_abs.min(n);
        if n < self.collision_tol {
            return Err(WindingError::CurvesIntersect { t, distance: n });
        }
        Ok(Node { t, p, dp })
    }

    fn node(&mut self, t: f64) -> Result<Node, WindingError> {
        self.node_at(t, t)
    }

    fn value(&self, n: &Node, frame: Quaternion) -> f64 {
        let unit = match self.kind {
            Integrand::Polar => frame,
            Integrand::Symplectic => Quaternion::J,
        };
        inner(n.p * unit, n.dp) / n.p.norm_sqr()
    }

    fn initial_frame(&self, first: &Node) -> Quaternion {
        let dir = axis_direction(first)
            .or_else(|| {
                self.curve
                    .domain()
                    .linspace(SCALE_GRID)
                    .into_iter()
                    .find_map(|t| self.curve.eval(t).vector().normalized())
            })
            .unwrap_or(Quaternion::I);
        match self.orientation {
            Some(o) if inner(dir, o) < 0.0 => -dir,
            _ => dir,
        }
    }

    fn smooth(&self, delta: f64, frames: [Quaternion; 3]) -> bool {
        if delta.abs() >= FRAC_PI_2 {
            return false;
        }
        self.kind == Integrand::Symplectic
            || (inner(frames[0], frames[1]) >= FRAC_1_SQRT_2
                && inner(frames[1], frames[2]) >= FRAC_1_SQRT_2)
    }

    /// Simpson on one panel, bisecting while the continuity guard trips.
    /// Returns the increment and the frame and integrand value at the right end.
    fn panel(
        &mut self,
        left: Node,
        f_left: f64,
        w_left: Quaternion,
        right: Node,
        depth: u32,
    ) -> Result<(f64, Quaternion, f64), WindingError> {
        let mid = self.node(0.5 * (left.t + right.t))?;
        let w_mid = lift(&mid, w_left);
        let w_right = lift(&right, w_mid);
        let f_mid = self.value(&mid, w_mid);
        let f_right = self.value(&right, w_right);
        let delta = (right.t - left.t) / 6.0 * (f_left + 4.0 * f_mid + f_right);
        if depth >= MAX_DEPTH || self.smooth(delta, [w_left, w_mid, w_right]) {
            return Ok((delta, w_right, f_right));
        }
        let (d1, w1, f1) = self.panel(left, f_left, w_left, mid, depth + 1)?;
        let (d2, w2, f2) = self.panel(mid, f1, w1, right, depth + 1)?;
        Ok((d1 + d2, w2, f2))
    }

    fn pass(&mut self, panels: usize) -> Result<Pass, WindingError> {
        let domain = self.curve.domain();
        let layout = panel_layout(domain, self.curve.breakpoints(), panels);
        let mut left = self.node(domain.a)?;
        let mut frame = self.initial_frame(&left);
        let mut f_left = self.value(&left, frame);
        let mut theta = 0.0;
        let mut points = Vec::with_capacity(panels + layout.len() + 1);
        points.push((domain.a, 0.0));

        let pieces = layout.len();
        for (idx, &(lo, hi, count)) in layout.iter().enumerate() {
            if idx > 0 {
                // derivative from the right at the breakpoint
                left = self.node(lo)?;
                frame = lift(&left, frame);
                f_left = self.value(&left, frame);
            }
            let h = (hi - lo) / count as f64;
            for k in 0..count {
                let last = k + 1 == count;
                let t = if last { hi } else { lo + (k + 1) as f64 * h };
                let right = if last && idx + 1 < pieces {
                    let eps = 1e-9 * h;
                    self.node_at(t, t - eps)?
                } else {
                    self.node(t)?
                };
                let (delta, w, f) = self.panel(left, f_left, frame, right, 0)?;
                theta += delta;
                points.push((t, theta));
                left = right;
                frame = w;
                f_left = f;
            }
        }
        Ok(Pass { total: theta, points })
    }
}

struct Outcome {
    estimate: f64,
    points: Vec<(f64, f64)>,
    evals: usize,
    max_abs: f64,
    min_abs: f64,
}

fn residual_of(angle: f64) -> f64 {
    let x = angle / TAU;
    (x - x.round()).abs()
}

fn integrate(
    p: &Curve,
    kind: Integrand,
    orientation: Option<Quaternion>,
    quad: &QuadratureConfig,
    collision_tol: f64,
    refine: bool,
) -> Result<Outcome, WindingError> {
    let mut integ = Integrator::new(p, kind, orientation, collision_tol);
    let mut panels = quad.panels;
    let first = integ.pass(panels)?;
    let mut coarse = first.total;
    let mut estimate = first.total;
    let mut points = first.points;
    let rounds = if refine { quad.max_refinements } else { 0 };
    for round in 0..rounds {
        if round > 0 && residual_of(estimate) < quad.certification_threshold {
            break;
        }
        panels *= 2;
        let fine = integ.pass(panels)?;
        estimate = if (fine.total - coarse).abs() < PI {
            richardson(coarse, fine.total)
        } else {
            fine.total
        };
        coarse = fine.total;
        points = fine.points;
    }
    Ok(Outcome {
        estimate,
        points,
        evals: integ.evals,
        max_abs: integ.max_abs,
        min_abs: integ.min_abs,
    })
}

/// `max |q|` on the scale grid.
fn curve_scale(q: &Curve) -> f64 {
    q.max_norm(SCALE_GRID)
}

fn check_closed(c: &Curve, which: &'static str, tol: f64) -> Result<(), WindingError> {
    let gap = c.endpoint_gap();
    if !(gap < tol) {
        return Err(WindingError::NotClosed { which, gap });
    }
    Ok(())
}

/// Canonical starting frame of `p`: the polar unit of `p(a)`, or the direction
/// of `x⃗′(a)` when `p(a)` is real.
pub fn start_frame(p: &Curve) -> Quaternion {
    let a = p.domain().a;
    let node = Node { t: a, p: p.eval(a), dp: p.derivative(a) };
    let integ = Integrator::new(p, Integrand::Polar, None, 0.0);
    integ.initial_frame(&node)
}

/// Angular function of `q` around `p0` with the canonical starting orientation.
pub fn angular_function(q: &Curve, p0: &Curve, quad: &QuadratureConfig) -> Result<AngularFunction, WindingError> {
    angular_function_oriented(q, p0, quad, None)
}

/// Angular function; `orientation` fixes the sign of the initial frame
/// (`⟨ω(a), orientation⟩ ≥ 0`).
pub fn angular_function_oriented(
    q: &Curve,
    p0: &Curve,
    quad: &QuadratureConfig,
    orientation: Option<Quaternion>,
) -> Result<AngularFunction, WindingError> {
    quad.validate()?;
    let p = q.difference(p0)?;
    let tol = COLLISION_SCALE * (1.0 + curve_scale(q));
    let out = integrate(&p, Integrand::Polar, orientation, quad, tol, false)?;
    Ok(AngularFunction { grid: out.points, difference: p })
}

/// Winding number `R(q, p0)` with the canonical starting orientation.
pub fn winding_number(q: &Curve, p0: &Curve, quad: &QuadratureConfig) -> Result<WindingResult, WindingError> {
    winding_with_trace(q, p0, quad, None).map(|(r, _)| r)
}

/// Winding number measured with the initial frame oriented along `orientation`.
/// For curves confined to a slice `ℝ + ℝu`, passing `u` gives the classical
/// winding number in the complex coordinate `x0 + i⟨x⃗, u⟩`.
pub fn winding_number_oriented(
    q: &Curve,
    p0: &Curve,
    quad: &QuadratureConfig,
    orientation: Quaternion,
) -> Result<WindingResult, WindingError> {
    winding_with_trace(q, p0, quad, Some(orientation)).map(|(r, _)| r)
}

/// Winding number of `p` around the origin with an explicit collision floor.
/// Used for images whose magnitude spans more orders than the relative floor
/// of [`winding_number`] allows; the angle does not depend on `|p|`.
pub(crate) fn winding_around_origin(
    p: &Curve,
    quad: &QuadratureConfig,
    orientation: Quaternion,
    floor: f64,
) -> Result<WindingResult, WindingError> {
    quad.validate()?;
    check_closed(p, "curve", CLOSURE_SCALE * (1.0 + curve_scale(p)))?;
    let out = integrate(p, Integrand::Polar, Some(orientation), quad, floor, true)?;
    Ok(WindingResult::from_angle(
        out.estimate,
        quad.certification_threshold,
        out.evals,
        out.max_abs,
        out.min_abs,
    ))
}

/// Winding number together with the angular function of the finest pass.
pub fn winding_with_trace(
    q: &Curve,
    p0: &Curve,
    quad: &QuadratureConfig,
    orientation: Option<Quaternion>,
) -> Result<(WindingResult, AngularFunction), WindingError> {
    quad.validate()?;
    let p = q.difference(p0)?;
    let scale = curve_scale(q);
    let tol = CLOSURE_SCALE * (1.0 + scale);
    check_closed(q, "curve", tol)?;
    check_closed(p0, "reference", tol)?;
    let out = integrate(&p, Integrand::Polar, orientation, quad, COLLISION_SCALE * (1.0 + scale), true)?;
    let result = WindingResult::from_angle(
        out.estimate,
        quad.certification_threshold,
        out.evals,
        out.max_abs,
        out.min_abs,
    );
    Ok((result, AngularFunction { grid: out.points, difference: p }))
}

/// Outcome of the far-curve check: `R(p, q)` for a reference `q` and a curve
/// `p` that stays outside the ball containing `q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarCurveReport {
    /// `max |q(t)|`.
    pub rho0: f64,
    /// `min |p(t)|`.
    pub rho: f64,
    /// `rho > rho0`.
    pub hypothesis_holds: bool,
    pub winding: WindingResult,
}

impl FarCurveReport {
    /// False only when the hypothesis holds and the winding is nonzero.
    pub fn consistent(&self) -> bool {
        !self.hypothesis_holds || self.winding.turns == 0
    }
}

pub fn winding_far_curve_check(q: &Curve, p: &Curve, quad: &QuadratureConfig) -> Result<FarCurveReport, WindingError> {
    let grid = (2 * quad.panels + 1).max(SCALE_GRID);
    let rho0 = q.max_norm(grid);
    let rho = p.min_norm(grid);
    let winding = winding_number(p, q, quad)?;
    Ok(FarCurveReport { rho0, rho, hypothesis_holds: rho > rho0, winding })
}

/// `⟨p(t) j, p′(t)⟩ / |p(t)|²`.
///
/// This is an exact angular derivative only under constraints such as
/// `φ = ψ`; in general it also carries a `sin(φ − ψ)(φ + ψ)′` term.
pub fn symplectic_integrand(p: &Curve, t: f64) -> Result<f64, WindingError> {
    let v = p.eval(t);
    let n2 = v.norm_sqr();
    if n2 == 0.0 {
        return Err(WindingError::ZeroCurveValue { t });
    }
    Ok(inner(v * Quaternion::J, p.derivative(t)) / n2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticWinding {
    pub winding: WindingResult,
    /// Accumulated angle in units of `π/2`, rounded: each quarter turn of `ϑ`
    /// sweeps one sector.
    pub quarter_sectors: i64,
}

/// Largest `|sin(φ − ψ)|` on the validation grid, with the `t` where it occurs.
/// Points where one complex component vanishes have no phase and are skipped.
pub fn phase_deviation(p: &Curve) -> (f64, f64) {
    let mut worst = (0.0, p.domain().a);
    for t in p.domain().linspace(DEFAULT_VALIDATION_GRID) {
        let v = p.eval(t);
        let ((a0, b0), (a1, b1)) = v.symplectic_components();
        let m = a0.hypot(b0) * a1.hypot(b1);
        if m <= 1e-12 * v.norm_sqr() {
            continue;
        }
        // Im(z0 conj z1) = |z0||z1| sin(φ − ψ); sign flips of cos ϑ or sin ϑ
        // shift a phase by π and leave it unchanged.
        let dev = (b0 * a1 - a0 * b1).abs() / m;
        if dev > worst.0 {
            worst = (dev, t);
        }
    }
    worst
}

/// Winding number from the symplectic integrand for curves whose difference
/// `p = q − p0` satisfies `φ = ψ`.
pub fn symplectic_winding(q: &Curve, p0: &Curve, quad: &QuadratureConfig) -> Result<SymplecticWinding, WindingError> {
    quad.validate()?;
    let p = q.difference(p0)?;
    let scale = curve_scale(q);
    let tol = CLOSURE_SCALE * (1.0 + scale);
    check_closed(q, "curve", tol)?;
    check_closed(p0, "reference", tol)?;
    let (deviation, t) = phase_deviation(&p);
    if deviation > PHASE_TOL {
        return Err(WindingError::PhaseConstraintViolated { t, deviation });
    }
    let out = integrate(&p, Integrand::Symplectic, None, quad, COLLISION_SCALE * (1.0 + scale), true)?;
    let winding = WindingResult::from_angle(
        out.estimate,
        quad.certification_threshold,
        out.evals,
        out.max_abs,
        out.min_abs,
    );
    Ok(SymplecticWinding {
        winding,
        quarter_sectors: (out.estimate / FRAC_PI_2).round() as i64,
    })
}

/// Running integral of the symplectic integrand.
pub fn symplectic_angular_function(
    q: &Curve,
    p0: &Curve,
    quad: &QuadratureConfig,
) -> Result<AngularFunction, WindingError> {
    quad.validate()?;
    let p = q.difference(p0)?;
    let tol = COLLISION_SCALE * (1.0 + curve_scale(q));
    let out = integrate(&p, Integrand::Symplectic, None, quad, tol, false)?;
    Ok(AngularFunction { grid: out.points, difference: p })
}
