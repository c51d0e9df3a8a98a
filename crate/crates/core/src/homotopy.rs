//! Deformations of closed curves and the winding-number criteria built on them.
//!
//! Winding numbers along a family are compared with a common orientation: the
//! starting frame at `t = a` is carried from one member to the next with
//! [`lift_frame`], so a family that never meets its reference produces the same
//! signed integer throughout.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::{HomotopyError, WindingError};
use crate::quadrature::QuadratureConfig;
use crate::quaternion::Quaternion;
use crate::winding::{lift_frame, start_frame, winding_number_oriented, WindingResult, COLLISION_SCALE};

/// Number of α intervals used by [`default_alphas`].
pub const DEFAULT_ALPHA_INTERVALS: usize = 64;
/// Segment-parameter nodes used to carry a frame from `p` to `q`.
pub const SEGMENT_SUBGRID: usize = 32;
/// Default number of `t` intervals for the segment and Rouché predicates.
pub const DEFAULT_PREDICATE_GRID: usize = 4096;

const BISECTION_STEPS: usize = 60;
const WITNESS_GRID: usize = 8193;

pub type CurveFamily = Arc<dyn Fn(f64) -> Curve + Send + Sync>;

/// A family `α ↦ p(α, ·)` of curves over a common domain, `α ∈ J`.
#[derive(Clone)]
pub struct Deformation {
    domain: Interval,
    alphas: Interval,
    family: CurveFamily,
}

impl fmt::Debug for Deformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Deformation")
            .field("domain", &self.domain)
            .field("alphas", &self.alphas)
            .finish()
    }
}

impl Deformation {
    /// `family(α)` must return a curve on `domain` for every `α` in `alphas`.
    pub fn new<F>(domain: Interval, alphas: Interval, family: F) -> Result<Self, HomotopyError>
    where
        F: Fn(f64) -> Curve + Send + Sync + 'static,
    {
        if !alphas.contains(0.0) {
            return Err(HomotopyError::InvalidDeformation(format!(
                "alpha range [{}, {}] does not contain 0",
                alphas.a, alphas.b
            )));
        }
        Ok(Self { domain, alphas, family: Arc::new(family) })
    }

    /// Deformation given pointwise by `(α, t) ↦ f(α, t)`; `t`-derivatives are
    /// taken by finite differences.
    pub fn from_map<F>(domain: Interval, alphas: Interval, f: F) -> Result<Self, HomotopyError>
    where
        F: Fn(f64, f64) -> Quaternion + Send + Sync + 'static,
    {
        let f = Arc::new(f);
        Self::new(domain, alphas, move |alpha| {
            let f = f.clone();
            Curve::new(domain, move |t| f(alpha, t))
        })
    }

    /// The constant family `p(α, ·) = c`.
    pub fn stationary(curve: &Curve, alphas: Interval) -> Result<Self, HomotopyError> {
        let c = curve.clone();
        Self::new(curve.domain(), alphas, move |_| c.clone())
    }

    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn alpha_range(&self) -> Interval {
        self.alphas
    }

    pub fn at(&self, alpha: f64) -> Curve {
        (self.family)(alpha)
    }

    pub fn eval(&self, alpha: f64, t: f64) -> Quaternion {
        self.at(alpha).eval(t)
    }

    /// `max_t |p(0, t) − q(t)|` on a grid of `grid` points.
    pub fn base_deviation(&self, q: &Curve, grid: usize) -> f64 {
        let base = self.at(0.0);
        self.domain
            .linspace(grid)
            .into_iter()
            .map(|t| (base.eval(t) - q.eval(t)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest endpoint gap `|p(α, b) − p(α, a)|` over `alphas`.
    pub fn max_closure_gap(&self, alphas: &[f64]) -> f64 {
        alphas.iter().map(|&a| self.at(a).endpoint_gap()).fold(0.0, f64::max)
    }
}

/// A deformation over `J = [0, 1]` joining `h(0, ·)` to `h(1, ·)`.
#[derive(Debug, Clone)]
pub struct Homotopy {
    deformation: Deformation,
}

impl Homotopy {
    pub fn new<F>(domain: Interval, family: F) -> Self
    where
        F: Fn(f64) -> Curve + Send + Sync + 'static,
    {
        let unit = Interval { a: 0.0, b: 1.0 };
        Self { deformation: Deformation::new(domain, unit, family).expect("[0, 1] contains 0") }
    }

    pub fn deformation(&self) -> &Deformation {
        &self.deformation
    }

    pub fn start(&self) -> Curve {
        self.deformation.at(0.0)
    }

    pub fn end(&self) -> Curve {
        self.deformation.at(1.0)
    }

    /// Largest deviation of the endpoint curves from `p` and `q` on the grid.
    pub fn endpoint_deviation(&self, p: &Curve, q: &Curve, grid: usize) -> f64 {
        let (h0, h1) = (self.start(), self.end());
        self.deformation
            .domain
            .linspace(grid)
            .into_iter()
            .map(|t| (h0.eval(t) - p.eval(t)).norm().max((h1.eval(t) - q.eval(t)).norm()))
            .fold(0.0, f64::max)
    }
}

impl From<Homotopy> for Deformation {
    fn from(h: Homotopy) -> Self {
        h.deformation
    }
}

/// `h(α, t) = α·q(t) + (1 − α)·p(t)`.
pub fn linear_homotopy(p: &Curve, q: &Curve) -> Result<Homotopy, HomotopyError> {
    // validates the shared domain once
    p.difference(q)?;
    let (p, q) = (p.clone(), q.clone());
    Ok(Homotopy::new(p.domain(), move |alpha| {
        if alpha == 0.0 {
            return p.clone();
        }
        if alpha == 1.0 {
            return q.clone();
        }
        Curve::linear_combination(&[(alpha, &q), (1.0 - alpha, &p)]).expect("shared domain")
    }))
}

/// `intervals + 1` uniform samples of the α range, endpoints included.
pub fn default_alphas(range: Interval) -> Vec<f64> {
    range.linspace(DEFAULT_ALPHA_INTERVALS + 1)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    pub alphas: Vec<f64>,
    pub turns: Vec<i64>,
    pub residuals: Vec<f64>,
    pub raw_angles: Vec<f64>,
    /// Distinct winding numbers, ascending.
    pub distinct_turns: Vec<i64>,
    /// Largest change of the total angle between adjacent α samples.
    pub max_adjacent_jump: f64,
    /// `max_adjacent_jump < 2π·threshold`.
    pub continuous: bool,
    /// One winding number, every result certified.
    pub pass: bool,
}

fn with_alpha(e: WindingError, alpha: f64) -> HomotopyError {
    match e {
        WindingError::CurvesIntersect { t, distance } => HomotopyError::CurvesIntersect { alpha, t, distance },
        other => HomotopyError::Winding(other),
    }
}

struct Member {
    frame: Quaternion,
    result: WindingResult,
}

fn member(
    d: &Deformation,
    reference: &Deformation,
    alpha: f64,
    prev: Option<Quaternion>,
    quad: &QuadratureConfig,
) -> Result<Member, HomotopyError> {
    let q = d.at(alpha);
    let p0 = reference.at(alpha);
    let p = q.difference(&p0)?;
    let a = p.domain().a;
    let frame = match prev {
        None => start_frame(&p),
        Some(f) => lift_frame(f, p.eval(a), p.derivative(a)),
    };
    let result = winding_number_oriented(&q, &p0, quad, frame).map_err(|e| with_alpha(e, alpha))?;
    Ok(Member { frame, result })
}

/// Narrow down an α interval across which the winding number changes and
/// return the near-intersection it implies, if the curves come close enough
/// there to confirm it.
fn locate_crossing(
    d: &Deformation,
    reference: &Deformation,
    mut lo: f64,
    mut hi: f64,
    mut frame: Quaternion,
    turns: i64,
    quad: &QuadratureConfig,
) -> Result<Option<HomotopyError>, HomotopyError> {
    for _ in 0..BISECTION_STEPS {
        if hi - lo <= 1e-13 * (1.0 + lo.abs()) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match member(d, reference, mid, Some(frame), quad) {
            Ok(m) if m.result.turns == turns => {
                lo = mid;
                frame = m.frame;
            }
            Ok(_) => hi = mid,
            Err(e @ HomotopyError::CurvesIntersect { .. }) => return Ok(Some(e)),
            Err(e) => return Err(e),
        }
    }
    let alpha = 0.5 * (lo + hi);
    let q = d.at(alpha);
    let p = q.difference(&reference.at(alpha))?;
    let (t, distance) = p
        .domain()
        .linspace(WITNESS_GRID)
        .into_iter()
        .map(|t| (t, p.eval(t).norm()))
        .fold((p.domain().a, f64::INFINITY), |best, x| if x.1 < best.1 { x } else { best });
    let scale = 1.0 + q.max_norm(WITNESS_GRID);
    if distance < 1e-6 * scale {
        Ok(Some(HomotopyError::CurvesIntersect { alpha, t, distance }))
    } else {
        Ok(None)
    }
}

/// Winding numbers of `d(α, ·)` around `reference(α, ·)` over the sampled α.
///
/// A change of winding number between adjacent samples is traced back to the
/// α where the curves meet and reported as `CurvesIntersect`. If no such point
/// can be confirmed the report is returned with `pass = false`.
pub fn invariance_check(
    d: &Deformation,
    reference: &Deformation,
    alphas: &[f64],
    quad: &QuadratureConfig,
) -> Result<InvarianceReport, HomotopyError> {
    quad.validate()?;
    if !d.domain.matches(&reference.domain) {
        return Err(d.domain.mismatch(&reference.domain).into());
    }
    if alphas.is_empty() {
        return Err(HomotopyError::InvalidDeformation("no alpha samples".into()));
    }
    let range = d.alphas;
    if let Some(a) = alphas.iter().find(|a| !a.is_finite() || !range.contains(**a)) {
        return Err(HomotopyError::InvalidDeformation(format!(
            "alpha {a} outside [{}, {}]",
            range.a, range.b
        )));
    }
    let mut sorted = alphas.to_vec();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();

    let mut members: Vec<Member> = Vec::with_capacity(sorted.len());
    for (k, &alpha) in sorted.iter().enumerate() {
        let prev = members.last().map(|m| m.frame);
        let m = member(d, reference, alpha, prev, quad)?;
        if let Some(last) = members.last() {
            if last.result.turns != m.result.turns {
                let crossing = locate_crossing(
                    d,
                    reference,
                    sorted[k - 1],
                    alpha,
                    last.frame,
                    last.result.turns,
                    quad,
                )?;
                if let Some(e) = crossing {
                    return Err(e);
                }
            }
        }
        members.push(m);
    }

    let turns: Vec<i64> = members.iter().map(|m| m.result.turns).collect();
    let raw_angles: Vec<f64> = members.iter().map(|m| m.result.raw_angle).collect();
    let mut distinct_turns = turns.clone();
    distinct_turns.sort_unstable();
    distinct_turns.dedup();
    let max_adjacent_jump = raw_angles
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let certified = members.iter().all(|m| m.result.certified);
    Ok(InvarianceReport {
        residuals: members.iter().map(|m| m.result.residual).collect(),
        continuous: max_adjacent_jump < TAU * quad.certification_threshold,
        pass: distinct_turns.len() == 1 && certified,
        alphas: sorted,
        turns,
        raw_angles,
        distinct_turns,
        max_adjacent_jump,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PoincareBohlReport {
    /// No segment `[p(t), q(t)]` meets `p0(t)`, with a margin covering the
    /// motion between grid nodes.
    pub segments_clear: bool,
    /// `min_t dist(p0(t), [p(t), q(t)])` over the grid nodes.
    pub min_segment_distance: f64,
    pub rp: WindingResult,
    pub rq: WindingResult,
    /// `Some(R(p, p0) = R(q, p0))` when the segments are clear, `None` otherwise.
    pub conclusion: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoucheReport {
    /// `|p − q| < |q − p0|` and `|p − q| < |p − p0|` at every grid node.
    pub hypothesis_holds: bool,
    /// `min_t (min(|q − p0|, |p − p0|) − |p − q|)`.
    pub margin: f64,
    pub rp: WindingResult,
    pub rq: WindingResult,
    /// `Some(R(p, p0) = R(q, p0))` when the hypothesis holds, `None` otherwise.
    pub conclusion: Option<bool>,
}

/// Distance from the origin to the segment `[a, b]`.
fn segment_distance(a: Quaternion, b: Quaternion) -> f64 {
    let d = b - a;
    let dd = d.norm_sqr();
    if dd == 0.0 {
        return a.norm();
    }
    let s = (-a.inner(d) / dd).clamp(0.0, 1.0);
    (a + d.scale(s)).norm()
}

fn shared_domain(p: &Curve, q: &Curve, p0: &Curve) -> Result<Interval, HomotopyError> {
    let d = p.domain();
    for c in [q, p0] {
        if !d.matches(&c.domain()) {
            return Err(d.mismatch(&c.domain()).into());
        }
    }
    Ok(d)
}

/// Winding numbers of `p` and `q` around `p0`, with the frame of `q` obtained
/// by carrying the frame of `p` along the segment at `t = a`.
fn paired_windings(
    p: &Curve,
    q: &Curve,
    p0: &Curve,
    quad: &QuadratureConfig,
) -> Result<(WindingResult, WindingResult), HomotopyError> {
    let a = p.domain().a;
    let dp = p.difference(p0)?;
    let dq = q.difference(p0)?;
    let (va, vb) = (dp.eval(a), dq.eval(a));
    let (wa, wb) = (dp.derivative(a), dq.derivative(a));
    let frame_p = start_frame(&dp);
    let mut frame = frame_p;
    for k in 1..=SEGMENT_SUBGRID {
        let s = k as f64 / SEGMENT_SUBGRID as f64;
        frame = lift_frame(frame, va.scale(1.0 - s) + vb.scale(s), wa.scale(1.0 - s) + wb.scale(s));
    }
    let rp = winding_number_oriented(p, p0, quad, frame_p)?;
    let rq = winding_number_oriented(q, p0, quad, frame)?;
    Ok((rp, rq))
}

fn predicate_tol(p: &Curve, q: &Curve, grid: usize) -> f64 {
    COLLISION_SCALE * (1.0 + p.max_norm(grid + 1).max(q.max_norm(grid + 1)))
}

/// Poincaré–Bohl test: if `p0(t)` avoids every segment joining `p(t)` to
/// `q(t)`, the linear homotopy between them never meets `p0` and the two
/// winding numbers agree.
pub fn poincare_bohl_check(
    p: &Curve,
    q: &Curve,
    p0: &Curve,
    grid: usize,
    quad: &QuadratureConfig,
) -> Result<PoincareBohlReport, HomotopyError> {
    let domain = shared_domain(p, q, p0)?;
    if grid == 0 {
        return Err(HomotopyError::InvalidDeformation("grid must be positive".into()));
    }
    let tol = predicate_tol(p, q, grid);
    let nodes: Vec<(Quaternion, Quaternion, Quaternion)> = domain
        .linspace(grid + 1)
        .into_iter()
        .map(|t| (p.eval(t), q.eval(t), p0.eval(t)))
        .collect();
    let dist: Vec<f64> = nodes.iter().map(|(x, y, z)| segment_distance(*x - *z, *y - *z)).collect();
    let min_segment_distance = dist.iter().copied().fold(f64::INFINITY, f64::min);
    let segments_clear = nodes.windows(2).zip(dist.windows(2)).all(|(n, d)| {
        let motion = (n[1].0 - n[0].0).norm().max((n[1].1 - n[0].1).norm()) + (n[1].2 - n[0].2).norm();
        d[0].min(d[1]) - 0.5 * motion > tol
    });
    let (rp, rq) = paired_windings(p, q, p0, quad)?;
    Ok(PoincareBohlReport {
        segments_clear,
        min_segment_distance,
        rp,
        rq,
        conclusion: segments_clear.then_some(rp.turns == rq.turns),
    })
}

/// Rouché-type test: `|p − q|` strictly below both `|q − p0|` and `|p − p0|`
/// at every grid node.
pub fn rouche_check(
    p: &Curve,
    q: &Curve,
    p0: &Curve,
    grid: usize,
    quad: &QuadratureConfig,
) -> Result<RoucheReport, HomotopyError> {
    let domain = shared_domain(p, q, p0)?;
    if grid == 0 {
        return Err(HomotopyError::InvalidDeformation("grid must be positive".into()));
    }
    let mut holds = true;
    let mut margin = f64::INFINITY;
    for t in domain.linspace(grid + 1) {
        let (x, y, z) = (p.eval(t), q.eval(t), p0.eval(t));
        let gap = (x - y).norm();
        let (dq, dp) = ((y - z).norm(), (x - z).norm());
        holds &= gap < dq && gap < dp;
        margin = margin.min(dq.min(dp) - gap);
    }
    let (rp, rq) = paired_windings(p, q, p0, quad)?;
    Ok(RoucheReport {
        hypothesis_holds: holds,
        margin,
        rp,
        rq,
        conclusion: holds.then_some(rp.turns == rq.turns),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::constant;
    use crate::families::{circle, circle_spiral, spiral_center, OmegaFamily};

    fn quad() -> QuadratureConfig {
        QuadratureConfig::with_panels(512)
    }

    fn unit_circle(r: f64) -> Curve {
        circle(Quaternion::ZERO, r, [1.0, 0.0, 0.0], 1.0, 0.0).unwrap()
    }

    #[test]
    fn linear_homotopy_endpoints_and_midpoint() {
        let p = unit_circle(1.0);
        let q = unit_circle(2.0);
        let h = linear_homotopy(&p, &q).unwrap();
        assert_eq!(h.endpoint_deviation(&p, &q, 257), 0.0);
        let mid = h.deformation().at(0.5);
        for t in p.domain().linspace(33) {
            assert!((mid.eval(t).norm() - 1.5).abs() < 1e-14);
        }
        let short = Curve::new(Interval::new(0.0, 1.0).unwrap(), |_| Quaternion::ONE);
        assert!(linear_homotopy(&p, &short).is_err());
    }

    #[test]
    fn spiral_radius_deformation_is_invariant() {
        let omega = OmegaFamily::Precessing { axis: [1.0, 0.0, 1.0], tilt: 0.4, rate: 1.0 };
        let (q0, _) = circle_spiral(1.0, 2, omega).unwrap();
        let unit = Interval::new(0.0, 1.0).unwrap();
        let d = Deformation::new(q0.domain(), unit, move |a| circle_spiral(1.0 + a, 2, omega).unwrap().0).unwrap();
        let r = Deformation::new(q0.domain(), unit, move |a| spiral_center(1.0 + a, q0.domain(), omega)).unwrap();
        let report = invariance_check(&d, &r, &[0.0, 0.25, 0.5, 0.75, 1.0], &quad()).unwrap();
        assert!(report.pass, "{report:?}");
        assert_eq!(report.distinct_turns, vec![2]);
        assert!(report.continuous);
    }

    #[test]
    fn crossing_is_reported_at_its_alpha() {
        let q = unit_circle(1.0);
        let unit = Interval::new(0.0, 1.0).unwrap();
        let d = Deformation::stationary(&q, unit).unwrap();
        let r = Deformation::from_map(q.domain(), unit, |a, _| Quaternion::real(2.0 - 2.0 * a)).unwrap();
        // 0.5 is not sampled; the bisection finds it
        let alphas: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0 + 0.01).filter(|a| *a <= 1.0).collect();
        match invariance_check(&d, &r, &alphas, &quad()) {
            Err(HomotopyError::CurvesIntersect { alpha, .. }) => assert!((alpha - 0.5).abs() < 1e-6, "{alpha}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn poincare_bohl_cases() {
        let o = constant(unit_circle(1.0).domain(), Quaternion::ZERO);
        let r = poincare_bohl_check(&unit_circle(1.0), &unit_circle(2.0), &o, 1024, &quad()).unwrap();
        assert!(r.segments_clear);
        assert_eq!(r.conclusion, Some(true));
        assert_eq!((r.rp.turns, r.rq.turns), (1, 1));

        let off = circle(Quaternion::real(3.0), 1.0, [1.0, 0.0, 0.0], 1.0, 0.0).unwrap();
        let r = poincare_bohl_check(&unit_circle(1.0), &off, &o, 1024, &quad()).unwrap();
        assert!(!r.segments_clear);
        assert_eq!(r.conclusion, None);
        assert_eq!((r.rp.turns, r.rq.turns), (1, 0));
    }

    #[test]
    fn rouche_cases() {
        let q = unit_circle(1.0);
        let pert = q.domain();
        let p = Curve::linear_combination(&[
            (1.0, &q),
            (0.1, &Curve::new(pert, |t| Quaternion::new(-(3.0 * t).sin(), (3.0 * t).cos(), 0.0, 0.0))),
        ])
        .unwrap();
        let o = constant(pert, Quaternion::ZERO);
        let r = rouche_check(&p, &q, &o, 1024, &quad()).unwrap();
        assert!(r.hypothesis_holds);
        assert!(r.margin > 0.79);
        assert_eq!(r.conclusion, Some(true), "{r:?}");
        assert_eq!(r.rp.turns, 1);

        let far = q.translated(Quaternion::new(0.0, 0.0, 2.0, 0.0));
        let r = rouche_check(&far, &q, &o, 1024, &quad()).unwrap();
        assert!(!r.hypothesis_holds);
        assert_eq!(r.conclusion, None);
    }

    #[test]
    fn leaving_the_slice_can_change_the_count() {
        // e^{it} + 0.1(cos 3t j + sin 3t k) never meets the real axis, so its
        // polar angle stays in (0, π) and returns to its start
        let q = unit_circle(1.0);
        let d = q.domain();
        let p = Curve::linear_combination(&[
            (1.0, &q),
            (0.1, &Curve::new(d, |t| Quaternion::new(0.0, 0.0, (3.0 * t).cos(), (3.0 * t).sin()))),
        ])
        .unwrap();
        let o = constant(d, Quaternion::ZERO);
        let r = rouche_check(&p, &q, &o, 1024, &quad()).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!((r.rp.turns, r.rq.turns), (0, 1));
    }

    #[test]
    fn segment_distance_cases() {
        let a = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let b = Quaternion::new(-1.0, 1.0, 0.0, 0.0);
        assert!((segment_distance(a, b) - 1.0).abs() < 1e-15);
        assert!((segment_distance(a, a) - 2f64.sqrt()).abs() < 1e-15);
        assert!((segment_distance(a, a.scale(3.0)) - 2f64.sqrt()).abs() < 1e-15);
    }
}
