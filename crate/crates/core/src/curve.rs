//! Parametrized quaternionic curves `q: [a, b] → ℍ`.
//!
//! A [`Curve`] owns its evaluator and, optionally, analytic first and second
//! derivatives. Without them, derivatives come from finite differences
//! (central in the interior, second-order one-sided at the endpoints).
//! Curves are immutable and cheap to clone; every closure is shared through
//! an `Arc`, so they can be evaluated from any number of threads.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::CurveError;
use crate::quaternion::Quaternion;

pub type CurveFn = Arc<dyn Fn(f64) -> Quaternion + Send + Sync>;

/// Default number of points in validation grids.
pub const DEFAULT_VALIDATION_GRID: usize = 1024;

/// Closed real interval `[a, b]` with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self, CurveError> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(CurveError::InvalidDomain { a, b });
        }
        Ok(Self { a, b })
    }

    #[inline]
    pub fn len(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, t: f64) -> bool {
        (self.a..=self.b).contains(&t)
    }

    /// `n ≥ 2` equally spaced points including both endpoints.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let n = n.max(2);
        let h = self.len() / (n - 1) as f64;
        (0..n)
            .map(|k| if k == n - 1 { self.b } else { self.a + k as f64 * h })
            .collect()
    }

    /// Same interval up to a relative tolerance.
    pub fn matches(&self, other: &Interval) -> bool {
        let tol = 1e-12 * (1.0 + self.a.abs().max(self.b.abs()));
        (self.a - other.a).abs() <= tol && (self.b - other.b).abs() <= tol
    }

    pub(crate) fn mismatch(&self, other: &Interval) -> CurveError {
        CurveError::DomainMismatch {
            a0: self.a,
            b0: self.b,
            a1: other.a,
            b1: other.b,
        }
    }
}

#[derive(Clone)]
pub enum Derivative {
    Analytic(CurveFn),
    Numeric { step: f64 },
}

impl fmt::Debug for Derivative {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Derivative::Analytic(_) => f.write_str("Analytic"),
            Derivative::Numeric { step } => write!(f, "Numeric {{ step: {step:e} }}"),
        }
    }
}

#[derive(Clone)]
pub struct Curve {
    domain: Interval,
    value: CurveFn,
    first: Derivative,
    second: Derivative,
    breakpoints: Vec<f64>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("domain", &self.domain)
            .field("first", &self.first)
            .field("second", &self.second)
            .field("breakpoints", &self.breakpoints.len())
            .finish()
    }
}

/// Default finite-difference step `1e-5·max(1, b − a)`.
pub fn default_step(domain: Interval) -> f64 {
    1e-5 * domain.len().max(1.0)
}

impl Curve {
    pub fn new<F>(domain: Interval, f: F) -> Self
    where
        F: Fn(f64) -> Quaternion + Send + Sync + 'static,
    {
        let step = default_step(domain);
        Self {
            domain,
            value: Arc::new(f),
            first: Derivative::Numeric { step },
            second: Derivative::Numeric { step },
            breakpoints: Vec::new(),
        }
    }

    pub fn with_derivative<F>(mut self, df: F) -> Self
    where
        F: Fn(f64) -> Quaternion + Send + Sync + 'static,
    {
        self.first = Derivative::Analytic(Arc::new(df));
        self
    }

    pub fn with_second_derivative<F>(mut self, d2f: F) -> Self
    where
        F: Fn(f64) -> Quaternion + Send + Sync + 'static,
    {
        self.second = Derivative::Analytic(Arc::new(d2f));
        self
    }

    /// Drop analytic derivatives and use finite differences with step `h`.
    pub fn numeric(mut self, step: f64) -> Self {
        self.first = Derivative::Numeric { step };
        self.second = Derivative::Numeric { step };
        self
    }

    /// Interior parameters where the curve is only piecewise smooth.
    pub fn with_breakpoints(mut self, mut points: Vec<f64>) -> Self {
        points.retain(|t| *t > self.domain.a && *t < self.domain.b);
        points.sort_by(f64::total_cmp);
        points.dedup();
        self.breakpoints = points;
        self
    }

    #[inline]
    pub fn domain(&self) -> Interval {
        self.domain
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn has_analytic_derivative(&self) -> bool {
        matches!(self.first, Derivative::Analytic(_))
    }

    pub fn has_analytic_second_derivative(&self) -> bool {
        matches!(self.second, Derivative::Analytic(_))
    }

    #[inline]
    pub fn eval(&self, t: f64) -> Quaternion {
        (self.value)(t)
    }

    pub fn derivative(&self, t: f64) -> Quaternion {
        match &self.first {
            Derivative::Analytic(df) => df(t),
            Derivative::Numeric { step } => first_difference(&*self.value, self.domain, t, *step),
        }
    }

    pub fn second_derivative(&self, t: f64) -> Quaternion {
        match (&self.second, &self.first) {
            (Derivative::Analytic(d2f), _) => d2f(t),
            (Derivative::Numeric { step }, Derivative::Analytic(df)) => {
                first_difference(&**df, self.domain, t, *step)
            }
            (Derivative::Numeric { step }, Derivative::Numeric { .. }) => {
                second_difference(&*self.value, self.domain, t, *step)
            }
        }
    }

    /// `(t, q(t))` on `n` equally spaced points.
    pub fn sample(&self, n: usize) -> Vec<(f64, Quaternion)> {
        self.domain
            .linspace(n)
            .into_iter()
            .map(|t| (t, self.eval(t)))
            .collect()
    }

    pub fn max_norm(&self, n: usize) -> f64 {
        self.domain
            .linspace(n)
            .into_iter()
            .map(|t| self.eval(t).norm())
            .fold(0.0, f64::max)
    }

    pub fn min_norm(&self, n: usize) -> f64 {
        self.domain
            .linspace(n)
            .into_iter()
            .map(|t| self.eval(t).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn endpoint_gap(&self) -> f64 {
        (self.eval(self.domain.b) - self.eval(self.domain.a)).norm()
    }

    /// Σ cᵢ·curveᵢ over curves sharing one domain.
    pub fn linear_combination(terms: &[(f64, &Curve)]) -> Result<Curve, CurveError> {
        let (_, first) = terms
            .first()
            .ok_or_else(|| CurveError::InvalidSamples("empty linear combination".into()))?;
        let domain = first.domain;
        for (_, c) in terms {
            if !c.domain.matches(&domain) {
                return Err(domain.mismatch(&c.domain));
            }
        }
        let owned: Vec<(f64, Curve)> = terms.iter().map(|(w, c)| (*w, (*c).clone())).collect();
        let owned = Arc::new(owned);

        let v = owned.clone();
        let mut out = Curve::new(domain, move |t| {
            v.iter().fold(Quaternion::ZERO, |acc, (w, c)| acc + c.eval(t).scale(*w))
        });
        if owned.iter().all(|(_, c)| c.has_analytic_derivative()) {
            let d = owned.clone();
            out = out.with_derivative(move |t| {
                d.iter()
                    .fold(Quaternion::ZERO, |acc, (w, c)| acc + c.derivative(t).scale(*w))
            });
        }
        if owned.iter().all(|(_, c)| c.has_analytic_second_derivative()) {
            let d = owned.clone();
            out = out.with_second_derivative(move |t| {
                d.iter().fold(Quaternion::ZERO, |acc, (w, c)| {
                    acc + c.second_derivative(t).scale(*w)
                })
            });
        }
        let step = owned
            .iter()
            .filter_map(|(_, c)| match c.first {
                Derivative::Numeric { step } => Some(step),
                Derivative::Analytic(_) => None,
            })
            .fold(default_step(domain), f64::min);
        if let Derivative::Numeric { step: s } = &mut out.first {
            *s = step;
        }
        if let Derivative::Numeric { step: s } = &mut out.second {
            *s = step;
        }
        let bps = owned
            .iter()
            .flat_map(|(_, c)| c.breakpoints.iter().copied())
            .collect();
        Ok(out.with_breakpoints(bps))
    }

    /// `self(t) − other(t)`.
    pub fn difference(&self, other: &Curve) -> Result<Curve, CurveError> {
        Curve::linear_combination(&[(1.0, self), (-1.0, other)])
    }

    /// `λ·self(t)`.
    pub fn scaled(&self, lambda: f64) -> Curve {
        Curve::linear_combination(&[(lambda, self)]).expect("single-term combination")
    }

    /// `self(t) + c`.
    pub fn translated(&self, c: Quaternion) -> Curve {
        let constant = constant(self.domain, c);
        Curve::linear_combination(&[(1.0, self), (1.0, &constant)]).expect("same domain")
    }

    /// `self(τ(s))` for a smooth map `τ` from `domain` onto this curve's domain.
    pub fn reparametrized<M, DM>(&self, domain: Interval, tau: M, dtau: DM) -> Curve
    where
        M: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
        DM: Fn(f64) -> f64 + Send + Sync + Clone + 'static,
    {
        let c = self.clone();
        let t0 = tau.clone();
        let mut out = Curve::new(domain, move |s| c.eval(t0(s)));
        if self.has_analytic_derivative() {
            let c = self.clone();
            out = out.with_derivative(move |s| c.derivative(tau(s)).scale(dtau(s)));
        }
        out
    }

    /// Compare the analytic derivative against central differences on a grid.
    /// Returns the largest violation ratio of `|analytic − numeric| ≤ max(tol, tol·|analytic|)`;
    /// a value ≤ 1 passes. Curves without an analytic derivative trivially pass.
    pub fn validate_derivative(&self, grid: usize, tol: f64) -> f64 {
        let Derivative::Analytic(df) = &self.first else {
            return 0.0;
        };
        let step = default_step(self.domain);
        self.domain
            .linspace(grid)
            .into_iter()
            .map(|t| {
                let a = df(t);
                let n = first_difference(&*self.value, self.domain, t, step);
                (a - n).norm() / (tol * a.norm()).max(tol)
            })
            .fold(0.0, f64::max)
    }
}

fn first_difference(f: &dyn Fn(f64) -> Quaternion, d: Interval, t: f64, h: f64) -> Quaternion {
    if t - h >= d.a && t + h <= d.b {
        (f(t + h) - f(t - h)).scale(0.5 / h)
    } else if t - h < d.a {
        (f(t).scale(-3.0) + f(t + h).scale(4.0) - f(t + 2.0 * h)).scale(0.5 / h)
    } else {
        (f(t).scale(3.0) - f(t - h).scale(4.0) + f(t - 2.0 * h)).scale(0.5 / h)
    }
}

fn second_difference(f: &dyn Fn(f64) -> Quaternion, d: Interval, t: f64, h: f64) -> Quaternion {
    let h2 = 1.0 / (h * h);
    if t - h >= d.a && t + h <= d.b {
        (f(t + h) - f(t).scale(2.0) + f(t - h)).scale(h2)
    } else if t - h < d.a {
        (f(t).scale(2.0) - f(t + h).scale(5.0) + f(t + 2.0 * h).scale(4.0) - f(t + 3.0 * h))
            .scale(h2)
    } else {
        (f(t).scale(2.0) - f(t - h).scale(5.0) + f(t - 2.0 * h).scale(4.0) - f(t - 3.0 * h))
            .scale(h2)
    }
}

/// Constant curve with analytic (zero) derivatives.
pub fn constant(domain: Interval, value: Quaternion) -> Curve {
    Curve::new(domain, move |_| value)
        .with_derivative(|_| Quaternion::ZERO)
        .with_second_derivative(|_| Quaternion::ZERO)
}

/// Ordered `(t, q)` samples joined by linear interpolation per cartesian component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampledCurve {
    points: Vec<(f64, Quaternion)>,
}

impl SampledCurve {
    pub fn new(points: Vec<(f64, Quaternion)>) -> Result<Self, CurveError> {
        if points.len() < 2 {
            return Err(CurveError::InvalidSamples("need at least two points".into()));
        }
        for (k, (t, q)) in points.iter().enumerate() {
            if !t.is_finite() || !q.is_finite() {
                return Err(CurveError::InvalidSamples(format!("point {k} is not finite")));
            }
        }
        if let Some(k) = points.windows(2).position(|w| w[1].0 <= w[0].0) {
            return Err(CurveError::InvalidSamples(format!(
                "t must be strictly increasing (index {})",
                k + 1
            )));
        }
        Ok(Self { points })
    }

    /// Rows of `[t, x0, x1, x2, x3]`.
    pub fn from_rows(rows: &[[f64; 5]]) -> Result<Self, CurveError> {
        Self::new(
            rows.iter()
                .map(|r| (r[0], Quaternion::new(r[1], r[2], r[3], r[4])))
                .collect(),
        )
    }

    pub fn points(&self) -> &[(f64, Quaternion)] {
        &self.points
    }

    pub fn domain(&self) -> Interval {
        Interval {
            a: self.points[0].0,
            b: self.points[self.points.len() - 1].0,
        }
    }

    /// Index of the segment used at `t`; knots belong to the segment on their right.
    fn segment(&self, t: f64) -> usize {
        let last = self.points.len() - 2;
        match self.points.binary_search_by(|(s, _)| s.total_cmp(&t)) {
            Ok(k) => k.min(last),
            Err(0) => 0,
            Err(k) => (k - 1).min(last),
        }
    }

    pub fn interpolate(&self, t: f64) -> Quaternion {
        let k = self.segment(t);
        let (t0, q0) = self.points[k];
        let (t1, q1) = self.points[k + 1];
        let s = (t - t0) / (t1 - t0);
        q0 + (q1 - q0).scale(s)
    }

    pub fn slope(&self, t: f64) -> Quaternion {
        let k = self.segment(t);
        let (t0, q0) = self.points[k];
        let (t1, q1) = self.points[k + 1];
        (q1 - q0).scale(1.0 / (t1 - t0))
    }

    pub fn into_curve(self) -> Curve {
        let domain = self.domain();
        let knots: Vec<f64> = self.points.iter().map(|(t, _)| *t).collect();
        let this = Arc::new(self);
        let v = this.clone();
        let d = this;
        Curve::new(domain, move |t| v.interpolate(t))
            .with_derivative(move |t| d.slope(t))
            .with_second_derivative(|_| Quaternion::ZERO)
            .with_breakpoints(knots)
    }
}

/// Curve whose values are unit pure imaginary quaternions, `ω(t)² = −1`.
#[derive(Debug, Clone)]
pub struct OmegaCurve {
    curve: Curve,
}

impl OmegaCurve {
    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn eval(&self, t: f64) -> Quaternion {
        self.curve.eval(t)
    }

    pub fn derivative(&self, t: f64) -> Quaternion {
        self.curve.derivative(t)
    }

    pub fn second_derivative(&self, t: f64) -> Quaternion {
        self.curve.second_derivative(t)
    }
}

fn vanishing_vector(q: Quaternion) -> bool {
    q.vector_norm() <= 1e-14 * q.norm().max(1.0)
}

/// True iff `min |c′(t)| > tol` on a uniform grid of `grid_size` points.
///
/// This certifies the sampled points only, not the continuum between them.
pub fn is_regular(c: &Curve, grid_size: usize, tol: f64) -> bool {
    c.domain()
        .linspace(grid_size)
        .into_iter()
        .all(|t| c.derivative(t).norm() > tol)
}

/// `t ↦ x⃗(t)/|x⃗(t)|`, validated on the default grid.
pub fn omega_of(c: &Curve) -> Result<OmegaCurve, CurveError> {
    omega_of_on(c, &c.domain().linspace(DEFAULT_VALIDATION_GRID))
}

/// Like [`omega_of`], validating on the supplied grid instead.
pub fn omega_of_on(c: &Curve, grid: &[f64]) -> Result<OmegaCurve, CurveError> {
    for &t in grid {
        let q = c.eval(t);
        if !q.is_finite() {
            return Err(CurveError::NonFinite { t });
        }
        if vanishing_vector(q) {
            return Err(CurveError::ZeroVectorPart { t });
        }
    }
    Ok(build_omega(c))
}

fn unit_vector(q: Quaternion) -> Quaternion {
    q.vector().normalized().unwrap_or(Quaternion::ZERO)
}

fn build_omega(c: &Curve) -> OmegaCurve {
    let domain = c.domain();
    let src = c.clone();
    let mut curve = Curve::new(domain, move |t| unit_vector(src.eval(t)));
    match &c.first {
        Derivative::Analytic(_) => {
            let src = c.clone();
            curve = curve.with_derivative(move |t| {
                let x = src.eval(t).vector();
                let dx = src.derivative(t).vector();
                let r = x.norm();
                let dr = x.inner(dx) / r;
                dx.scale(1.0 / r) - x.scale(dr / (r * r))
            });
            if c.has_analytic_second_derivative() {
                let src = c.clone();
                curve = curve.with_second_derivative(move |t| {
                    let x = src.eval(t).vector();
                    let dx = src.derivative(t).vector();
                    let ddx = src.second_derivative(t).vector();
                    let r = x.norm();
                    let dr = x.inner(dx) / r;
                    let ddr = (dx.norm_sqr() + x.inner(ddx)) / r - dr * dr / r;
                    ddx.scale(1.0 / r) - dx.scale(2.0 * dr / (r * r)) - x.scale(ddr / (r * r))
                        + x.scale(2.0 * dr * dr / (r * r * r))
                });
            }
        }
        Derivative::Numeric { step } => {
            curve = curve.numeric(*step);
        }
    }
    OmegaCurve { curve }
}

/// Residuals of the differential identities of the imaginary unit curve
/// `ω = x⃗/|x⃗|`, each the maximum over the grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OmegaIdentityReport {
    /// `|conj(ω′) + ω′|`.
    pub conjugate: f64,
    /// `|ω ω′ + ω′ ω|`.
    pub anticommutation: f64,
    /// Vector part of `(ω′)²` plus the positive part of its scalar part.
    pub square_real_nonpositive: f64,
    /// `|(ω′)² + (|x′|² − (|x|′)²)/|x|²|`, using the derivatives of `x` itself.
    pub square_magnitude: f64,
    /// `|ω ω″ + ω″ ω − 2|ω′|²|`.
    pub second_derivative: f64,
    pub points: usize,
}

impl OmegaIdentityReport {
    pub fn max_residual(&self) -> f64 {
        self.conjugate
            .max(self.anticommutation)
            .max(self.square_real_nonpositive)
            .max(self.second_derivative)
    }
}

/// Evaluate the identities of `ω(t)` derived from `x(t)` on `grid`.
pub fn check_omega_identities(x: &Curve, grid: &[f64]) -> Result<OmegaIdentityReport, CurveError> {
    let omega = omega_of_on(x, grid)?;
    let mut report = OmegaIdentityReport {
        conjugate: 0.0,
        anticommutation: 0.0,
        square_real_nonpositive: 0.0,
        square_magnitude: 0.0,
        second_derivative: 0.0,
        points: grid.len(),
    };
    for &t in grid {
        let w = omega.eval(t);
        let dw = omega.derivative(t);
        let ddw = omega.second_derivative(t);

        let sq = dw * dw;
        let xv = x.eval(t).vector();
        let dxv = x.derivative(t).vector();
        let r = xv.norm();
        let dr = xv.inner(dxv) / r;
        let expected_sq = -(dxv.norm_sqr() - dr * dr) / (r * r);

        let second = w * ddw + ddw * w - Quaternion::real(2.0 * dw.norm_sqr());

        report.conjugate = report.conjugate.max((dw.conj() + dw).norm());
        report.anticommutation = report.anticommutation.max((w * dw + dw * w).norm());
        report.square_real_nonpositive = report
            .square_real_nonpositive
            .max(sq.vector_norm() + sq.x0.max(0.0));
        report.square_magnitude = report
            .square_magnitude
            .max((sq - Quaternion::real(expected_sq)).norm());
        report.second_derivative = report.second_derivative.max(second.norm());
    }
    Ok(report)
}
