//! Real-coefficient quaternionic polynomials and root localization by
//! winding numbers of image circles.
//!
//! All computations happen inside a slice `ℝ + ℝu` for a unit pure imaginary
//! `u`. Real coefficients commute with everything and powers of a slice
//! element stay in the slice, so a polynomial centred in the slice maps the
//! slice to itself and behaves there like a complex polynomial in
//! `x + iy ↔ x + yu`.

use std::f64::consts::TAU;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curve::{Curve, Interval};
use crate::error::{RootsError, WindingError};
use crate::quadrature::QuadratureConfig;
use crate::quaternion::Quaternion;
use crate::winding::{winding_around_origin, WindingResult};

/// Radius enlargement steps `1 + k/64`, `k = 1..=JITTER_STEPS`.
pub const JITTER_STEPS: usize = 8;
/// Upper bound on quadtree cells.
pub const MAX_CELLS: usize = 200_000;

const SLICE_TOL: f64 = 1e-12;
const SCALE_PROBE: usize = 257;
const CENTROID_NODES: usize = 4096;
/// Collision floor for image contours relative to max |F| on the contour.
const IMAGE_FLOOR: f64 = 1e-14;
/// Offset of the initial quadtree square, in units of the containment radius,
/// so that roots at simple dyadic positions do not sit on cell corners.
const GRID_SHIFT: (f64, f64) = (0.0127, 0.0089);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealPolynomial {
    /// `a_n, …, a_0`, descending powers of `q − q0`.
    coeffs: Vec<f64>,
    /// The same divided by the leading coefficient.
    monic: Vec<f64>,
    center: Quaternion,
}

impl RealPolynomial {
    /// Coefficients in descending order. Leading zeros are dropped.
    pub fn new(coeffs: Vec<f64>, center: Quaternion) -> Result<Self, RootsError> {
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(RootsError::NonFiniteCoefficient { index });
        }
        if !center.is_finite() {
            return Err(RootsError::InvalidArgument("center is not finite".into()));
        }
        let first = coeffs.iter().position(|c| *c != 0.0).ok_or(RootsError::ZeroDegree)?;
        let coeffs = coeffs[first..].to_vec();
        if coeffs.len() < 2 {
            return Err(RootsError::ZeroDegree);
        }
        let lead = coeffs[0];
        let monic = coeffs.iter().map(|c| c / lead).collect();
        Ok(Self { coeffs, monic, center })
    }

    /// Accepts quaternion coefficients but rejects any with a vector part.
    pub fn from_quaternion_coeffs(coeffs: &[Quaternion], center: Quaternion) -> Result<Self, RootsError> {
        for (index, c) in coeffs.iter().enumerate() {
            if c.vector_norm() != 0.0 {
                return Err(RootsError::NonRealCoefficient { index });
            }
        }
        Self::new(coeffs.iter().map(|c| c.x0).collect(), center)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn monic(&self) -> &[f64] {
        &self.monic
    }

    pub fn leading(&self) -> f64 {
        self.coeffs[0]
    }

    pub fn center(&self) -> Quaternion {
        self.center
    }

    /// Horner evaluation in `w = q − q0`.
    pub fn evaluate(&self, q: Quaternion) -> Quaternion {
        horner(&self.coeffs, q - self.center)
    }

    /// `F′(q)` for the formal derivative; equals the directional derivative
    /// along any direction in the slice of `q − q0`.
    pub fn derivative_at(&self, q: Quaternion) -> Quaternion {
        let n = self.degree();
        let d: Vec<f64> = self.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(k, c)| c * (n - k) as f64)
            .collect();
        horner(&d, q - self.center)
    }

    /// `1 + Σ |a_ℓ / a_n|` over the non-leading coefficients.
    pub fn containment_radius(&self) -> f64 {
        1.0 + self.monic[1..].iter().map(|c| c.abs()).sum::<f64>()
    }

    /// `Σ |a_ℓ|·max(1, |q − q0|)^ℓ`, the natural size of `F(q)`.
    pub fn coefficient_scale(&self, q: Quaternion) -> f64 {
        let m = (q - self.center).norm().max(1.0);
        self.coeffs.iter().fold(0.0, |acc, c| acc * m + c.abs())
    }

    /// Whether `q0` lies in the slice.
    pub fn centered_in(&self, slice: &SlicePlane) -> bool {
        slice.contains(self.center)
    }

    /// Relative distance of `F(q)` from the slice.
    pub fn slice_residual(&self, slice: &SlicePlane, q: Quaternion) -> f64 {
        let v = self.evaluate(q);
        slice.off_slice(v) / (1.0 + v.norm())
    }

    /// `max |F(q) − a_n wⁿ| / |a_n wⁿ|` over `samples` points of the circle
    /// `|w| = R` in the slice. Below one, the leading term dominates.
    pub fn dominance_ratio(&self, slice: &SlicePlane, samples: usize) -> f64 {
        let r = self.containment_radius();
        let n = self.degree() as i32;
        (0..samples.max(1))
            .map(|k| {
                let s = TAU * k as f64 / samples.max(1) as f64;
                let w = slice.point(r * s.cos(), r * s.sin());
                let lead = power(w, n).scale(self.leading());
                (self.evaluate(self.center + w) - lead).norm() / lead.norm()
            })
            .fold(0.0, f64::max)
    }

    /// Image of a root under the root-sphere symmetry: `root = q0 + a + b·u`
    /// is sent to `q0 + a + b·v`.
    pub fn sphere_image(&self, slice: &SlicePlane, root: Quaternion, v: Quaternion) -> Quaternion {
        let w = root - self.center;
        let (a, b) = slice.coords(w);
        self.center + Quaternion::real(a) + v.scale(b)
    }
}

fn horner(coeffs: &[f64], w: Quaternion) -> Quaternion {
    coeffs.iter().fold(Quaternion::ZERO, |acc, c| acc * w + Quaternion::real(*c))
}

fn power(w: Quaternion, n: i32) -> Quaternion {
    (0..n).fold(Quaternion::ONE, |acc, _| acc * w)
}

pub fn evaluate(f: &RealPolynomial, q: Quaternion) -> Quaternion {
    f.evaluate(q)
}

pub fn containment_radius(f: &RealPolynomial) -> f64 {
    f.containment_radius()
}

/// The plane `ℝ + ℝu` for a unit pure imaginary `u`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct SlicePlane {
    u: Quaternion,
}

impl SlicePlane {
    /// Normalizes `dir`.
    pub fn new(dir: [f64; 3]) -> Result<Self, RootsError> {
        let v = Quaternion::pure(dir);
        if !v.is_finite() {
            return Err(RootsError::InvalidSlice);
        }
        v.normalized().map(|u| Self { u }).ok_or(RootsError::InvalidSlice)
    }

    pub fn from_unit(u: Quaternion) -> Result<Self, RootsError> {
        if u.x0 != 0.0 {
            return Err(RootsError::InvalidSlice);
        }
        Self::new([u.x1, u.x2, u.x3])
    }

    pub fn u(&self) -> Quaternion {
        self.u
    }

    pub fn direction(&self) -> [f64; 3] {
        [self.u.x1, self.u.x2, self.u.x3]
    }

    /// `x + y·u`.
    pub fn point(&self, x: f64, y: f64) -> Quaternion {
        Quaternion::real(x) + self.u.scale(y)
    }

    /// `(x0, ⟨x⃗, u⟩)`.
    pub fn coords(&self, q: Quaternion) -> (f64, f64) {
        (q.x0, q.vector().inner(self.u))
    }

    /// Norm of the component of `q` orthogonal to the slice.
    pub fn off_slice(&self, q: Quaternion) -> f64 {
        let v = q.vector();
        (v - self.u.scale(v.inner(self.u))).norm()
    }

    pub fn contains(&self, q: Quaternion) -> bool {
        self.off_slice(q) <= SLICE_TOL * (1.0 + q.norm())
    }
}

impl TryFrom<[f64; 3]> for SlicePlane {
    type Error = RootsError;

    fn try_from(d: [f64; 3]) -> Result<Self, Self::Error> {
        Self::new(d)
    }
}

impl From<SlicePlane> for [f64; 3] {
    fn from(s: SlicePlane) -> Self {
        s.direction()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnclosureStatus {
    Isolated,
    Cluster,
}

/// A disc in slice coordinates whose boundary image winds `winding` times.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootEnclosure {
    pub slice: SlicePlane,
    /// `(x, y)` for the point `x + y·u`.
    pub center: (f64, f64),
    pub radius: f64,
    pub winding: i64,
    pub status: EnclosureStatus,
}

impl RootEnclosure {
    pub fn point(&self) -> Quaternion {
        self.slice.point(self.center.0, self.center.1)
    }
}

/// A map of the slice into itself.
pub trait SliceMap: Send + Sync {
    fn eval(&self, q: Quaternion) -> Quaternion;

    /// Derivative of `s ↦ F(q + s·v)` at `s = 0`, when available in closed form.
    fn directional(&self, _q: Quaternion, _v: Quaternion) -> Option<Quaternion> {
        None
    }

    /// Size of the rounding error in `eval` for `|q − center| ≤ reach`.
    /// Contours on which the image comes closer to the target than this are
    /// treated as touching it.
    fn noise_floor(&self, _center: Quaternion, _reach: f64) -> f64 {
        0.0
    }

    /// Whether the map is holomorphic in the slice coordinate `x + iy`, so
    /// that contour moments locate preimages.
    fn holomorphic(&self) -> bool {
        false
    }
}

impl SliceMap for RealPolynomial {
    fn eval(&self, q: Quaternion) -> Quaternion {
        self.evaluate(q)
    }

    fn directional(&self, q: Quaternion, v: Quaternion) -> Option<Quaternion> {
        Some(self.derivative_at(q) * v)
    }

    fn noise_floor(&self, center: Quaternion, reach: f64) -> f64 {
        let m = (center - self.center).norm() + reach;
        let q = self.center + Quaternion::real(m);
        16.0 * (self.degree() + 1) as f64 * f64::EPSILON * self.coefficient_scale(q)
    }

    fn holomorphic(&self) -> bool {
        true
    }
}

/// A closure viewed as a slice map.
#[derive(Clone)]
pub struct FnMap<F>(pub F);

impl<F> SliceMap for FnMap<F>
where
    F: Fn(Quaternion) -> Quaternion + Send + Sync,
{
    fn eval(&self, q: Quaternion) -> Quaternion {
        (self.0)(q)
    }
}

/// Bilinear interpolation of sampled values on a rectangular grid of slice
/// coordinates. Points outside the grid are clamped to it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridMap {
    pub slice: SlicePlane,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// `values[j][i]` is the image at `(x_i, y_j)` in slice coordinates.
    pub values: Vec<Vec<(f64, f64)>>,
}

impl GridMap {
    /// Samples `f` on an `nx × ny` grid.
    pub fn sample<F>(
        slice: SlicePlane,
        x_range: (f64, f64),
        y_range: (f64, f64),
        nx: usize,
        ny: usize,
        f: F,
    ) -> Result<Self, RootsError>
    where
        F: Fn(f64, f64) -> (f64, f64),
    {
        let xs = Interval::new(x_range.0, x_range.1).map_err(|e| RootsError::InvalidArgument(e.to_string()))?;
        let ys = Interval::new(y_range.0, y_range.1).map_err(|e| RootsError::InvalidArgument(e.to_string()))?;
        if nx < 2 || ny < 2 {
            return Err(RootsError::InvalidArgument("grid needs at least 2×2 nodes".into()));
        }
        let values = ys
            .linspace(ny)
            .into_iter()
            .map(|y| xs.linspace(nx).into_iter().map(|x| f(x, y)).collect())
            .collect();
        Self::new(slice, x_range, y_range, values)
    }

    pub fn new(
        slice: SlicePlane,
        x_range: (f64, f64),
        y_range: (f64, f64),
        values: Vec<Vec<(f64, f64)>>,
    ) -> Result<Self, RootsError> {
        let ny = values.len();
        let nx = values.first().map_or(0, Vec::len);
        if ny < 2 || nx < 2 || values.iter().any(|r| r.len() != nx) {
            return Err(RootsError::InvalidArgument("grid values must be a rectangular array of at least 2×2".into()));
        }
        if !(x_range.0 < x_range.1 && y_range.0 < y_range.1) {
            return Err(RootsError::InvalidArgument("grid ranges must be increasing".into()));
        }
        if values.iter().flatten().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(RootsError::InvalidArgument("grid values must be finite".into()));
        }
        Ok(Self { slice, x_range, y_range, values })
    }

    fn locate(range: (f64, f64), n: usize, x: f64) -> (usize, f64) {
        let s = ((x - range.0) / (range.1 - range.0)).clamp(0.0, 1.0) * (n - 1) as f64;
        let i = (s.floor() as usize).min(n - 2);
        (i, s - i as f64)
    }
}

impl SliceMap for GridMap {
    fn eval(&self, q: Quaternion) -> Quaternion {
        let (x, y) = self.slice.coords(q);
        let ny = self.values.len();
        let nx = self.values[0].len();
        let (i, fx) = Self::locate(self.x_range, nx, x);
        let (j, fy) = Self::locate(self.y_range, ny, y);
        let v = &self.values;
        let lerp = |a: (f64, f64), b: (f64, f64), s: f64| (a.0 + (b.0 - a.0) * s, a.1 + (b.1 - a.1) * s);
        let lo = lerp(v[j][i], v[j][i + 1], fx);
        let hi = lerp(v[j + 1][i], v[j + 1][i + 1], fx);
        let (a, b) = lerp(lo, hi, fy);
        self.slice.point(a, b)
    }
}

/// `t ↦ F(c(t)) − target` for the circle `c(t) = center + r(cos 2πt + u sin 2πt)`.
fn image_curve(map: &Arc<dyn SliceMap>, slice: SlicePlane, center: Quaternion, radius: f64, target: Quaternion) -> Curve {
    let domain = Interval { a: 0.0, b: 1.0 };
    let u = slice.u();
    let circle = move |t: f64| {
        let s = TAU * t;
        center + (Quaternion::real(s.cos()) + u.scale(s.sin())).scale(radius)
    };
    let m = map.clone();
    let curve = Curve::new(domain, move |t| m.eval(circle(t)) - target);
    let probe = map.directional(center, u).is_some();
    if probe {
        let m = map.clone();
        curve.with_derivative(move |t| {
            let s = TAU * t;
            let v = (Quaternion::real(-s.sin()) + u.scale(s.cos())).scale(TAU * radius);
            m.directional(circle(t), v).expect("closed-form derivative")
        })
    } else {
        curve
    }
}

fn circle_winding(
    map: &Arc<dyn SliceMap>,
    slice: SlicePlane,
    center: Quaternion,
    radius: f64,
    target: Quaternion,
    quad: &QuadratureConfig,
) -> Result<WindingResult, RootsError> {
    let image = image_curve(map, slice, center, radius, target);
    // |F| can span many orders on one circle (near a multiple root, or on a
    // large circle), so the collision floor is the rounding noise of F rather
    // than a fraction of max|F|.
    let scale = image.max_norm(SCALE_PROBE);
    let floor = map.noise_floor(center, radius).max(IMAGE_FLOOR * scale);
    winding_around_origin(&image, quad, slice.u(), floor).map_err(|e| match e {
        WindingError::CurvesIntersect { t, distance } => RootsError::ImageHitsTarget { t, distance },
        other => RootsError::Winding(other),
    })
}

/// Winding number of the image of the circle `|q − center| = radius` in the
/// slice under `F`, around 0.
pub fn image_winding(
    f: &RealPolynomial,
    slice: &SlicePlane,
    center: (f64, f64),
    radius: f64,
    quad: &QuadratureConfig,
) -> Result<WindingResult, RootsError> {
    if !f.centered_in(slice) {
        return Err(RootsError::NonSliceCenter);
    }
    check_radius(radius)?;
    let map: Arc<dyn SliceMap> = Arc::new(f.clone());
    circle_winding(&map, *slice, slice.point(center.0, center.1), radius, Quaternion::ZERO, quad)
}

fn check_radius(radius: f64) -> Result<(), RootsError> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(RootsError::InvalidArgument(format!("radius must be positive, got {radius}")));
    }
    Ok(())
}

struct Search<'a> {
    map: Arc<dyn SliceMap>,
    slice: SlicePlane,
    target: Quaternion,
    quad: &'a QuadratureConfig,
    cheap: QuadratureConfig,
    cells: usize,
}

impl Search<'_> {
    /// Winding on a circle that contains the disc of radius `radius`,
    /// enlarging it slightly until the image avoids the target and the
    /// result is certified.
    fn contour(&mut self, c: (f64, f64), radius: f64) -> Result<(i64, f64), RootsError> {
        let center = self.slice.point(c.0, c.1);
        for k in 0..=JITTER_STEPS {
            let r = radius * (1.0 + k as f64 / 64.0);
            for quad in [self.cheap, *self.quad] {
                match circle_winding(&self.map, self.slice, center, r, self.target, &quad) {
                    Ok(w) if w.certified => return Ok((w.turns, r)),
                    Ok(_) => {}
                    Err(RootsError::ImageHitsTarget { .. }) => break,
                    Err(e) => return Err(e),
                }
            }
        }
        Err(RootsError::ContourStuck { re: c.0, im: c.1, radius })
    }

    /// Mean of the preimages inside the circle, `(1/2πi m) ∮ z d log(F − target)`
    /// in slice coordinates, from log increments between neighbouring nodes.
    fn centroid(&self, c: (f64, f64), radius: f64, m: i64) -> Option<(f64, f64)> {
        let center = Complex64::new(c.0, c.1);
        let node = |k: usize| {
            let z = center + Complex64::from_polar(radius, TAU * k as f64 / CENTROID_NODES as f64);
            let (a, b) = self.slice.coords(self.map.eval(self.slice.point(z.re, z.im)) - self.target);
            (z, Complex64::new(a, b))
        };
        let (mut z0, mut f0) = node(0);
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 1..=CENTROID_NODES {
            let (z1, f1) = node(k % CENTROID_NODES);
            acc += 0.5 * (z0 + z1) * (f1 / f0).ln();
            (z0, f0) = (z1, f1);
        }
        let mean = acc / Complex64::new(0.0, TAU * m as f64);
        (mean.is_finite() && (mean - center).norm() < radius).then_some((mean.re, mean.im))
    }

    /// Quadtree on squares of half-side `half`; each square is tested through
    /// its circumscribed circle.
    fn leaves(&mut self, c: (f64, f64), half: f64, winding: i64, tol: f64) -> Result<Vec<((f64, f64), f64)>, RootsError> {
        let mut queue = vec![(c, half, winding)];
        let mut out = Vec::new();
        while let Some((c, h, w)) = queue.pop() {
            if w == 0 {
                continue;
            }
            if 2.0 * h * std::f64::consts::SQRT_2 <= tol {
                out.push((c, h));
                continue;
            }
            let g = 0.5 * h;
            let mut children = Vec::with_capacity(4);
            let mut stuck = false;
            for (dx, dy) in [(-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0), (1.0, 1.0)] {
                self.cells += 1;
                if self.cells > MAX_CELLS {
                    return Err(RootsError::TooManyCells { limit: MAX_CELLS });
                }
                let child = (c.0 + dx * g, c.1 + dy * g);
                match self.contour(child, g * std::f64::consts::SQRT_2) {
                    Ok((0, _)) => {}
                    Ok((cw, _)) => children.push((child, g, cw)),
                    Err(RootsError::ContourStuck { .. }) => {
                        stuck = true;
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
            // A child whose image stays within rounding noise of the target
            // cannot be resolved further; the parent, measured cleanly, is the
            // finest enclosure available and is reported as a cluster.
            if stuck {
                out.push((c, h));
            } else {
                queue.extend(children);
            }
        }
        Ok(out)
    }

    /// Merge leaves whose circles overlap (or whose centres are within `tol`)
    /// and re-measure each group.
    fn enclosures(&mut self, leaves: Vec<((f64, f64), f64)>, tol: f64) -> Result<Vec<RootEnclosure>, RootsError> {
        let n = leaves.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], mut i: usize) -> usize {
            while p[i] != i {
                p[i] = p[p[i]];
                i = p[i];
            }
            i
        }
        for i in 0..n {
            for j in i + 1..n {
                let ((a, ha), (b, hb)) = (leaves[i], leaves[j]);
                let reach = tol.max((ha + hb) * std::f64::consts::SQRT_2);
                if (a.0 - b.0).hypot(a.1 - b.1) <= reach {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
        let mut groups: Vec<Vec<usize>> = Vec::new();
        let mut slot = vec![usize::MAX; n];
        for i in 0..n {
            let r = find(&mut parent, i);
            if slot[r] == usize::MAX {
                slot[r] = groups.len();
                groups.push(Vec::new());
            }
            groups[slot[r]].push(i);
        }

        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for &i in &g {
                let ((x, y), _) = leaves[i];
                x0 = x0.min(x);
                x1 = x1.max(x);
                y0 = y0.min(y);
                y1 = y1.max(y);
            }
            let c = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
            let radius = g
                .iter()
                .map(|&i| {
                    let ((x, y), h) = leaves[i];
                    (x - c.0).hypot(y - c.1) + h * std::f64::consts::SQRT_2
                })
                .fold(0.0, f64::max);
            let (winding, mut radius) = self.contour(c, radius)?;
            if winding == 0 {
                continue;
            }
            let mut c = c;
            if radius > tol && winding > 0 && self.map.holomorphic() {
                // the cell grid only pins a cluster to its cell size; the mean
                // of its roots is sharper. Grow the radius so the disc still
                // contains the original one.
                if let Some(m) = self.centroid(c, radius, winding) {
                    radius += (m.0 - c.0).hypot(m.1 - c.1);
                    c = m;
                }
            }
            out.push(RootEnclosure {
                slice: self.slice,
                center: c,
                radius,
                winding,
                status: if radius <= tol { EnclosureStatus::Isolated } else { EnclosureStatus::Cluster },
            });
        }
        out.sort_by(|a, b| {
            let same = (a.center.0 - b.center.0).abs() <= tol;
            let by_re = if same { std::cmp::Ordering::Equal } else { a.center.0.total_cmp(&b.center.0) };
            by_re.then(a.center.1.total_cmp(&b.center.1))
        });
        Ok(out)
    }
}

fn cheap_config(quad: &QuadratureConfig, degree: usize) -> QuadratureConfig {
    QuadratureConfig {
        panels: (32 * degree).clamp(64, quad.panels.max(64)),
        ..*quad
    }
}

fn check_tol(tol: f64) -> Result<(), RootsError> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(RootsError::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    Ok(())
}

/// Enclose every root of `f` in the slice. Winding counts sum to the degree.
pub fn localize_roots(
    f: &RealPolynomial,
    slice: &SlicePlane,
    tol: f64,
    quad: &QuadratureConfig,
) -> Result<Vec<RootEnclosure>, RootsError> {
    quad.validate()?;
    check_tol(tol)?;
    if !f.centered_in(slice) {
        return Err(RootsError::NonSliceCenter);
    }
    let mut search = Search {
        map: Arc::new(f.clone()),
        slice: *slice,
        target: Quaternion::ZERO,
        quad,
        cheap: cheap_config(quad, f.degree()),
        cells: 0,
    };
    let (x, y) = slice.coords(f.center());
    let r = f.containment_radius();
    let c = (x + GRID_SHIFT.0 * r, y + GRID_SHIFT.1 * r);
    let half = r * (1.0 + 2.0 * GRID_SHIFT.0);
    let (w, _) = search.contour(c, half * std::f64::consts::SQRT_2)?;
    let leaves = search.leaves(c, half, w, tol)?;
    search.enclosures(leaves, tol)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PreimageOutcome {
    /// The boundary winds around the target; enclosures of preimages inside
    /// the disc.
    Found { boundary_winding: i64, enclosures: Vec<RootEnclosure> },
    /// Zero boundary winding: no conclusion.
    NotApplicable { boundary_winding: i64 },
}

/// Look for `q` in the disc with `F(q) = target` when the image of the disc
/// boundary winds around `target`.
pub fn brouwer_value_check<M>(
    map: &M,
    slice: &SlicePlane,
    target: Quaternion,
    center: (f64, f64),
    radius: f64,
    tol: f64,
    quad: &QuadratureConfig,
) -> Result<PreimageOutcome, RootsError>
where
    M: SliceMap + Clone + 'static,
{
    quad.validate()?;
    check_tol(tol)?;
    check_radius(radius)?;
    if !slice.contains(target) {
        return Err(RootsError::TargetNotInSlice);
    }
    let map: Arc<dyn SliceMap> = Arc::new(map.clone());
    let boundary = circle_winding(&map, *slice, slice.point(center.0, center.1), radius, target, quad)?;
    if boundary.turns == 0 {
        return Ok(PreimageOutcome::NotApplicable { boundary_winding: 0 });
    }
    let mut search = Search {
        map,
        slice: *slice,
        target,
        quad,
        cheap: cheap_config(quad, boundary.turns.unsigned_abs() as usize),
        cells: 0,
    };
    let leaves = search.leaves(center, radius, boundary.turns, tol)?;
    let inside: Vec<_> = leaves
        .into_iter()
        .filter(|((x, y), _)| (x - center.0).hypot(y - center.1) <= radius + tol)
        .collect();
    Ok(PreimageOutcome::Found {
        boundary_winding: boundary.turns,
        enclosures: search.enclosures(inside, tol)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad() -> QuadratureConfig {
        QuadratureConfig::with_panels(1024)
    }

    fn poly(c: &[f64]) -> RealPolynomial {
        RealPolynomial::new(c.to_vec(), Quaternion::ZERO).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let f = poly(&[1.0, 0.0, 1.0]);
        assert!(f.evaluate(Quaternion::I).norm() < 1e-15);
        let u = Quaternion::new(0.0, 1.0, 1.0, 0.0).scale(0.5f64.sqrt());
        assert!(f.evaluate(u).norm() < 1e-15);
        assert_eq!(poly(&[1.0, -2.0, 1.0]).evaluate(Quaternion::ONE), Quaternion::ZERO);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(RealPolynomial::new(vec![0.0, 3.0], Quaternion::ZERO), Err(RootsError::ZeroDegree));
        assert!(matches!(
            RealPolynomial::new(vec![1.0, f64::NAN], Quaternion::ZERO),
            Err(RootsError::NonFiniteCoefficient { index: 1 })
        ));
        assert!(matches!(
            RealPolynomial::from_quaternion_coeffs(&[Quaternion::ONE, Quaternion::J], Quaternion::ZERO),
            Err(RootsError::NonRealCoefficient { index: 1 })
        ));
        assert_eq!(poly(&[0.0, 2.0, 1.0]).degree(), 1);
        assert_eq!(SlicePlane::new([0.0; 3]), Err(RootsError::InvalidSlice));
    }

    #[test]
    fn containment_radius_examples() {
        assert_eq!(poly(&[1.0, 0.0, 1.0]).containment_radius(), 2.0);
        assert_eq!(poly(&[1.0, -5.0]).containment_radius(), 6.0);
        assert_eq!(poly(&[1.0, 0.0, -2.0, 1.0]).containment_radius(), 4.0);
        assert_eq!(poly(&[2.0, 0.0, 2.0]).containment_radius(), 2.0);
        let s = SlicePlane::new([0.0, 1.0, 0.0]).unwrap();
        assert!(poly(&[1.0, 0.0, -2.0, 1.0]).dominance_ratio(&s, 256) < 1.0);
    }

    #[test]
    fn image_winding_examples() {
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let j = SlicePlane::new([0.0, 1.0, 0.0]).unwrap();
        assert_eq!(image_winding(&poly(&[1.0, 0.0, 0.0]), &i, (0.0, 0.0), 1.0, &quad()).unwrap().turns, 2);
        assert_eq!(image_winding(&poly(&[1.0, 0.0, 1.0]), &j, (0.0, 0.0), 2.0, &quad()).unwrap().turns, 2);
        assert_eq!(image_winding(&poly(&[1.0, 0.0, 1.0]), &i, (0.0, 1.0), 0.5, &quad()).unwrap().turns, 1);
        assert!(matches!(
            image_winding(&poly(&[1.0, 0.0, 1.0]), &i, (0.0, 0.0), 1.0, &quad()),
            Err(RootsError::ImageHitsTarget { .. })
        ));
    }

    #[test]
    fn localize_simple_cases() {
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let e = localize_roots(&poly(&[1.0, 0.0, 1.0]), &i, 1e-6, &quad()).unwrap();
        assert_eq!(e.len(), 2);
        assert!((e[0].center.1 + 1.0).abs() < 1e-6 && (e[1].center.1 - 1.0).abs() < 1e-6, "{e:?}");
        assert!(e.iter().all(|x| x.winding == 1 && x.status == EnclosureStatus::Isolated));

        let j = SlicePlane::new([0.0, 1.0, 0.0]).unwrap();
        let e = localize_roots(&poly(&[1.0, 0.0, 0.0, -1.0]), &j, 1e-6, &quad()).unwrap();
        assert_eq!(e.len(), 3);
        let s3 = 3f64.sqrt() / 2.0;
        let expect = [(-0.5, -s3), (-0.5, s3), (1.0, 0.0)];
        for (enc, (x, y)) in e.iter().zip(expect) {
            assert!((enc.center.0 - x).abs() < 1e-6 && (enc.center.1 - y).abs() < 1e-6, "{enc:?}");
        }

        let f = RealPolynomial::new(vec![1.0, -0.7], Quaternion::ZERO).unwrap();
        let k = SlicePlane::new([0.0, 0.0, 1.0]).unwrap();
        let e = localize_roots(&f, &k, 1e-6, &quad()).unwrap();
        assert_eq!(e.len(), 1);
        assert!((e[0].center.0 - 0.7).abs() < 1e-6);
    }

    #[test]
    fn double_root_has_winding_two() {
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let e = localize_roots(&poly(&[1.0, -2.0, 1.0]), &i, 1e-6, &quad()).unwrap();
        assert_eq!(e.iter().map(|x| x.winding).sum::<i64>(), 2, "{e:?}");
        assert_eq!(e.len(), 1, "{e:?}");
    }

    #[test]
    fn off_slice_center_rejected() {
        let f = RealPolynomial::new(vec![1.0, 0.0, 1.0], Quaternion::J).unwrap();
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        assert_eq!(localize_roots(&f, &i, 1e-6, &quad()), Err(RootsError::NonSliceCenter));
    }

    #[test]
    fn preimage_cases() {
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let sq = poly(&[1.0, 0.0, 0.0]);
        match brouwer_value_check(&sq, &i, Quaternion::real(-1.0), (0.0, 0.0), 2.0, 1e-6, &quad()).unwrap() {
            PreimageOutcome::Found { boundary_winding, enclosures } => {
                assert_eq!(boundary_winding, 2);
                assert_eq!(enclosures.len(), 2);
                for e in &enclosures {
                    assert!((e.center.1.abs() - 1.0).abs() < 1e-6);
                }
            }
            other => panic!("{other:?}"),
        }

        let id = FnMap(|q: Quaternion| q);
        let target = Quaternion::new(0.3, 0.4, 0.0, 0.0);
        match brouwer_value_check(&id, &i, target, (0.0, 0.0), 1.0, 1e-6, &quad()).unwrap() {
            PreimageOutcome::Found { enclosures, .. } => {
                assert_eq!(enclosures.len(), 1);
                assert!((enclosures[0].point() - target).norm() < 1e-6);
            }
            other => panic!("{other:?}"),
        }

        let out = brouwer_value_check(&id, &i, Quaternion::real(5.0), (0.0, 0.0), 1.0, 1e-6, &quad()).unwrap();
        assert_eq!(out, PreimageOutcome::NotApplicable { boundary_winding: 0 });
        assert_eq!(
            brouwer_value_check(&id, &i, Quaternion::J, (0.0, 0.0), 1.0, 1e-6, &quad()),
            Err(RootsError::TargetNotInSlice)
        );
    }

    #[test]
    fn grid_map_interpolates() {
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let g = GridMap::sample(i, (-2.0, 2.0), (-2.0, 2.0), 41, 41, |x, y| (x - 0.25, y + 0.5)).unwrap();
        let v = g.eval(i.point(0.33, -0.1));
        assert!((v - i.point(0.08, 0.4)).norm() < 1e-12);
        match brouwer_value_check(&g, &i, Quaternion::ZERO, (0.0, 0.0), 1.5, 1e-6, &quad()).unwrap() {
            PreimageOutcome::Found { enclosures, .. } => {
                assert_eq!(enclosures.len(), 1);
                assert!((enclosures[0].center.0 - 0.25).abs() < 1e-6);
                assert!((enclosures[0].center.1 + 0.5).abs() < 1e-6);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn slice_closure_and_sphere() {
        let u = SlicePlane::new([1.0, 2.0, -2.0]).unwrap();
        let f = RealPolynomial::new(vec![1.0, -0.5, 2.0, 3.0], u.point(0.2, -0.3)).unwrap();
        for k in 0..20 {
            let q = u.point(0.3 * k as f64 - 2.0, 1.0 - 0.1 * k as f64);
            assert!(f.slice_residual(&u, q) < 1e-12);
        }
        let g = poly(&[1.0, 0.0, 1.0]);
        let i = SlicePlane::new([1.0, 0.0, 0.0]).unwrap();
        let img = g.sphere_image(&i, Quaternion::I, Quaternion::K);
        assert!((img - Quaternion::K).norm() < 1e-15);
    }
}
