//! Quaternion arithmetic and the polar notations.
//!
//! [`Quaternion`] is stored in cartesian form `x0 + x1 i + x2 j + x3 k` and is
//! the single source of truth. [`PolarCartesian`] and [`SymplecticPolar`] are
//! views computed on demand.
//!
//! Multiplication follows the Hamilton convention `i² = j² = k² = ijk = −1`,
//! so `ij = k`, `jk = i` and `ki = j`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::QuaternionError;

/// Default relative tolerance for the orthogonality and parallelism predicates.
pub const DEFAULT_PREDICATE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Quaternion {
    pub x0: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self { x0, x1, x2, x3 }
    }

    #[inline]
    pub const fn real(x0: f64) -> Self {
        Self::new(x0, 0.0, 0.0, 0.0)
    }

    /// Pure imaginary quaternion `v1 i + v2 j + v3 k`.
    #[inline]
    pub const fn pure(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.x0, self.x1, self.x2, self.x3]
    }

    /// Scalar (temporal) part.
    #[inline]
    pub fn scalar(self) -> f64 {
        self.x0
    }

    /// Vector (spatial) part as a pure imaginary quaternion.
    #[inline]
    pub fn vector(self) -> Self {
        Self::new(0.0, self.x1, self.x2, self.x3)
    }

    #[inline]
    pub fn vector_norm(self) -> f64 {
        (self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3).sqrt()
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.x0, -self.x1, -self.x2, -self.x3)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    #[inline]
    pub fn scale(self, s: f64) -> Self {
        Self::new(self.x0 * s, self.x1 * s, self.x2 * s, self.x3 * s)
    }

    /// Unit quaternion in the direction of `self`, or `None` for zero.
    pub fn normalized(self) -> Option<Self> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self.scale(1.0 / n))
    }

    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        (n2 > 0.0).then(|| self.conj().scale(1.0 / n2))
    }

    /// Euclidean inner product `Re[p q̄]`.
    #[inline]
    pub fn inner(self, other: Self) -> f64 {
        inner(self, other)
    }

    pub fn is_finite(self) -> bool {
        self.x0.is_finite() && self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Polar imaginary unit `ω = x⃗/|x⃗|`.
    pub fn imaginary_unit(self) -> Result<Self, QuaternionError> {
        let n = self.vector_norm();
        if n == 0.0 || !n.is_finite() {
            return Err(QuaternionError::ZeroVectorPart);
        }
        Ok(self.vector().scale(1.0 / n))
    }

    pub fn to_polar_cartesian(self) -> Result<PolarCartesian, QuaternionError> {
        to_polar_cartesian(self)
    }

    pub fn to_symplectic(self) -> SymplecticPolar {
        to_symplectic(self)
    }

    /// Symplectic split `q = z0 + z1 j` with `z0 = x0 + x1 i`, `z1 = x2 + x3 i`,
    /// returned as `((re z0, im z0), (re z1, im z1))`.
    pub fn symplectic_components(self) -> ((f64, f64), (f64, f64)) {
        ((self.x0, self.x1), (self.x2, self.x3))
    }

    /// `cos θ + ω sin θ`.
    pub fn exp_unit(theta: f64, omega: Self) -> Self {
        let (s, c) = theta.sin_cos();
        Self::real(c) + omega.scale(s)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:+}i {:+}j {:+}k", self.x0, self.x1, self.x2, self.x3)
    }
}

impl Serialize for Quaternion {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_array().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Quaternion {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        <[f64; 4]>::deserialize(deserializer).map(Self::from_array)
    }
}

impl From<f64> for Quaternion {
    fn from(x: f64) -> Self {
        Self::real(x)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.x0, -self.x1, -self.x2, -self.x3)
    }
}

impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        mul(self, q)
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        self.scale(s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q.scale(self)
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        self.scale(1.0 / s)
    }
}

/// Hamilton product.
#[inline]
pub fn mul(p: Quaternion, q: Quaternion) -> Quaternion {
    Quaternion::new(
        p.x0 * q.x0 - p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3,
        p.x0 * q.x1 + p.x1 * q.x0 + p.x2 * q.x3 - p.x3 * q.x2,
        p.x0 * q.x2 - p.x1 * q.x3 + p.x2 * q.x0 + p.x3 * q.x1,
        p.x0 * q.x3 + p.x1 * q.x2 - p.x2 * q.x1 + p.x3 * q.x0,
    )
}

/// `⟨p, q⟩ = Re[p q̄]`, the euclidean inner product on ℝ⁴.
#[inline]
pub fn inner(p: Quaternion, q: Quaternion) -> f64 {
    p.x0 * q.x0 + p.x1 * q.x1 + p.x2 * q.x2 + p.x3 * q.x3
}

/// True iff `|⟨p, q⟩| ≤ tol·|p|·|q|`. Zero arguments are orthogonal to everything.
pub fn is_orthogonal(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    let scale = p.norm() * q.norm();
    if scale == 0.0 {
        return true;
    }
    inner(p, q).abs() <= tol * scale
}

/// True iff `p q̄` is real up to `tol·|p|·|q|`, i.e. `⟨p, q⟩ = p q̄`.
pub fn is_parallel(p: Quaternion, q: Quaternion, tol: f64) -> bool {
    let scale = p.norm() * q.norm();
    if scale == 0.0 {
        return true;
    }
    (p * q.conj()).vector_norm() <= tol * scale
}

/// `q = |q|(cos θ + ω sin θ)` with `θ ∈ [0, π]` and `ω` a unit pure imaginary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarCartesian {
    pub modulus: f64,
    pub theta: f64,
    pub omega: Quaternion,
}

impl PolarCartesian {
    pub fn to_quaternion(&self) -> Quaternion {
        Quaternion::exp_unit(self.theta, self.omega).scale(self.modulus)
    }
}

pub fn to_polar_cartesian(q: Quaternion) -> Result<PolarCartesian, QuaternionError> {
    let v = q.vector_norm();
    let omega = q.imaginary_unit()?;
    Ok(PolarCartesian {
        modulus: q.norm(),
        theta: v.atan2(q.x0),
        omega,
    })
}

/// `q = |q|(cos ϑ e^{iφ} + sin ϑ e^{iψ} j)` with `ϑ ∈ [0, π/2]`, `φ, ψ ∈ [0, 2π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticPolar {
    pub modulus: f64,
    pub vartheta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl SymplecticPolar {
    pub fn to_quaternion(&self) -> Quaternion {
        symplectic_quaternion(self.modulus, self.vartheta, self.phi, self.psi)
    }
}

/// `ρ(cos ϑ e^{iφ} + sin ϑ e^{iψ} j)` for arbitrary real angles.
pub fn symplectic_quaternion(rho: f64, vartheta: f64, phi: f64, psi: f64) -> Quaternion {
    let (sv, cv) = vartheta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    let (ss, cs) = psi.sin_cos();
    Quaternion::new(rho * cv * cp, rho * cv * sp, rho * sv * cs, rho * sv * ss)
}

/// Phase in `[0, 2π)`; the phase of zero is 0.
fn phase(re: f64, im: f64) -> f64 {
    if re == 0.0 && im == 0.0 {
        return 0.0;
    }
    wrap_phase(im.atan2(re))
}

/// Reduce an angle into `[0, 2π)`.
pub fn wrap_phase(angle: f64) -> f64 {
    let w = angle.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

pub fn to_symplectic(q: Quaternion) -> SymplecticPolar {
    let ((a0, b0), (a1, b1)) = q.symplectic_components();
    let m0 = a0.hypot(b0);
    let m1 = a1.hypot(b1);
    SymplecticPolar {
        modulus: q.norm(),
        vartheta: m1.atan2(m0),
        phi: phase(a0, b0),
        psi: phase(a1, b1),
    }
}

/// Canonical representative of `cos θ_raw + ω sin θ_raw`.
///
/// With `θ_raw = nπ + θ0`, `θ0 ∈ [0, π)`: even `n` keeps `(θ0, ω)`, odd `n`
/// gives `(π − θ0, −ω)`.
pub fn fold_angle_cartesian(theta_raw: f64, omega: Quaternion) -> (f64, Quaternion) {
    let n = (theta_raw / PI).floor();
    let theta0 = (theta_raw - n * PI).clamp(0.0, PI);
    if (n as i64).rem_euclid(2) == 0 {
        (theta0, omega)
    } else {
        (PI - theta0, -omega)
    }
}

/// Angles of [`SymplecticPolar`] without the modulus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SymplecticAngles {
    pub vartheta: f64,
    pub phi: f64,
    pub psi: f64,
}

/// Canonical representative of `cos ϑ_raw e^{iφ} + sin ϑ_raw e^{iψ} j`.
///
/// With `ϑ_raw = nπ/2 + ϑ0`, the sign of each trigonometric factor is absorbed
/// into the matching phase:
///
/// | n mod 4 | ϑ        | φ     | ψ     |
/// |---------|----------|-------|-------|
/// | 0       | ϑ0       | φ     | ψ     |
/// | 1       | π/2 − ϑ0 | φ + π | ψ     |
/// | 2       | ϑ0       | φ + π | ψ + π |
/// | 3       | π/2 − ϑ0 | φ     | ψ + π |
///
/// Phases are returned in `[0, 2π)`.
pub fn fold_angle_symplectic(vartheta_raw: f64, phi: f64, psi: f64) -> SymplecticAngles {
    let n = (vartheta_raw / FRAC_PI_2).floor();
    let theta0 = (vartheta_raw - n * FRAC_PI_2).clamp(0.0, FRAC_PI_2);
    let (vartheta, dphi, dpsi) = match (n as i64).rem_euclid(4) {
        0 => (theta0, 0.0, 0.0),
        1 => (FRAC_PI_2 - theta0, PI, 0.0),
        2 => (theta0, PI, PI),
        _ => (FRAC_PI_2 - theta0, 0.0, PI),
    };
    SymplecticAngles {
        vartheta,
        phi: wrap_phase(phi + dphi),
        psi: wrap_phase(psi + dpsi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Quaternion, b: Quaternion, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn basis_products() {
        let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
        let m1 = Quaternion::real(-1.0);
        assert_eq!(i * i, m1);
        assert_eq!(j * j, m1);
        assert_eq!(k * k, m1);
        assert_eq!(i * j * k, m1);
        assert_eq!(i * j, k);
        assert_eq!(j * k, i);
        assert_eq!(k * i, j);
        assert_eq!(j * i, -k);
    }

    #[test]
    fn identity_and_conjugate() {
        let q = Quaternion::new(0.3, -1.2, 2.5, 0.7);
        assert_eq!(Quaternion::ONE * q, q);
        assert_eq!(q * Quaternion::ONE, q);
        let n = q * q.conj();
        assert!(n.vector_norm() < 1e-15);
        assert!((n.x0 - q.norm_sqr()).abs() < 1e-14);
        assert!(close(q * q.inverse().unwrap(), Quaternion::ONE, 1e-15));
    }

    #[test]
    fn inner_examples() {
        let p = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let q = Quaternion::new(0.0, 0.0, 1.0, 1.0);
        assert_eq!(inner(p, q), 0.0);
        let r = Quaternion::new(0.5, -2.0, 1.0, 3.0);
        assert!((inner(r, r) - r.norm_sqr()).abs() < 1e-14);
        assert_eq!(inner(r, r.conj() * Quaternion::ONE), inner(r, r.conj()));
    }

    #[test]
    fn predicates() {
        let q = Quaternion::new(0.4, -1.1, 0.3, 2.0);
        assert!(!is_orthogonal(q, q, DEFAULT_PREDICATE_TOL));
        assert!(is_orthogonal(q, q * Quaternion::J, DEFAULT_PREDICATE_TOL));
        let w = q.imaginary_unit().unwrap();
        assert!(is_orthogonal(q, w * q, DEFAULT_PREDICATE_TOL));
        assert!(is_orthogonal(Quaternion::ZERO, q, DEFAULT_PREDICATE_TOL));
        assert!(is_parallel(q, q.scale(2.5), DEFAULT_PREDICATE_TOL));
        assert!(!is_parallel(Quaternion::ONE, Quaternion::I, DEFAULT_PREDICATE_TOL));
    }

    #[test]
    fn polar_cartesian_examples() {
        let p = to_polar_cartesian(Quaternion::new(1.0, 1.0, 0.0, 0.0)).unwrap();
        assert!((p.modulus - 2f64.sqrt()).abs() < 1e-15);
        assert!((p.theta - PI / 4.0).abs() < 1e-15);
        assert_eq!(p.omega, Quaternion::I);

        let p = to_polar_cartesian(Quaternion::new(-1.0, 0.0, 1.0, 0.0)).unwrap();
        assert!((p.theta - 3.0 * PI / 4.0).abs() < 1e-15);
        assert_eq!(p.omega, Quaternion::J);

        assert_eq!(
            to_polar_cartesian(Quaternion::real(2.0)),
            Err(QuaternionError::ZeroVectorPart)
        );
    }

    #[test]
    fn symplectic_examples() {
        let s = to_symplectic(Quaternion::J);
        assert_eq!((s.modulus, s.vartheta, s.phi, s.psi), (1.0, FRAC_PI_2, 0.0, 0.0));
        let s = to_symplectic(Quaternion::ONE);
        assert_eq!((s.modulus, s.vartheta, s.phi, s.psi), (1.0, 0.0, 0.0, 0.0));

        // (1+i) + (1−i)j = 1 + i + j − k
        let q = Quaternion::new(1.0, 1.0, 1.0, -1.0);
        let s = to_symplectic(q);
        assert!((s.modulus - 2.0).abs() < 1e-15);
        assert!((s.vartheta - PI / 4.0).abs() < 1e-15);
        assert!((s.phi - PI / 4.0).abs() < 1e-15);
        assert!((s.psi - (TAU - PI / 4.0)).abs() < 1e-15);
        assert!(close(s.to_quaternion(), q, 1e-15));
    }

    #[test]
    fn cartesian_fold_examples() {
        let w = Quaternion::pure([0.0, 0.6, 0.8]);
        assert_eq!(fold_angle_cartesian(PI / 3.0, w), (PI / 3.0, w));

        let (t, o) = fold_angle_cartesian(PI + PI / 4.0, w);
        assert!((t - 3.0 * PI / 4.0).abs() < 1e-15);
        assert_eq!(o, -w);

        let (t, o) = fold_angle_cartesian(TAU + 0.2, w);
        assert!((t - 0.2).abs() < 1e-14);
        assert_eq!(o, w);

        let (t, o) = fold_angle_cartesian(-0.5, w);
        assert!((t - 0.5).abs() < 1e-15);
        assert_eq!(o, -w);
    }

    #[test]
    fn symplectic_fold_rows() {
        let phi = 0.7;
        let a = fold_angle_symplectic(0.3, phi, 1.9);
        assert_eq!((a.vartheta, a.phi, a.psi), (0.3, phi, 1.9));

        // with φ = ψ the table coincides with the (ψ − π, φ) form of the n = 1 row
        let a = fold_angle_symplectic(FRAC_PI_2 + 0.3, phi, phi);
        assert!((a.vartheta - (FRAC_PI_2 - 0.3)).abs() < 1e-15);
        assert!((a.phi - wrap_phase(phi - PI)).abs() < 1e-15);
        assert!((a.psi - phi).abs() < 1e-15);

        let a = fold_angle_symplectic(PI + 0.3, phi, phi);
        assert!((a.vartheta - 0.3).abs() < 1e-14);
        assert!((a.phi - wrap_phase(phi - PI)).abs() < 1e-15);
        assert!((a.psi - wrap_phase(phi - PI)).abs() < 1e-15);
    }

    #[test]
    fn symplectic_fold_reconstructs_for_unequal_phases() {
        for n in 0..8 {
            let raw = n as f64 * FRAC_PI_2 + 0.41;
            let (phi, psi) = (0.3, 2.2);
            let a = fold_angle_symplectic(raw, phi, psi);
            let folded = symplectic_quaternion(1.0, a.vartheta, a.phi, a.psi);
            let raw_q = symplectic_quaternion(1.0, raw, phi, psi);
            assert!(close(folded, raw_q, 1e-13), "n = {n}");
            assert!((0.0..=FRAC_PI_2).contains(&a.vartheta));
        }
    }

    #[test]
    fn serde_as_array() {
        let q = Quaternion::new(1.0, -2.0, 0.5, 3.0);
        let s = serde_json::to_string(&q).unwrap();
        assert_eq!(s, "[1.0,-2.0,0.5,3.0]");
        let back: Quaternion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, q);
        assert!(serde_json::from_str::<Quaternion>("[1,2,3]").is_err());
    }
}
