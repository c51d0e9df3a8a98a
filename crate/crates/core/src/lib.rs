//! Winding numbers of closed quaternionic curves.
//!
//! A curve `q: [a, b] → ℍ` is written in polar form `p = |p| e^{θω}` with a
//! unit imaginary axis `ω`. The polar angular function accumulates
//! `⟨p ω, p′⟩ / |p|²` along the curve, and its total over `2π` is the winding
//! number around a reference curve. On slice-preserving curves it reduces to
//! the classical complex winding number, which is what [`roots`] uses to
//! localize zeros of polynomials with real coefficients.

pub mod cli;
pub mod curve;
pub mod error;
pub mod families;
pub mod homotopy;
pub mod input;
pub mod quadrature;
pub mod quaternion;
pub mod roots;
pub mod winding;

pub use curve::{Curve, Interval};
pub use error::{CurveError, HomotopyError, QuaternionError, RootsError, WindingError};
pub use homotopy::{invariance_check, poincare_bohl_check, rouche_check, Deformation, Homotopy};
pub use quadrature::QuadratureConfig;
pub use quaternion::Quaternion;
pub use roots::{localize_roots, RealPolynomial, RootEnclosure, SlicePlane};
pub use winding::{symplectic_winding, winding_number, WindingResult};
