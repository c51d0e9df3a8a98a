use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum QuaternionError {
    #[error("vector part is zero; the polar imaginary unit is undefined")]
    ZeroVectorPart,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CurveError {
    #[error("vector part vanishes at t = {t}")]
    ZeroVectorPart { t: f64 },
    #[error("invalid domain [{a}, {b}]")]
    InvalidDomain { a: f64, b: f64 },
    #[error("curve domains differ: [{a0}, {b0}] vs [{a1}, {b1}]")]
    DomainMismatch { a0: f64, b0: f64, a1: f64, b1: f64 },
    #[error("invalid samples: {0}")]
    InvalidSamples(String),
    #[error("curve value is not finite at t = {t}")]
    NonFinite { t: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WindingError {
    #[error("curves intersect at t = {t} (|p| = {distance:e})")]
    CurvesIntersect { t: f64, distance: f64 },
    #[error("{which} is not closed (endpoint gap {gap:e})")]
    NotClosed { which: &'static str, gap: f64 },
    #[error("phase constraint φ = ψ violated at t = {t} (deviation {deviation:e})")]
    PhaseConstraintViolated { t: f64, deviation: f64 },
    #[error("curve value vanishes at t = {t}")]
    ZeroCurveValue { t: f64 },
    #[error("invalid quadrature configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HomotopyError {
    #[error("deformation meets the reference at alpha = {alpha}, t = {t} (distance {distance:e})")]
    CurvesIntersect { alpha: f64, t: f64, distance: f64 },
    #[error("invalid deformation: {0}")]
    InvalidDeformation(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Winding(#[from] WindingError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootsError {
    #[error("polynomial has degree zero")]
    ZeroDegree,
    #[error("coefficient {index} is not real")]
    NonRealCoefficient { index: usize },
    #[error("coefficient {index} is not finite")]
    NonFiniteCoefficient { index: usize },
    #[error("slice direction must be a nonzero pure imaginary vector")]
    InvalidSlice,
    #[error("polynomial center does not lie in the slice")]
    NonSliceCenter,
    #[error("target does not lie in the slice")]
    TargetNotInSlice,
    #[error("image curve passes through the target at t = {t} (|F - p0| = {distance:e})")]
    ImageHitsTarget { t: f64, distance: f64 },
    #[error("no usable contour near center ({re}, {im}) radius {radius} after jitter")]
    ContourStuck { re: f64, im: f64, radius: f64 },
    #[error("subdivision exceeded {limit} cells")]
    TooManyCells { limit: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Winding(#[from] WindingError),
}
