//! JSON descriptions of curves, deformations, polynomials and maps.
//!
//! ```json
//! {"kind": "analytic", "name": "circle_spiral", "params": {"radius": 1.0, "turns": 3}}
//! {"kind": "sampled", "points": [[0.0, 1, 0, 0, 0], [1.0, 0, 1, 0, 0]]}
//! ```
//!
//! Families with an intrinsic parameter range (spirals, circles) reject an
//! explicit `domain` that differs from it. Families without one
//! (`constant`, `line`, `polynomial`) take `domain` from the spec or, for a
//! reference curve, from the curve it accompanies.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use thiserror::Error;

use crate::curve::{constant, Curve, Interval, SampledCurve};
use crate::error::{CurveError, HomotopyError, RootsError};
use crate::families::{
    circle, circle_spiral, line, polynomial_in_t, symplectic_spiral,
    OmegaFamily, PhaseLaw,
};
use crate::homotopy::Deformation;
use crate::quaternion::Quaternion;
use crate::roots::{GridMap, RealPolynomial, SlicePlane};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("unknown curve family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for `{name}`: {message}")]
    Params { name: String, message: String },
    #[error("curve `{0}` needs a domain")]
    MissingDomain(String),
    #[error("domain [{a}, {b}] does not match the intrinsic domain of `{name}`")]
    DomainConflict { name: String, a: f64, b: f64 },
    #[error("invalid alpha slot: {0}")]
    Alpha(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Homotopy(#[from] HomotopyError),
    #[error(transparent)]
    Roots(#[from] RootsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum CurveSpec {
    Analytic {
        name: String,
        #[serde(default)]
        params: Map<String, Value>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        domain: Option<[f64; 2]>,
    },
    Sampled { points: Vec<[f64; 5]> },
}

fn default_radius() -> f64 {
    1.0
}

fn default_turns() -> u32 {
    1
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SpiralParams {
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_turns")]
    turns: u32,
    #[serde(default)]
    omega: OmegaFamily,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SymplecticParams {
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_turns")]
    turns: u32,
    #[serde(default)]
    phase: f64,
    #[serde(default)]
    rate: f64,
    #[serde(default)]
    offset: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CircleParams {
    #[serde(default)]
    center: Option<Quaternion>,
    #[serde(default = "default_radius")]
    radius: f64,
    #[serde(default = "default_axis")]
    axis: [f64; 3],
    #[serde(default = "default_circle_turns")]
    turns: f64,
    #[serde(default)]
    start: f64,
}

fn default_axis() -> [f64; 3] {
    [1.0, 0.0, 0.0]
}

fn default_circle_turns() -> f64 {
    1.0
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstantParams {
    #[serde(default)]
    value: Option<Quaternion>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct LineParams {
    start: Quaternion,
    velocity: Quaternion,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PolynomialParams {
    /// Ascending powers of `t`.
    coeffs: Vec<Quaternion>,
}

fn params<T: serde::de::DeserializeOwned>(name: &str, p: &Map<String, Value>) -> Result<T, InputError> {
    serde_json::from_value(Value::Object(p.clone())).map_err(|e| InputError::Params {
        name: name.to_string(),
        message: e.to_string(),
    })
}

fn interval(d: [f64; 2]) -> Result<Interval, InputError> {
    Ok(Interval::new(d[0], d[1])?)
}

impl CurveSpec {
    pub fn analytic(name: &str, params: Value) -> Self {
        let params = match params {
            Value::Object(m) => m,
            _ => Map::new(),
        };
        CurveSpec::Analytic { name: name.to_string(), params, domain: None }
    }

    pub fn constant(value: Quaternion) -> Self {
        Self::analytic("constant", serde_json::json!({ "value": value }))
    }

    /// Build the curve; `fallback` supplies the domain of families without an
    /// intrinsic one.
    pub fn build(&self, fallback: Option<Interval>) -> Result<Curve, InputError> {
        match self {
            CurveSpec::Sampled { points } => Ok(SampledCurve::from_rows(points)?.into_curve()),
            CurveSpec::Analytic { name, params: p, domain } => {
                let explicit = domain.map(interval).transpose()?;
                let intrinsic = |c: Curve| -> Result<Curve, InputError> {
                    match explicit {
                        Some(d) if !d.matches(&c.domain()) => Err(InputError::DomainConflict {
                            name: name.clone(),
                            a: d.a,
                            b: d.b,
                        }),
                        _ => Ok(c),
                    }
                };
                let free = || explicit.or(fallback).ok_or_else(|| InputError::MissingDomain(name.clone()));
                match name.as_str() {
                    "circle_spiral" | "spiral_center" => {
                        let s: SpiralParams = params(name, p)?;
                        let (q, p0) = circle_spiral(s.radius, s.turns, s.omega)?;
                        intrinsic(if name == "circle_spiral" { q } else { p0 })
                    }
                    "symplectic_spiral" | "symplectic_spiral_center" => {
                        let s: SymplecticParams = params(name, p)?;
                        let law = PhaseLaw { phase: s.phase, rate: s.rate, offset: s.offset };
                        let (q, p0) = symplectic_spiral(s.radius, s.turns, law)?;
                        intrinsic(if name == "symplectic_spiral" { q } else { p0 })
                    }
                    "circle" => {
                        let s: CircleParams = params(name, p)?;
                        let c = s.center.unwrap_or(Quaternion::ZERO);
                        intrinsic(circle(c, s.radius, s.axis, s.turns, s.start)?)
                    }
                    "constant" => {
                        let s: ConstantParams = params(name, p)?;
                        let d = explicit.or(fallback).unwrap_or(Interval { a: 0.0, b: TAU });
                        Ok(constant(d, s.value.unwrap_or(Quaternion::ZERO)))
                    }
                    "line" => {
                        let s: LineParams = params(name, p)?;
                        Ok(line(free()?, s.start, s.velocity))
                    }
                    "polynomial" => {
                        let s: PolynomialParams = params(name, p)?;
                        if s.coeffs.is_empty() {
                            return Err(InputError::Params {
                                name: name.clone(),
                                message: "coeffs must not be empty".into(),
                            });
                        }
                        Ok(polynomial_in_t(free()?, s.coeffs))
                    }
                    _ => Err(InputError::UnknownFamily(name.clone())),
                }
            }
        }
    }
}

/// A curve together with the reference it is measured against.
pub fn build_pair(curve: &CurveSpec, reference: Option<&CurveSpec>) -> Result<(Curve, Curve), InputError> {
    let q = curve.build(None)?;
    let p0 = match reference {
        Some(r) => r.build(Some(q.domain()))?,
        None => constant(q.domain(), Quaternion::ZERO),
    };
    Ok((q, p0))
}

/// The curves of a spiral pair share parameters, so a reference spec may be
/// omitted and inferred: `circle_spiral` → `spiral_center`,
/// `symplectic_spiral` → `symplectic_spiral_center`.
pub fn companion(curve: &CurveSpec) -> Option<CurveSpec> {
    match curve {
        CurveSpec::Analytic { name, params, domain } => {
            let partner = match name.as_str() {
                "circle_spiral" => "spiral_center",
                "symplectic_spiral" => "symplectic_spiral_center",
                _ => return None,
            };
            Some(CurveSpec::Analytic { name: partner.into(), params: params.clone(), domain: *domain })
        }
        CurveSpec::Sampled { .. } => None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaTarget {
    #[default]
    Curve,
    Reference,
    Both,
}

/// Parameter slot driven by `α ∈ [0, 1]`: the value is `from + α(to − from)`,
/// elementwise for arrays. `param` may be a dotted path such as `omega.tilt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSlot {
    pub param: String,
    pub from: Value,
    pub to: Value,
    #[serde(default)]
    pub target: AlphaTarget,
}

fn lerp_value(from: &Value, to: &Value, alpha: f64) -> Result<Value, InputError> {
    match (from, to) {
        (Value::Number(a), Value::Number(b)) => {
            let (a, b) = (a.as_f64().unwrap_or(f64::NAN), b.as_f64().unwrap_or(f64::NAN));
            let v = a + alpha * (b - a);
            serde_json::Number::from_f64(v)
                .map(Value::Number)
                .ok_or_else(|| InputError::Alpha("non-finite value".into()))
        }
        (Value::Array(a), Value::Array(b)) if a.len() == b.len() => a
            .iter()
            .zip(b)
            .map(|(x, y)| lerp_value(x, y, alpha))
            .collect::<Result<Vec<_>, _>>()
            .map(Value::Array),
        _ => Err(InputError::Alpha("`from` and `to` must be numbers or arrays of equal shape".into())),
    }
}

fn set_path(map: &mut Map<String, Value>, path: &str, value: Value) -> Result<(), InputError> {
    let mut parts = path.split('.').peekable();
    let mut cur = map;
    while let Some(key) = parts.next() {
        if parts.peek().is_none() {
            cur.insert(key.to_string(), value);
            return Ok(());
        }
        cur = cur
            .entry(key.to_string())
            .or_insert_with(|| Value::Object(Map::new()))
            .as_object_mut()
            .ok_or_else(|| InputError::Alpha(format!("`{key}` is not an object")))?;
    }
    Err(InputError::Alpha("empty parameter path".into()))
}

impl AlphaSlot {
    fn apply(&self, spec: &CurveSpec, alpha: f64) -> Result<CurveSpec, InputError> {
        match spec {
            CurveSpec::Analytic { name, params, domain } => {
                let mut params = params.clone();
                set_path(&mut params, &self.param, lerp_value(&self.from, &self.to, alpha)?)?;
                Ok(CurveSpec::Analytic { name: name.clone(), params, domain: *domain })
            }
            CurveSpec::Sampled { .. } => Err(InputError::Alpha("sampled curves have no parameters".into())),
        }
    }
}

/// A curve and reference spec with one parameter moving with `α ∈ [0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationSpec {
    pub curve: CurveSpec,
    #[serde(default)]
    pub reference: Option<CurveSpec>,
    pub alpha: AlphaSlot,
    /// Number of uniform α intervals; endpoints are always included.
    #[serde(default = "default_alpha_intervals")]
    pub samples: usize,
}

fn default_alpha_intervals() -> usize {
    crate::homotopy::DEFAULT_ALPHA_INTERVALS
}

impl DeformationSpec {
    /// `(deformation, reference deformation)` over `α ∈ [0, 1]`.
    pub fn build(&self) -> Result<(Deformation, Deformation), InputError> {
        if self.samples == 0 {
            return Err(InputError::Alpha("samples must be positive".into()));
        }
        let reference = self
            .reference
            .clone()
            .or_else(|| companion(&self.curve))
            .unwrap_or_else(|| CurveSpec::constant(Quaternion::ZERO));
        let slot = self.alpha.clone();
        let moves_curve = slot.target != AlphaTarget::Reference;
        let moves_reference = slot.target != AlphaTarget::Curve;

        // validate both ends eagerly so the families below cannot fail
        let mut domain = None;
        for alpha in [0.0, 1.0] {
            let (q, p0) = self.pair_at(&reference, alpha, moves_curve, moves_reference)?;
            let d = *domain.get_or_insert(q.domain());
            if !d.matches(&q.domain()) || !d.matches(&p0.domain()) {
                return Err(InputError::Alpha("the alpha slot changes the curve domain".into()));
            }
        }
        let domain = domain.expect("two samples");
        let unit = Interval { a: 0.0, b: 1.0 };

        let this = self.clone();
        let r = reference.clone();
        let d = Deformation::new(domain, unit, move |alpha| {
            this.pair_at(&r, alpha, moves_curve, false).expect("validated").0
        })?;
        let this = self.clone();
        let rd = Deformation::new(domain, unit, move |alpha| {
            this.pair_at(&reference, alpha, false, moves_reference).expect("validated").1
        })?;
        Ok((d, rd))
    }

    fn pair_at(
        &self,
        reference: &CurveSpec,
        alpha: f64,
        moves_curve: bool,
        moves_reference: bool,
    ) -> Result<(Curve, Curve), InputError> {
        let c = if moves_curve { self.alpha.apply(&self.curve, alpha)? } else { self.curve.clone() };
        let r = if moves_reference { self.alpha.apply(reference, alpha)? } else { reference.clone() };
        build_pair(&c, Some(&r))
    }

    pub fn alphas(&self) -> Vec<f64> {
        Interval { a: 0.0, b: 1.0 }.linspace(self.samples + 1)
    }
}

/// `{"coeffs": [a_n, …, a_0], "center": [x0, x1, x2, x3], "slice": [u1, u2, u3]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialSpec {
    pub coeffs: Vec<f64>,
    #[serde(default)]
    pub center: Option<Quaternion>,
    #[serde(default)]
    pub slice: Option<[f64; 3]>,
}

impl PolynomialSpec {
    pub fn polynomial(&self) -> Result<RealPolynomial, InputError> {
        Ok(RealPolynomial::new(self.coeffs.clone(), self.center.unwrap_or(Quaternion::ZERO))?)
    }

    /// The slice from `override_dir`, the spec, or the direction of a
    /// non-real center, in that order.
    pub fn slice(&self, override_dir: Option<[f64; 3]>) -> Option<Result<SlicePlane, InputError>> {
        if let Some(d) = override_dir.or(self.slice) {
            return Some(SlicePlane::new(d).map_err(Into::into));
        }
        let v = self.center?.vector();
        v.normalized().map(|u| SlicePlane::from_unit(u).map_err(Into::into))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiscSpec {
    pub center: [f64; 2],
    pub radius: f64,
}

/// Map for the preimage search: a polynomial or a sampled grid map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapSpec {
    Polynomial(PolynomialSpec),
    Grid(GridMap),
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn spec(v: Value) -> CurveSpec {
        serde_json::from_value(v).unwrap()
    }

    #[test]
    fn builds_spiral_pair_with_companion() {
        let c = spec(json!({"kind": "analytic", "name": "circle_spiral", "params": {"radius": 2.0, "turns": 3}}));
        let r = companion(&c).unwrap();
        let (q, p0) = build_pair(&c, Some(&r)).unwrap();
        assert!((q.domain().b - 6.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(((q.eval(0.3) - p0.eval(0.3)).norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn reference_adopts_curve_domain() {
        let c = spec(json!({"kind": "analytic", "name": "circle"}));
        let r = spec(json!({"kind": "analytic", "name": "line", "params": {"start": [0,0,0,0], "velocity": [0,0,0,0]}}));
        let (q, p0) = build_pair(&c, Some(&r)).unwrap();
        assert!(q.domain().matches(&p0.domain()));
        let lone = r.build(None);
        assert!(matches!(lone, Err(InputError::MissingDomain(_))));
    }

    #[test]
    fn parameter_errors() {
        let bad = spec(json!({"kind": "analytic", "name": "circle", "params": {"radius": 1, "colour": 3}}));
        assert!(matches!(bad.build(None), Err(InputError::Params { .. })));
        let unknown = spec(json!({"kind": "analytic", "name": "trefoil"}));
        assert!(matches!(unknown.build(None), Err(InputError::UnknownFamily(_))));
        let clash = spec(json!({"kind": "analytic", "name": "circle", "domain": [0, 1]}));
        assert!(matches!(clash.build(None), Err(InputError::DomainConflict { .. })));
    }

    #[test]
    fn sampled_curve() {
        let c = spec(json!({"kind": "sampled", "points": [[0, 1, 0, 0, 0], [1, 0, 1, 0, 0], [2, 1, 0, 0, 0]]}));
        let q = c.build(None).unwrap();
        assert_eq!(q.eval(0.5), Quaternion::new(0.5, 0.5, 0.0, 0.0));
    }

    #[test]
    fn alpha_slot_moves_nested_parameter() {
        let d: DeformationSpec = serde_json::from_value(json!({
            "curve": {"kind": "analytic", "name": "circle_spiral",
                      "params": {"radius": 1.0, "turns": 2, "omega": {"kind": "precessing", "axis": [0, 0, 1], "tilt": 0.0, "rate": 1.0}}},
            "alpha": {"param": "omega.tilt", "from": 0.0, "to": 0.8, "target": "both"},
            "samples": 4
        }))
        .unwrap();
        let (def, reference) = d.build().unwrap();
        assert_eq!(d.alphas().len(), 5);
        let q = def.at(0.5);
        let p0 = reference.at(0.5);
        assert!(((q.eval(1.0) - p0.eval(1.0)).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn alpha_vector_parameter() {
        let d: DeformationSpec = serde_json::from_value(json!({
            "curve": {"kind": "analytic", "name": "circle"},
            "reference": {"kind": "analytic", "name": "constant", "params": {"value": [0, 0, 0, 0]}},
            "alpha": {"param": "value", "from": [2, 0, 0, 0], "to": [0, 0, 0, 0], "target": "reference"}
        }))
        .unwrap();
        let (_, r) = d.build().unwrap();
        assert_eq!(r.eval(0.25, 1.0), Quaternion::real(1.5));
        assert_eq!(d.samples, 64);
    }

    #[test]
    fn polynomial_slice_resolution() {
        let p: PolynomialSpec = serde_json::from_value(json!({"coeffs": [1, 0, 1], "center": [0, 0, 2, 0]})).unwrap();
        let s = p.slice(None).unwrap().unwrap();
        assert_eq!(s.direction(), [0.0, 1.0, 0.0]);
        assert_eq!(p.slice(Some([0.0, 0.0, 3.0])).unwrap().unwrap().direction(), [0.0, 0.0, 1.0]);
        let real: PolynomialSpec = serde_json::from_value(json!({"coeffs": [1, 0, 1]})).unwrap();
        assert!(real.slice(None).is_none());
    }
}
