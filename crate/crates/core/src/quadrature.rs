//! Quadrature settings and composite Simpson helpers.

use serde::{Deserialize, Serialize};

use crate::curve::Interval;
use crate::error::WindingError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct QuadratureConfig {
    /// Simpson panels on the first pass (each panel spans two subintervals).
    pub panels: usize,
    /// Number of panel doublings. The first one feeds a Richardson step; the
    /// rest are only used while the result is not certified.
    pub max_refinements: usize,
    /// A winding result is certified iff its distance to the nearest integer
    /// is below this value.
    pub certification_threshold: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels: 4096,
            max_refinements: 1,
            certification_threshold: 1e-3,
        }
    }
}

impl QuadratureConfig {
    pub fn with_panels(panels: usize) -> Self {
        Self { panels, ..Self::default() }
    }

    pub fn validate(&self) -> Result<(), WindingError> {
        if self.panels == 0 {
            return Err(WindingError::InvalidConfig("panels must be positive".into()));
        }
        if self.max_refinements > 16 {
            return Err(WindingError::InvalidConfig("max_refinements must be at most 16".into()));
        }
        let th = self.certification_threshold;
        if !(th > 0.0 && th <= 0.5) {
            return Err(WindingError::InvalidConfig(
                "certification_threshold must lie in (0, 0.5]".into(),
            ));
        }
        Ok(())
    }
}

/// Split `domain` at `breakpoints` and share `panels` among the pieces in
/// proportion to their length, at least one panel per piece.
pub fn panel_layout(domain: Interval, breakpoints: &[f64], panels: usize) -> Vec<(f64, f64, usize)> {
    let mut cuts = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(domain.a);
    cuts.extend(breakpoints.iter().copied().filter(|t| *t > domain.a && *t < domain.b));
    cuts.push(domain.b);
    let total = domain.len();
    cuts.windows(2)
        .map(|w| {
            let share = ((w[1] - w[0]) / total * panels as f64).round() as usize;
            (w[0], w[1], share.max(1))
        })
        .collect()
}

/// Composite Simpson rule with `panels` panels on `[a, b]`.
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels.max(1);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + k as f64 * h);
    }
    sum * h / 3.0
}

/// Richardson extrapolation for a fourth-order rule from results on `h` and `h/2`.
#[inline]
pub fn richardson(coarse: f64, fine: f64) -> f64 {
    fine + (fine - coarse) / 15.0
}
