//! Winding numbers along a deformation, and what happens when the curve is
//! pushed through the reference.

use std::f64::consts::TAU;

use qwind::families::circle;
use qwind::homotopy::default_alphas;
use qwind::{invariance_check, Deformation, HomotopyError, Interval, QuadratureConfig, Quaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let domain = Interval::new(0.0, TAU)?;
    let unit = Interval::new(0.0, 1.0)?;
    let origin = Deformation::from_map(domain, unit, |_, _| Quaternion::ZERO)?;

    // An ellipse in the slice ℝ + ℝk that stretches and drifts, always around 0.
    let ellipse = Deformation::from_map(domain, unit, |a, t| {
        Quaternion::new((1.0 + a) * t.cos() + 0.3 * a, 0.0, 0.0, (1.0 - 0.5 * a) * t.sin())
    })?;
    let report = invariance_check(&ellipse, &origin, &default_alphas(unit), &quad)?;
    println!("ellipse: distinct turns {:?}, pass = {}", report.distinct_turns, report.pass);

    // Moving the reference from 2 to 0 crosses the unit circle.
    let q = circle(Quaternion::ZERO, 1.0, [0.0, 1.0, 0.0], 1.0, 0.0)?;
    let stays = Deformation::stationary(&q, unit)?;
    let sliding = Deformation::from_map(domain, unit, |a, _| Quaternion::real(2.0 - 2.0 * a))?;
    match invariance_check(&stays, &sliding, &default_alphas(unit), &quad) {
        Err(HomotopyError::CurvesIntersect { alpha, t, distance }) => {
            println!("reference meets the curve at α = {alpha:.6}, t = {t:.6} (distance {distance:.1e})")
        }
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
