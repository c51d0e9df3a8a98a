//! Differential identities of the unit axis ω(t) along a curve.

use std::f64::consts::TAU;

use qwind::curve::{check_omega_identities, omega_of};
use qwind::{Curve, Interval, Quaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // x(t) = eᵗ(cos t i + sin t j) + cos 2t
    let x = Curve::new(Interval::new(0.0, TAU)?, |t: f64| {
        Quaternion::new((2.0 * t).cos(), t.exp() * t.cos(), t.exp() * t.sin(), 0.3 * t.sin())
    });
    let grid = x.domain().linspace(1000);
    let report = check_omega_identities(&x, &grid)?;
    println!("{}", serde_json::to_string_pretty(&report)?);

    let omega = omega_of(&x)?;
    for t in [0.5, 1.5, 4.0] {
        let (w, dw) = (omega.eval(t), omega.derivative(t));
        println!("t = {t}: ω·ω′ + ω′·ω = {:?}", (w * dw + dw * w).to_array());
    }
    Ok(())
}
