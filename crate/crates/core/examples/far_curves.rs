//! A curve winds zero times around a reference that stays far outside it.

use qwind::families::circle;
use qwind::winding::winding_far_curve_check;
use qwind::{QuadratureConfig, Quaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let q = circle(Quaternion::ZERO, 1.0, [1.0, 0.0, 0.0], 1.0, 0.0)?;
    let far = [
        circle(Quaternion::new(10.0, 0.0, 0.0, 0.0), 1.0, [0.0, 1.0, 0.0], 1.0, 0.0)?,
        circle(Quaternion::ZERO, 10.0, [0.0, 0.0, 1.0], 2.0, 0.0)?,
    ];
    for p in &far {
        let r = winding_far_curve_check(&q, p, &quad)?;
        println!(
            "ρ0 = {:.3}, ρ = {:.3}, far = {}, turns = {}, consistent = {}",
            r.rho0, r.rho, r.hypothesis_holds, r.winding.turns, r.consistent()
        );
    }

    // A coplanar far circle traced like q still winds.
    let coplanar = circle(Quaternion::ZERO, 10.0, [1.0, 0.0, 0.0], 1.0, 0.0)?;
    let r = winding_far_curve_check(&q, &coplanar, &quad)?;
    println!("coplanar: turns = {}", r.winding.turns);
    Ok(())
}
