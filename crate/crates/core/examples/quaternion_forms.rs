//! Cartesian and symplectic polar forms of a quaternion.

use qwind::quaternion::{symplectic_quaternion, Quaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let q = Quaternion::new(1.0, -2.0, 0.5, 3.0);

    let polar = q.to_polar_cartesian()?;
    println!("q = {:?}", q.to_array());
    println!("cartesian: |q| = {:.6}, θ = {:.6}, ω = {:?}", polar.modulus, polar.theta, polar.omega.to_array());
    println!("  ω² = {:?}", (polar.omega * polar.omega).to_array());
    println!("  back: {:?}", polar.to_quaternion().to_array());

    let s = q.to_symplectic();
    println!("symplectic: ρ = {:.6}, ϑ = {:.6}, φ = {:.6}, ψ = {:.6}", s.modulus, s.vartheta, s.phi, s.psi);
    println!("  back: {:?}", symplectic_quaternion(s.modulus, s.vartheta, s.phi, s.psi).to_array());

    let (z0, z1) = q.symplectic_components();
    println!("q = z0 + z1 j with z0 = {z0:?}, z1 = {z1:?}");
    Ok(())
}
