//! Symplectic spirals and the symplectic integrand ρ²ϑ′.

use qwind::families::{symplectic_spiral, PhaseLaw};
use qwind::winding::{phase_deviation, symplectic_integrand};
use qwind::{symplectic_winding, QuadratureConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let law = PhaseLaw { phase: 0.3, rate: 1.0, offset: 0.0 };
    for n in 1..=3 {
        let (q, p0) = symplectic_spiral(2.0, n, law)?;
        let w = symplectic_winding(&q, &p0, &quad)?;
        let p = q.difference(&p0)?;
        let (dev, _) = phase_deviation(&p);
        println!(
            "n = {n}: turns = {}, quarter sectors = {}, phase deviation {dev:.1e}, integrand(1.0) = {:.12}",
            w.winding.turns,
            w.quarter_sectors,
            symplectic_integrand(&p, 1.0)?
        );
    }
    Ok(())
}
