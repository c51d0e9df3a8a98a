//! Winding numbers of spirals around a moving center, for a fixed and a
//! precessing imaginary axis.

use qwind::families::{circle_spiral, OmegaFamily};
use qwind::{winding_number, QuadratureConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let axes = [
        OmegaFamily::Constant { axis: [0.0, 1.0, 0.0] },
        OmegaFamily::Precessing { axis: [1.0, 1.0, 1.0], tilt: 0.6, rate: 1.0 },
    ];
    for omega in axes {
        for n in 1..=4 {
            let (q, p0) = circle_spiral(1.5, n, omega)?;
            let w = winding_number(&q, &p0, &quad)?;
            println!(
                "{omega:?} n = {n}: turns = {} (real {:.12}, residual {:.1e}, certified {})",
                w.turns, w.turns_real, w.residual, w.certified
            );
        }
    }
    Ok(())
}
