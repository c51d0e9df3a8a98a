//! Solve F(q) = target inside a disc of a slice when the boundary image winds
//! around the target.

use qwind::roots::{brouwer_value_check, FnMap, PreimageOutcome};
use qwind::{QuadratureConfig, Quaternion, SlicePlane};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let slice = SlicePlane::new([0.0, 1.0, 0.0])?;
    let u = slice.u();
    // F(x + yu) = (x³ − 3xy² + y) + (3x²y − y³ − x)u, a smooth map of the slice
    let f = FnMap(move |q: Quaternion| {
        let (x, y) = (q.scalar(), q.inner(u));
        Quaternion::real(x * x * x - 3.0 * x * y * y + y) + u.scale(3.0 * x * x * y - y * y * y - x)
    });
    let target = slice.point(0.5, 0.25);
    for radius in [0.2, 3.0] {
        match brouwer_value_check(&f, &slice, target, (0.0, 0.0), radius, 1e-7, &quad)? {
            PreimageOutcome::Found { boundary_winding, enclosures } => {
                println!("radius {radius}: boundary winding {boundary_winding}");
                for e in enclosures {
                    let residual = (f.0(e.point()) - target).norm();
                    println!("  ({:+.7}, {:+.7}) winding {} residual {residual:.1e}", e.center.0, e.center.1, e.winding);
                }
            }
            PreimageOutcome::NotApplicable { boundary_winding } => {
                println!("radius {radius}: boundary winding {boundary_winding}, no conclusion")
            }
        }
    }
    Ok(())
}
