//! Localize the roots of a real polynomial in a slice of ℍ by counting
//! windings of its image over shrinking squares.

use qwind::{localize_roots, QuadratureConfig, Quaternion, RealPolynomial, SlicePlane};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // (q² + 1)(q − 2)(q + 0.5) = q⁴ − 1.5q³ + 0q² − 1.5q − 1
    let f = RealPolynomial::new(vec![1.0, -1.5, 0.0, -1.5, -1.0], Quaternion::ZERO)?;
    let slice = SlicePlane::new([1.0, 2.0, 2.0])?;
    println!("containment radius {:.4}", f.containment_radius());

    let roots = localize_roots(&f, &slice, 1e-8, &QuadratureConfig::default())?;
    for r in &roots {
        let z = r.point();
        println!(
            "({:+.9}, {:+.9}) radius {:.1e} winding {} {:?}, |f| = {:.1e}",
            r.center.0,
            r.center.1,
            r.radius,
            r.winding,
            r.status,
            f.evaluate(z).norm()
        );
    }
    // Each root a ± bu of the slice lies on the sphere a + b·S² of roots.
    let other = SlicePlane::new([0.0, 1.0, 0.0])?;
    let i = roots.iter().find(|r| r.center.1 > 0.5).expect("root at u");
    println!("sphere point: |f| = {:.1e}", f.evaluate(other.point(i.center.0, i.center.1)).norm());
    Ok(())
}
