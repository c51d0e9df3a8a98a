//! Two curves have equal winding numbers when the segment between them avoids
//! the reference, or when |p − q| < |q − p0|.

use qwind::families::circle;
use qwind::homotopy::DEFAULT_PREDICATE_GRID;
use qwind::{curve, poincare_bohl_check, rouche_check, QuadratureConfig, Quaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let quad = QuadratureConfig::default();
    let p = circle(Quaternion::ZERO, 1.0, [0.0, 0.0, 1.0], 1.0, 0.0)?;
    let q = circle(Quaternion::new(0.2, 0.0, 0.0, 0.1), 1.3, [0.0, 0.0, 1.0], 1.0, 0.4)?;
    let p0 = curve::constant(p.domain(), Quaternion::ZERO);

    let pb = poincare_bohl_check(&p, &q, &p0, DEFAULT_PREDICATE_GRID, &quad)?;
    println!(
        "Poincaré–Bohl: clear = {}, min distance {:.4}, turns {} / {}, conclusion {:?}",
        pb.segments_clear, pb.min_segment_distance, pb.rp.turns, pb.rq.turns, pb.conclusion
    );

    let r = rouche_check(&p, &q, &p0, DEFAULT_PREDICATE_GRID, &quad)?;
    println!(
        "Rouché: hypothesis = {}, margin {:.4}, turns {} / {}, conclusion {:?}",
        r.hypothesis_holds, r.margin, r.rp.turns, r.rq.turns, r.conclusion
    );

    // Winding twice is not a small perturbation of winding once.
    let twice = circle(Quaternion::ZERO, 1.0, [0.0, 0.0, 1.0], 2.0, 0.0)?;
    let r = rouche_check(&p, &twice, &p0, DEFAULT_PREDICATE_GRID, &quad)?;
    println!("Rouché (1 vs 2 turns): hypothesis = {}, conclusion {:?}", r.hypothesis_holds, r.conclusion);
    Ok(())
}
