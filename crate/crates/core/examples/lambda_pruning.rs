//! λ-medial axis of a rectangle with a gap of width g in its right side.
//! Once λ reaches g/2 the bisector through the gap is pruned and the far
//! side is no longer reached, while the inside of the rectangle still is.
//!
//!     cargo run --release --example lambda_pruning -- [g]

use medial_recon::medial::lambda_prune;
use medial_recon::reconstruction::{conjecture_harness, Decider, Pipeline, PipelineConfig};
use medial_recon::scenarios::{gap_rectangle, DEFAULT_SPACING};
use medial_recon::Point;

fn main() -> medial_recon::Result<()> {
    let g: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.2);
    let shape = gap_rectangle(g, DEFAULT_SPACING, None)?.build()?;
    let window = shape.window();
    let p = Pipeline::new(shape, PipelineConfig::default())?;

    let inside = Point::new(0.5, 0.0);
    let beyond = Point::new(2.6, 0.0);
    println!(
        "{:>7} {:>9} {:>12} {:>8} {:>8}",
        "lambda", "elements", "recon cells", "inside", "beyond"
    );
    for lambda in [0.0, g / 4.0, g / 2.0, 0.6 * g, g, 2.0 * g] {
        let pruned = lambda_prune(&p.graph, lambda)?;
        let cover = p.lambda_cover(lambda)?;
        let r = p.rasterize(Decider::Lambda(lambda), window, 0.02, 4)?;
        println!(
            "{lambda:>7.3} {:>9} {:>12} {:>8} {:>8}",
            pruned.vertices.len() + pruned.edges.len() + pruned.rays.len(),
            r.reconstructible_decisions(),
            cover.contains(inside),
            cover.contains(beyond)
        );
    }

    // points of the hull far enough from the set that are still missed
    let report = conjecture_harness(&p, 0.6 * g, window, 0.02, 4)?;
    println!(
        "conjecture harness at lambda = {:.3}: {} candidates, {} counterexamples",
        report.lambda,
        report.candidates,
        report.counterexamples.len()
    );
    Ok(())
}
