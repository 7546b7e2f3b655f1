//! The graph of y = ln x with the point (-1, 0): the tangent through the
//! point, the qualifying lines of the hull and the region no ball reaches.
//!
//!     cargo run --release --example logarithm

use medial_recon::reconstruction::{Decider, Label, Pipeline, PipelineConfig};
use medial_recon::scenarios::{build_scenario, lambert_w0, log_tangency_abscissa, quoted_xi};
use medial_recon::Point;

fn main() -> medial_recon::Result<()> {
    // the tangent through (-1, 0) touches where ln x = 1 + 1/x
    let x0 = log_tangency_abscissa();
    println!(
        "W(1/e) = {:.12}, tangency at x0 = {x0:.6}, slope {:.6}",
        lambert_w0((-1.0f64).exp())?,
        1.0 / x0
    );
    let xi = quoted_xi();
    println!(
        "e^(W(1)+1) = {xi:.6}; ln xi - (xi+1)/xi = {:.4} (not a tangency)",
        xi.ln() - (xi + 1.0) / xi
    );

    let (shape, _) = build_scenario("logarithm", None, None)?;
    let window = shape.window();
    let p = Pipeline::new(shape, PipelineConfig::default())?;
    for line in p.family.lines.iter().filter(|l| l.qualifies) {
        let tag = if line.truncation_artifact {
            " (truncation artifact)"
        } else {
            ""
        };
        println!(
            "qualifying: {:.6} x + {:.6} y = {:.6}{tag}",
            line.plane.normal.x, line.plane.normal.y, line.plane.offset
        );
    }

    // in the gap right of the tangency, in the hull left of it, above the
    // tangent line, and below the graph
    for q in [
        Point::new(6.0, 1.85),
        Point::new(2.0, 0.75),
        Point::new(6.0, 3.0),
        Point::new(6.0, 1.0),
    ] {
        println!(
            "{q}: oracle {}, theorem {}",
            p.oracle(q),
            p.theorem(q).as_str()
        );
    }

    let r = p.rasterize(Decider::Theorem, window, 0.05, 4)?;
    println!(
        "{} of {} cells are not reconstructible",
        r.count(Label::NotRecon),
        r.labels.len()
    );
    Ok(())
}
