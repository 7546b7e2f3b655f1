//! Recovers a set from its medial axis with Giblin's formula
//! `x± = γ - d d' T ± d sqrt(1 - d'²) N`, on two points and on the graph
//! of the logarithm with the point (-1, 0).
//!
//!     cargo run --release --example giblin

use medial_recon::reconstruction::{reconstruct_branches, Pipeline, PipelineConfig};
use medial_recon::scenarios::build_scenario;
use medial_recon::stability::one_sided_distance;
use medial_recon::Point;

fn main() -> medial_recon::Result<()> {
    for name in ["two_points", "logarithm"] {
        let (shape, _) = build_scenario(name, None, None)?;
        let window = shape.window();
        let p = Pipeline::new(shape, PipelineConfig::default())?;
        // the isolated point of the logarithm scenario lies on no branch
        let isolated = Point::new(-1.0, 0.0);
        let graph: Vec<Point> = p
            .shape
            .samples()
            .iter()
            .copied()
            .filter(|s| window.contains(*s) && (name == "two_points" || *s != isolated))
            .collect();
        println!("{name}:");
        for (k, (path, out)) in reconstruct_branches(&p.graph, &p.shape, window)
            .into_iter()
            .enumerate()
        {
            let out = out?;
            let recovered: Vec<Point> = out.points().filter(|q| window.contains(*q)).collect();
            let near = graph
                .iter()
                .filter(|g| {
                    recovered
                        .iter()
                        .any(|q| q.dist(**g) < 3.0 * p.shape.spacing())
                })
                .count();
            println!(
                "  branch {k} from ({:.3}, {:.3}): {} parameters, residual {:.2e}, recovers {near}/{} samples",
                path[0].x,
                path[0].y,
                out.params.len(),
                out.max_residual,
                graph.len()
            );
            if near == graph.len() {
                println!(
                    "    one-sided distance to the output {:.2e}",
                    one_sided_distance(&graph, &recovered)?
                );
            }
        }
    }
    Ok(())
}
