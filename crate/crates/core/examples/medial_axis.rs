//! Medial axis of a sampled concave polygon, before and after removing
//! sampling artifacts, written out as an SVG figure.
//!
//!     cargo run --example medial_axis -- [output.svg]

use medial_recon::export::medial_svg;
use medial_recon::medial::{prune_sampling_artifacts, voronoi_medial_axis, DEFAULT_KAPPA};
use medial_recon::scenarios::build_scenario;

fn main() -> medial_recon::Result<()> {
    let (shape, scenario) = build_scenario("spade_like", None, None)?;
    println!(
        "{}: {} samples",
        scenario.description,
        shape.samples().len()
    );

    let raw = voronoi_medial_axis(&shape)?;
    let pruned = prune_sampling_artifacts(&raw, &shape, DEFAULT_KAPPA)?;
    for (name, g) in [("raw", &raw), ("pruned", &pruned)] {
        println!(
            "{name:>6}: {} vertices, {} edges, {} rays, {} components",
            g.vertices.len(),
            g.edges.len(),
            g.rays.len(),
            g.component_count()
        );
    }

    // every medial vertex is equidistant from its witnesses
    let sites = &pruned.sites;
    let worst = pruned
        .vertices
        .iter()
        .flat_map(|v| {
            v.witnesses
                .iter()
                .map(move |w| (sites[*w].dist(v.position) - v.radius).abs())
        })
        .fold(0.0, f64::max);
    println!("largest witness-distance spread: {worst:.2e}");

    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "spade_like_medial.svg".into());
    std::fs::write(&path, medial_svg(&shape, &pruned, shape.window()))?;
    println!("wrote {path}");
    Ok(())
}
