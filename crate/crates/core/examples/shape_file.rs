//! Describes a set in the TOML shape format, an open arc of a circle, an
//! isolated point and a segment, and queries single points.
//!
//!     cargo run --example shape_file -- [shape.toml]

use medial_recon::reconstruction::{Pipeline, PipelineConfig};
use medial_recon::{Point, Shape};

const CRESCENT: &str = r#"
window = [-2.5, 2.5, -2.0, 2.0]
spacing = 0.02

[[pieces]]
kind = "curve"
curve = { name = "circle", center = [0.0, 0.0], radius = 1.0 }
t0 = 0.6
t1 = 5.683185307179586

[[pieces]]
kind = "point"
at = [1.6, 0.0]

[[pieces]]
kind = "segment"
a = [-1.5, -1.5]
b = [1.5, -1.5]
"#;

fn main() -> medial_recon::Result<()> {
    let shape = match std::env::args().nth(1) {
        Some(path) => Shape::from_file(path)?,
        None => Shape::from_toml_str(CRESCENT)?,
    };
    println!(
        "{} samples in {} chains, spacing {:.3}",
        shape.samples().len(),
        shape.chains().len(),
        shape.spacing()
    );

    let p = Pipeline::new(shape, PipelineConfig::default())?;
    println!("{} qualifying lines", p.family.qualifying().count());
    for q in [
        Point::new(0.0, 0.0),
        Point::new(1.2, 0.0),
        Point::new(0.0, -1.8),
        Point::new(2.2, 1.5),
    ] {
        println!(
            "{q}: distance {:.4}, oracle {} (margin {:+.4}), theorem {}",
            p.shape.distance(q),
            p.oracle(q),
            p.oracle_margin(q),
            p.theorem(q).as_str()
        );
    }
    Ok(())
}
