//! Classifies a grid with the union-of-balls oracle and with the convex
//! hull plus qualifying half-planes, then compares the two.
//!
//!     cargo run --release --example classify -- [scenario] [output-dir]

use std::path::PathBuf;

use medial_recon::export::{raster_pgm, raster_svg};
use medial_recon::reconstruction::{compare_rasters, Decider, Label, Pipeline, PipelineConfig};
use medial_recon::scenarios::build_scenario;

fn main() -> medial_recon::Result<()> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "square_corners".into());
    let out = PathBuf::from(args.next().unwrap_or_else(|| ".".into()));

    let (shape, _) = build_scenario(&name, None, None)?;
    let window = shape.window();
    let p = Pipeline::new(shape, PipelineConfig::default())?;
    for line in &p.family.lines {
        if line.qualifies && !line.truncation_artifact {
            let reason = line.reason.map(|r| r.as_str()).unwrap_or("");
            println!("qualifying line {:?} ({reason})", line.plane);
        }
    }

    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let oracle = p.rasterize(Decider::Oracle, window, 0.02, workers)?;
    let theorem = p.rasterize(Decider::Theorem, window, 0.02, workers)?;
    for r in [&oracle, &theorem] {
        let counts: Vec<String> = Label::ALL
            .iter()
            .map(|l| format!("{}={}", l.as_str(), r.count(*l)))
            .collect();
        println!("{:>8}: {}", r.decider.to_string(), counts.join(" "));
    }
    let cmp = compare_rasters(&oracle, &theorem)?;
    println!(
        "agreement {:.4} over {} cells, {} mismatches",
        cmp.agreement,
        cmp.compared,
        cmp.mismatches.len()
    );

    std::fs::create_dir_all(&out)?;
    std::fs::write(out.join(format!("{name}_oracle.pgm")), raster_pgm(&oracle))?;
    std::fs::write(
        out.join(format!("{name}_theorem.svg")),
        raster_svg(&theorem, &p),
    )?;
    println!(
        "wrote {name}_oracle.pgm and {name}_theorem.svg to {}",
        out.display()
    );
    Ok(())
}
