//! Stability of the medial axis and of reconstructibility along shape
//! families: a translated set, a jittered set, and a line that opens a gap.
//!
//!     cargo run --release --example stability

use medial_recon::reconstruction::{Pipeline, PipelineConfig};
use medial_recon::scenarios::build_scenario;
use medial_recon::stability::{
    liminf_inclusion_check, margin_jitter_check, oracle_coverage, random_probes, Generator,
    ShapeFamily,
};
use medial_recon::Point;

fn main() -> medial_recon::Result<()> {
    let config = PipelineConfig::default();

    // translating the four corners moves the medial axis rigidly
    let (corners, _) = build_scenario("square_corners", None, None)?;
    let family = ShapeFamily::new(
        &corners,
        Generator::Translate {
            direction: Point::new(0.6, 0.8),
        },
        vec![0.0, 0.01, 0.05, 0.1],
    )?;
    let pipelines = family.pipelines(config)?;
    let graphs: Vec<_> = pipelines.iter().map(|p| &p.graph).collect();
    let probes = [Point::new(0.3, 0.0), Point::new(0.0, -0.7)];
    let report = liminf_inclusion_check(&family, &graphs, &probes, corners.window(), 0.01)?;
    for (k, t) in report.ladder.iter().enumerate() {
        let d: Vec<String> = report
            .distances
            .iter()
            .map(|row| format!("{:.4}", row[k]))
            .collect();
        println!(
            "t = {t:<5} distance of probes to the moved axis: {}",
            d.join(", ")
        );
    }
    println!("distances trend to zero: {}", report.all_trend_to_zero());

    // jitter below a quarter of the oracle margin never flips a probe
    let (spade, _) = build_scenario("spade_like", None, None)?;
    let base = Pipeline::new(spade.clone(), config)?;
    let probes = random_probes(&base, spade.window(), 10, 7);
    let outcomes = margin_jitter_check(&spade, &probes, 0.25, 3, config)?;
    let flips = outcomes.iter().filter(|o| o.flipped()).count();
    println!(
        "spade_like: {} probes jittered at a quarter margin, {flips} flipped",
        outcomes.len()
    );

    // a line is not reconstructible anywhere; any gap makes it nearly all so
    let (line, _) = build_scenario("line", None, None)?;
    let gaps = ShapeFamily::new(
        &line,
        Generator::Gap { at: Point::ORIGIN },
        vec![0.0, 0.01, 0.1],
    )?;
    for (t, p) in gaps.ladder.iter().zip(gaps.pipelines(config)?) {
        println!(
            "gap half-width {t:<5} oracle coverage {:.4}",
            oracle_coverage(&p, line.window(), 0.02, 4)?
        );
    }
    Ok(())
}
