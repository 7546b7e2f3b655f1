//! Perturbation families of a shape and how the medial axis and the
//! reconstructible set respond to them.
//!
//! Limits are never asserted. Families are finite ladders of parameters, and
//! the reports describe trends along the ladder.

use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rstar::RTree;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Point, Vector, Window};
use crate::medial::MedialAxisGraph;
use crate::reconstruction::{Pipeline, PipelineConfig};
use crate::shape::Shape;

/// `max_{a in A} min_{b in B} |a - b|`.
pub fn one_sided_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::contract(
            "set distance needs two non-empty point sets",
        ));
    }
    let tree = RTree::bulk_load(b.iter().map(|p| p.to_array()).collect());
    Ok(a.iter()
        .map(|p| {
            let q = tree.nearest_neighbor(p.to_array()).expect("non-empty tree");
            p.dist(Point::from(*q))
        })
        .fold(0.0, f64::max))
}

pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64> {
    Ok(one_sided_distance(a, b)?.max(one_sided_distance(b, a)?))
}

/// Points along the part of the graph inside `window`, at most `h` apart
/// along each piece, plus the vertices in the window.
pub fn sample_graph(graph: &MedialAxisGraph, window: Window, h: f64) -> Result<Vec<Point>> {
    if !(h > 0.0) {
        return Err(Error::contract("graph sampling step must be positive"));
    }
    let mut out: Vec<Point> = graph
        .vertices
        .iter()
        .map(|v| v.position)
        .filter(|p| window.contains(*p))
        .collect();
    for (a, b) in graph.segments_in(window) {
        let n = (a.dist(b) / h).ceil().max(1.0) as usize;
        out.extend((0..=n).map(|k| a.lerp(b, k as f64 / n as f64)));
    }
    Ok(out)
}

/// How the members of a family are generated from the base shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "snake_case", deny_unknown_fields)]
pub enum Generator {
    /// `X + t v`.
    Translate { direction: Vector },
    /// Every sample moved by `t` times a fixed random vector of the unit
    /// disc; the vectors depend only on the seed.
    Jitter { seed: u64 },
    /// Samples within `t` of `at` removed.
    Gap { at: Point },
    /// Explicit members, one shape file per ladder entry.
    Custom { files: Vec<PathBuf> },
}

/// A generator with its parameter ladder, as read from a family file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub generator: Generator,
    pub ladder: Vec<f64>,
}

impl FamilySpec {
    pub fn from_toml_str(text: &str) -> Result<FamilySpec> {
        Ok(toml::from_str(text)?)
    }

    /// Relative `files` of a custom family are resolved against the family
    /// file's directory.
    pub fn from_file(path: impl AsRef<std::path::Path>) -> Result<FamilySpec> {
        let path = path.as_ref();
        let mut spec = FamilySpec::from_toml_str(&std::fs::read_to_string(path)?)?;
        if let Generator::Custom { files } = &mut spec.generator {
            let dir = path.parent().unwrap_or(std::path::Path::new("."));
            for f in files.iter_mut() {
                if f.is_relative() {
                    *f = dir.join(&*f);
                }
            }
        }
        Ok(spec)
    }
}

/// Shapes `X_t` over a ladder of parameters that includes `t = 0`, where
/// the member is the base shape itself.
#[derive(Clone, Debug)]
pub struct ShapeFamily {
    pub generator: Generator,
    pub ladder: Vec<f64>,
    pub shapes: Vec<Shape>,
}

impl ShapeFamily {
    pub fn new(base: &Shape, generator: Generator, ladder: Vec<f64>) -> Result<ShapeFamily> {
        if !ladder.contains(&0.0) {
            return Err(Error::contract("family ladder must include t = 0"));
        }
        if ladder.iter().any(|t| !t.is_finite()) {
            return Err(Error::contract("family ladder must be finite"));
        }
        let shapes: Result<Vec<Shape>> = match &generator {
            Generator::Translate { direction } => ladder
                .iter()
                .map(|&t| {
                    if t == 0.0 {
                        Ok(base.clone())
                    } else {
                        base.translated(*direction * t)
                    }
                })
                .collect(),
            Generator::Jitter { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                let unit: Vec<Vector> = base
                    .samples()
                    .iter()
                    .map(|_| {
                        let r = rng.random::<f64>().sqrt();
                        Point::from_angle(std::f64::consts::TAU * rng.random::<f64>()) * r
                    })
                    .collect();
                ladder
                    .iter()
                    .map(|&t| {
                        if t == 0.0 {
                            return Ok(base.clone());
                        }
                        base.with_samples(
                            base.samples()
                                .iter()
                                .zip(&unit)
                                .map(|(p, u)| *p + *u * t)
                                .collect(),
                        )
                    })
                    .collect()
            }
            Generator::Gap { at } => ladder
                .iter()
                .map(|&t| {
                    if t < 0.0 {
                        return Err(Error::contract("gap widths must be non-negative"));
                    }
                    if t == 0.0 {
                        Ok(base.clone())
                    } else {
                        base.without_samples(|p| p.dist(*at) < t)
                    }
                })
                .collect(),
            Generator::Custom { files } => {
                if files.len() != ladder.len() {
                    return Err(Error::contract(
                        "custom family needs one shape file per ladder entry",
                    ));
                }
                ladder
                    .iter()
                    .zip(files)
                    .map(|(&t, f)| {
                        if t == 0.0 {
                            Ok(base.clone())
                        } else {
                            Shape::from_file(f)
                        }
                    })
                    .collect()
            }
        };
        Ok(ShapeFamily {
            generator,
            ladder,
            shapes: shapes?,
        })
    }

    pub fn from_spec(base: &Shape, spec: FamilySpec) -> Result<ShapeFamily> {
        ShapeFamily::new(base, spec.generator, spec.ladder)
    }

    /// Ladder indices ordered by `|t|`, ties by position.
    pub fn order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.ladder.len()).collect();
        idx.sort_by(|&i, &j| {
            self.ladder[i]
                .abs()
                .total_cmp(&self.ladder[j].abs())
                .then(i.cmp(&j))
        });
        idx
    }

    /// One pipeline per member, built in parallel, in ladder order.
    pub fn pipelines(&self, config: PipelineConfig) -> Result<Vec<Pipeline>> {
        self.shapes
            .par_iter()
            .map(|s| Pipeline::new(s.clone(), config))
            .collect()
    }
}

/// Distances from probes on the base medial axis to the medial axis of
/// each member, and set distances between the sampled axes.
#[derive(Clone, Debug, PartialEq)]
pub struct LiminfReport {
    pub ladder: Vec<f64>,
    pub probes: Vec<Point>,
    /// `distances[i][k]`: from probe `i` to the axis of member `k`.
    pub distances: Vec<Vec<f64>>,
    /// Per member: one-sided distance from the sampled base axis to the
    /// member's, or `None` when either is empty in the window.
    pub one_sided: Vec<Option<f64>>,
    pub hausdorff: Vec<Option<f64>>,
    /// Per probe: distances are non-decreasing in `|t|` up to `h`, and
    /// within `h` at the smallest `|t|`.
    pub trend_to_zero: Vec<bool>,
}

impl LiminfReport {
    /// No probes, so the inclusion holds vacuously.
    pub fn is_vacuous(&self) -> bool {
        self.probes.is_empty()
    }

    pub fn all_trend_to_zero(&self) -> bool {
        self.trend_to_zero.iter().all(|b| *b)
    }
}

/// Empirical check that every probe of the base medial axis is approached
/// by the medial axes of the members as `t -> 0`.
pub fn liminf_inclusion_check(
    family: &ShapeFamily,
    graphs: &[&MedialAxisGraph],
    probes: &[Point],
    window: Window,
    h: f64,
) -> Result<LiminfReport> {
    if graphs.len() != family.ladder.len() {
        return Err(Error::contract("one graph per family member is required"));
    }
    if !(h > 0.0) {
        return Err(Error::contract("resolution must be positive"));
    }
    let order = family.order();
    let base = graphs[order[0]];
    let base_pts = sample_graph(base, window, h)?;
    let mut distances = Vec::with_capacity(probes.len());
    for p in probes {
        distances.push(
            graphs
                .iter()
                .map(|g| g.distance_to(*p))
                .collect::<Vec<f64>>(),
        );
    }
    let mut one_sided = Vec::new();
    let mut hausdorff = Vec::new();
    for g in graphs {
        let pts = sample_graph(g, window, h)?;
        if base_pts.is_empty() || pts.is_empty() {
            one_sided.push(None);
            hausdorff.push(None);
        } else {
            one_sided.push(Some(one_sided_distance(&base_pts, &pts)?));
            hausdorff.push(Some(hausdorff_distance(&base_pts, &pts)?));
        }
    }
    let trend_to_zero = distances
        .iter()
        .map(|row| {
            let seq: Vec<f64> = order.iter().map(|&k| row[k]).collect();
            seq[0] <= h && seq.windows(2).all(|w| w[1] >= w[0] - h)
        })
        .collect();
    Ok(LiminfReport {
        ladder: family.ladder.clone(),
        probes: probes.to_vec(),
        distances,
        one_sided,
        hausdorff,
        trend_to_zero,
    })
}

/// Whether a base-reconstructible point stays reconstructible along the
/// ladder, walked in order of `|t|`.
#[derive(Clone, Debug, PartialEq)]
pub struct PersistenceReport {
    pub point: Point,
    /// Ladder values in the order walked.
    pub walked: Vec<f64>,
    pub persisted: Vec<bool>,
    /// Members on which the point persisted before the first failure.
    pub prefix: usize,
    pub first_failure: Option<f64>,
}

pub fn persistence_check(
    p: Point,
    family: &ShapeFamily,
    pipelines: &[Pipeline],
) -> Result<PersistenceReport> {
    if pipelines.len() != family.ladder.len() {
        return Err(Error::contract(
            "one pipeline per family member is required",
        ));
    }
    let order = family.order();
    if !pipelines[order[0]].oracle(p) {
        return Err(Error::contract(format!(
            "{p} is not reconstructible for the base shape"
        )));
    }
    let walked: Vec<f64> = order.iter().map(|&k| family.ladder[k]).collect();
    let persisted: Vec<bool> = order.iter().map(|&k| pipelines[k].oracle(p)).collect();
    let prefix = persisted.iter().take_while(|b| **b).count();
    let first_failure = walked.get(prefix).copied();
    Ok(PersistenceReport {
        point: p,
        walked,
        persisted,
        prefix,
        first_failure,
    })
}

/// A reconstructible point with its oracle margin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Probe {
    pub point: Point,
    pub margin: f64,
}

/// Up to `count` uniformly random reconstructible points of the window,
/// drawn deterministically from `seed`. Gives up after `100 * count` draws.
pub fn random_probes(pipeline: &Pipeline, window: Window, count: usize, seed: u64) -> Vec<Probe> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..100 * count {
        if out.len() == count {
            break;
        }
        let p = Point::new(
            window.xmin + window.width() * rng.random::<f64>(),
            window.ymin + window.height() * rng.random::<f64>(),
        );
        let margin = pipeline.oracle_margin(p);
        if margin > 0.0 {
            out.push(Probe { point: p, margin });
        }
    }
    out
}

/// Outcome of jittering the shape by a fraction of one probe's margin.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginOutcome {
    pub probe: Probe,
    pub amplitude: f64,
    pub report: PersistenceReport,
}

impl MarginOutcome {
    pub fn flipped(&self) -> bool {
        self.report.first_failure.is_some()
    }
}

/// For each probe with margin `m`, jitters the shape with amplitudes up to
/// `fraction * m` (ladder `0, m f / 2, m f`) and checks persistence.
pub fn margin_jitter_check(
    base: &Shape,
    probes: &[Probe],
    fraction: f64,
    seed: u64,
    config: PipelineConfig,
) -> Result<Vec<MarginOutcome>> {
    if !(fraction > 0.0) {
        return Err(Error::contract("jitter fraction must be positive"));
    }
    let base_pipeline = Pipeline::new(base.clone(), config)?;
    probes
        .iter()
        .map(|probe| {
            let amplitude = fraction * probe.margin;
            let family = ShapeFamily::new(
                base,
                Generator::Jitter { seed },
                vec![0.0, 0.5 * amplitude, amplitude],
            )?;
            let mut pipelines = vec![base_pipeline.clone()];
            pipelines.extend(
                family.shapes[1..]
                    .par_iter()
                    .map(|s| Pipeline::new(s.clone(), config))
                    .collect::<Result<Vec<_>>>()?,
            );
            let report = persistence_check(probe.point, &family, &pipelines)?;
            Ok(MarginOutcome {
                probe: *probe,
                amplitude,
                report,
            })
        })
        .collect()
}

/// Fraction of grid cells, at distance more than `h` from the set, that the
/// oracle marks reconstructible.
pub fn oracle_coverage(pipeline: &Pipeline, window: Window, h: f64, workers: usize) -> Result<f64> {
    let grid = crate::reconstruction::Grid::new(window, h)?;
    let cells = grid.map(workers, |c| {
        (pipeline.shape.distance(c) > h).then(|| pipeline.oracle(c))
    })?;
    let eligible: Vec<bool> = cells.into_iter().flatten().collect();
    if eligible.is_empty() {
        return Ok(0.0);
    }
    Ok(eligible.iter().filter(|b| **b).count() as f64 / eligible.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenarios::build_scenario;

    fn circle(r: f64, n: usize) -> Vec<Point> {
        (0..n)
            .map(|k| Point::from_angle(std::f64::consts::TAU * k as f64 / n as f64) * r)
            .collect()
    }

    #[test]
    fn one_sided_examples() {
        let a = vec![Point::new(0.0, 0.0)];
        let b = vec![Point::new(3.0, 0.0)];
        assert_eq!(one_sided_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(one_sided_distance(&a, &b).unwrap(), 3.0);
        assert!(one_sided_distance(&[], &b).is_err());
        let d = one_sided_distance(&circle(1.0, 400), &circle(2.0, 400)).unwrap();
        assert!((d - 1.0).abs() < 1e-9, "{d}");
    }

    #[test]
    fn family_member_at_zero_is_the_base() {
        let (shape, _) = build_scenario("two_points", None, None).unwrap();
        let fam = ShapeFamily::new(&shape, Generator::Jitter { seed: 3 }, vec![0.1, 0.0]).unwrap();
        assert_eq!(fam.shapes[1].samples(), shape.samples());
        assert_eq!(fam.order(), vec![1, 0]);
        assert!(ShapeFamily::new(&shape, Generator::Jitter { seed: 3 }, vec![0.1]).is_err());
    }

    #[test]
    fn jitter_is_reproducible_and_bounded() {
        let (shape, _) = build_scenario("ellipse", Some(0.05), None).unwrap();
        let a = ShapeFamily::new(&shape, Generator::Jitter { seed: 9 }, vec![0.0, 0.02]).unwrap();
        let b = ShapeFamily::new(&shape, Generator::Jitter { seed: 9 }, vec![0.0, 0.02]).unwrap();
        assert_eq!(a.shapes[1].samples(), b.shapes[1].samples());
        for (p, q) in shape.samples().iter().zip(a.shapes[1].samples()) {
            assert!(p.dist(*q) <= 0.02);
        }
    }

    #[test]
    fn gap_splits_the_line() {
        let (shape, _) = build_scenario("line", None, None).unwrap();
        let fam =
            ShapeFamily::new(&shape, Generator::Gap { at: Point::ORIGIN }, vec![0.0, 0.1]).unwrap();
        let gapped = &fam.shapes[1];
        assert!(gapped.samples().iter().all(|p| p.norm() >= 0.1));
        assert_eq!(gapped.chains().len(), 2);
    }

    #[test]
    fn persistence_requires_a_reconstructible_point() {
        let (shape, _) = build_scenario("two_points", None, None).unwrap();
        let fam = ShapeFamily::new(
            &shape,
            Generator::Translate {
                direction: Point::new(0.0, 1.0),
            },
            vec![0.0, 0.1],
        )
        .unwrap();
        let pipes = fam.pipelines(PipelineConfig::default()).unwrap();
        assert!(persistence_check(Point::new(2.0, 0.0), &fam, &pipes).is_err());
        let r = persistence_check(Point::new(0.5, 0.0), &fam, &pipes).unwrap();
        assert_eq!(r.prefix, 2);
        assert_eq!(r.first_failure, None);
    }
}
