//! The `medial-recon` command line.
//!
//! Exit codes: 0 on success, 2 for configuration errors (bad flags, unknown
//! scenario, unreadable or invalid input), 3 when an invariant fails during
//! a run.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::export::{self, GraphFile};
use crate::geometry::{Point, Window};
use crate::medial::DEFAULT_KAPPA;
use crate::reconstruction::{
    compare_rasters, reconstruct_branches, ClassifiedRaster, Decider, Pipeline, PipelineConfig,
    DEFAULT_RMAX_MULT,
};
use crate::scenarios::{scenario, Scenario, SCENARIO_NAMES};
use crate::shape::{Shape, ShapeFile};
use crate::stability::{
    liminf_inclusion_check, oracle_coverage, persistence_check, random_probes, FamilySpec,
    Generator, ShapeFamily,
};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "MEDIAL_RECON_OUT";

const DEFAULT_OUT: &str = "medial-recon-out";

#[derive(Debug, Parser)]
#[command(
    name = "medial-recon",
    version,
    about = "Medial axes and union-of-balls reconstruction of planar sets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute and export the pruned medial axis.
    Medial(RunArgs),
    /// Label a grid with one or more deciders and compare them.
    Classify(RunArgs),
    /// Perturb the shape along a family and track the medial axis and
    /// reconstructible points.
    Stability(StabilityArgs),
    /// Recover boundary points from the branches of the medial axis.
    Giblin(RunArgs),
    /// Print the built-in scenarios, one `name<TAB>description` per line.
    ListScenarios,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DeciderChoice {
    Oracle,
    Theorem,
    Lambda,
    All,
}

#[derive(Clone, Debug, Args)]
pub struct RunArgs {
    /// Built-in scenario, e.g. `logarithm` or `gap_rectangle(0.3)`.
    #[arg(long, conflicts_with = "shape_file")]
    pub scenario: Option<String>,
    /// Shape description in TOML.
    #[arg(long)]
    pub shape_file: Option<PathBuf>,
    /// Sample spacing along curves.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Window as `xmin,xmax,ymin,ymax`.
    #[arg(long, value_parser = parse_window, allow_hyphen_values = true)]
    pub window: Option<Window>,
    #[arg(long, default_value_t = 0.02)]
    pub grid_step: f64,
    /// λ for the λ-medial axis decider.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long, value_enum, default_value_t = DeciderChoice::All)]
    pub decider: DeciderChoice,
    /// Ray cap in window diagonals.
    #[arg(long, default_value_t = DEFAULT_RMAX_MULT)]
    pub rmax_mult: f64,
    /// Sampling-artifact cutoff in sample spacings.
    #[arg(long, default_value_t = DEFAULT_KAPPA)]
    pub kappa: f64,
    /// Output directory [default: $MEDIAL_RECON_OUT or ./medial-recon-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads for rasterisation [default: available cores].
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Clone, Debug, Args)]
pub struct StabilityArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// Family description in TOML; overrides the generator flags.
    #[arg(long)]
    pub family: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = GeneratorChoice::Jitter)]
    pub generator: GeneratorChoice,
    /// Comma-separated parameter ladder; must contain 0.
    #[arg(long, value_delimiter = ',', default_values_t = [0.0, 0.0025, 0.005, 0.01])]
    pub ladder: Vec<f64>,
    /// Translation direction as `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1,0")]
    pub direction: Point,
    /// Centre of the gap as `x,y`.
    #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0,0")]
    pub at: Point,
    /// Number of random reconstructible probes.
    #[arg(long, default_value_t = 20)]
    pub probes: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GeneratorChoice {
    Translate,
    Jitter,
    Gap,
}

fn parse_floats(s: &str, n: usize) -> std::result::Result<Vec<f64>, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    if v.len() != n {
        return Err(format!(
            "expected {n} comma-separated numbers, got {}",
            v.len()
        ));
    }
    Ok(v)
}

fn parse_window(s: &str) -> std::result::Result<Window, String> {
    let v = parse_floats(s, 4)?;
    Window::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

fn parse_point(s: &str) -> std::result::Result<Point, String> {
    let v = parse_floats(s, 2)?;
    Point::try_new(v[0], v[1]).map_err(|e| e.to_string())
}

/// Runs the command line and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Invariant(_) => 3,
        _ => 2,
    }
}

pub fn execute(command: Command) -> Result<()> {
    match command {
        Command::Medial(a) => cmd_medial(&a),
        Command::Classify(a) => cmd_classify(&a),
        Command::Stability(a) => cmd_stability(&a),
        Command::Giblin(a) => cmd_giblin(&a),
        Command::ListScenarios => {
            print!("{}", list_scenarios()?);
            Ok(())
        }
    }
}

/// `name<TAB>description` for every built-in scenario at default settings.
pub fn list_scenarios() -> Result<String> {
    let mut out = String::new();
    for name in SCENARIO_NAMES {
        let s = scenario(name, None, None)?;
        writeln!(out, "{name}\t{}", s.description).unwrap();
    }
    Ok(out)
}

/// A validated run configuration with its shape loaded.
struct Input {
    id: String,
    shape: Shape,
    window: Window,
    out: PathBuf,
    workers: usize,
    config: PipelineConfig,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::contract(format!(
            "--{name} must be positive, got {v}"
        )))
    }
}

/// Keeps file names portable: `gap_rectangle(0.3)` becomes `gap_rectangle_0.3_`.
fn file_id(s: &str) -> String {
    s.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '.' || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect()
}

fn load(a: &RunArgs) -> Result<Input> {
    positive("grid-step", a.grid_step)?;
    positive("rmax-mult", a.rmax_mult)?;
    if !(a.kappa >= 0.0 && a.kappa.is_finite()) {
        return Err(Error::contract(format!(
            "--kappa must be non-negative, got {}",
            a.kappa
        )));
    }
    if let Some(s) = a.spacing {
        positive("spacing", s)?;
    }
    if let Some(l) = a.lambda {
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::contract(format!(
                "--lambda must be non-negative, got {l}"
            )));
        }
    }
    let workers = match a.workers {
        Some(0) => return Err(Error::contract("--workers must be at least 1")),
        Some(w) => w,
        None => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    let (id, shape) = match (&a.scenario, &a.shape_file) {
        (Some(name), None) => (file_id(name), scenario(name, a.spacing, a.window)?.build()?),
        (None, Some(path)) => {
            let text = std::fs::read_to_string(path)?;
            // a scenario file wraps the shape in a `[shape]` table
            let table: toml::Table = toml::from_str(&text)?;
            let mut file = if table.contains_key("shape") {
                Scenario::from_toml_str(&text)?.shape
            } else {
                toml::from_str::<ShapeFile>(&text)?
            };
            if let Some(s) = a.spacing {
                file.spacing = s;
            }
            if let Some(w) = a.window {
                file.window = w;
            }
            let stem = path
                .file_stem()
                .map_or("shape".into(), |s| s.to_string_lossy().into_owned());
            (file_id(&stem), file.into_shape()?)
        }
        _ => {
            return Err(Error::contract(
                "give exactly one of --scenario or --shape-file",
            ))
        }
    };
    let out = a
        .out
        .clone()
        .or_else(|| {
            std::env::var_os(OUT_ENV)
                .filter(|v| !v.is_empty())
                .map(PathBuf::from)
        })
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT));
    std::fs::create_dir_all(&out)?;
    let window = shape.window();
    let config = PipelineConfig {
        kappa: a.kappa,
        rmax_mult: a.rmax_mult,
    };
    Ok(Input {
        id,
        shape,
        window,
        out,
        workers,
        config,
    })
}

fn write(dir: &Path, name: &str, contents: impl AsRef<[u8]>) -> Result<PathBuf> {
    let path = dir.join(name);
    std::fs::write(&path, contents)?;
    Ok(path)
}

pub fn cmd_medial(a: &RunArgs) -> Result<()> {
    let input = load(a)?;
    let p = Pipeline::new(input.shape, input.config)?;
    let g = &p.graph;
    println!("shape {}: {} samples", input.id, p.shape.samples().len());
    if g.is_empty() {
        println!(
            "medial axis: empty after pruning ({} sampling artifacts removed)",
            g.removed
        );
    } else {
        println!(
            "medial axis: {} vertices, {} edges, {} rays, {} components ({} sampling artifacts removed)",
            g.vertices.len(),
            g.edges.len(),
            g.rays.len(),
            g.component_count(),
            g.removed
        );
    }
    let graph = write(
        &input.out,
        &format!("{}_graph.toml", input.id),
        GraphFile::from_graph(g).to_toml(),
    )?;
    let svg = write(
        &input.out,
        &format!("{}_medial.svg", input.id),
        export::medial_svg(&p.shape, g, input.window),
    )?;
    println!("wrote {} and {}", graph.display(), svg.display());
    Ok(())
}

fn deciders(a: &RunArgs) -> Result<Vec<Decider>> {
    let lambda = || {
        a.lambda
            .ok_or_else(|| Error::contract("--decider lambda needs --lambda"))
    };
    Ok(match a.decider {
        DeciderChoice::Oracle => vec![Decider::Oracle],
        DeciderChoice::Theorem => vec![Decider::Theorem],
        DeciderChoice::Lambda => vec![Decider::Lambda(lambda()?)],
        DeciderChoice::All => {
            let mut v = vec![Decider::Oracle, Decider::Theorem];
            v.extend(a.lambda.map(Decider::Lambda));
            v
        }
    })
}

fn decider_id(d: Decider) -> String {
    match d {
        Decider::Lambda(l) => format!("lambda_{l}"),
        other => other.to_string(),
    }
}

pub fn cmd_classify(a: &RunArgs) -> Result<()> {
    let input = load(a)?;
    let deciders = deciders(a)?;
    let p = Pipeline::new(input.shape, input.config)?;
    let mut rasters: Vec<ClassifiedRaster> = Vec::new();
    for d in deciders {
        let r = p.rasterize(d, input.window, a.grid_step, input.workers)?;
        for w in &r.warnings {
            eprintln!("warning: {w}");
        }
        let stem = format!("{}_{}", input.id, decider_id(d));
        write(&input.out, &format!("{stem}.pgm"), export::raster_pgm(&r))?;
        write(
            &input.out,
            &format!("{stem}.svg"),
            export::raster_svg(&r, &p),
        )?;
        println!(
            "{d}: {} reconstructible, {} not reconstructible, {} in set, {} banded",
            r.count(crate::reconstruction::Label::ReconHull)
                + r.count(crate::reconstruction::Label::ReconHalfspace),
            r.count(crate::reconstruction::Label::NotRecon),
            r.count(crate::reconstruction::Label::InX),
            r.count(crate::reconstruction::Label::BoundaryBand),
        );
        rasters.push(r);
    }
    let refs: Vec<&ClassifiedRaster> = rasters.iter().collect();
    write(
        &input.out,
        &format!("{}_labels.csv", input.id),
        export::label_counts_csv(&input.id, &refs),
    )?;
    if rasters.len() >= 2 {
        let mut csv = format!("{}\n", export::METRICS_HEADER);
        for other in &rasters[1..] {
            let cmp = compare_rasters(&rasters[0], other)?;
            println!(
                "agreement {} vs {}: {:.6}",
                rasters[0].decider, other.decider, cmp.agreement
            );
            writeln!(
                csv,
                "{}",
                export::metrics_row(&input.id, &rasters[0], other, &cmp)
            )
            .unwrap();
        }
        write(&input.out, &format!("{}_metrics.csv", input.id), csv)?;
    }
    println!("wrote rasters to {}", input.out.display());
    Ok(())
}

pub fn cmd_stability(a: &StabilityArgs) -> Result<()> {
    let input = load(&a.run)?;
    let spec = match &a.family {
        Some(path) => FamilySpec::from_file(path)?,
        None => FamilySpec {
            generator: match a.generator {
                GeneratorChoice::Translate => Generator::Translate {
                    direction: a.direction,
                },
                GeneratorChoice::Jitter => Generator::Jitter { seed: a.run.seed },
                GeneratorChoice::Gap => Generator::Gap { at: a.at },
            },
            ladder: a.ladder.clone(),
        },
    };
    let family = ShapeFamily::from_spec(&input.shape, spec)?;
    let pipelines = family.pipelines(input.config)?;
    let base = &pipelines[family.order()[0]];
    let h = a.run.grid_step;

    // probes on the base medial axis, evenly picked from its samples
    let on_axis = crate::stability::sample_graph(&base.graph, input.window, h)?;
    let stride = on_axis.len().div_ceil(a.probes.max(1)).max(1);
    let axis_probes: Vec<Point> = on_axis.iter().step_by(stride).copied().collect();
    let graphs: Vec<_> = pipelines.iter().map(|p| &p.graph).collect();
    let liminf = liminf_inclusion_check(&family, &graphs, &axis_probes, input.window, h)?;
    write(
        &input.out,
        &format!("{}_liminf.csv", input.id),
        export::liminf_csv(&liminf),
    )?;

    let probes = random_probes(base, input.window, a.probes, a.run.seed);
    let reports = probes
        .iter()
        .map(|pr| Ok((pr.margin, persistence_check(pr.point, &family, &pipelines)?)))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<(f64, &_)> = reports.iter().map(|(m, r)| (*m, r)).collect();
    write(
        &input.out,
        &format!("{}_persistence.csv", input.id),
        export::persistence_csv(&rows),
    )?;

    let mut coverage = String::from("t,coverage,one_sided,hausdorff,persisted,probes\n");
    for k in family.order() {
        let t = family.ladder[k];
        let cov = oracle_coverage(&pipelines[k], input.window, h, input.workers)?;
        let persisted = reports
            .iter()
            .filter(|(_, r)| r.persisted[r.walked.iter().position(|w| *w == t).unwrap_or(0)])
            .count();
        let opt = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.6}"));
        println!(
            "t={t}: coverage {cov:.4}, one-sided {}, hausdorff {}, persisted {persisted}/{}",
            opt(liminf.one_sided[k]),
            opt(liminf.hausdorff[k]),
            reports.len()
        );
        let csv_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        writeln!(
            coverage,
            "{t},{cov},{},{},{persisted},{}",
            csv_opt(liminf.one_sided[k]),
            csv_opt(liminf.hausdorff[k]),
            reports.len()
        )
        .unwrap();
    }
    write(&input.out, &format!("{}_coverage.csv", input.id), coverage)?;
    if liminf.is_vacuous() {
        println!("liminf inclusion: base medial axis is empty in the window (vacuous)");
    } else {
        let n = liminf.trend_to_zero.iter().filter(|b| **b).count();
        println!(
            "liminf inclusion (empirical): {n}/{} probes trend to zero",
            liminf.probes.len()
        );
    }
    Ok(())
}

/// Fraction of `targets` within `tol` of `points`, and the largest distance
/// from a target to `points`.
fn coverage(targets: &[Point], points: &[Point], tol: f64) -> Result<(f64, f64)> {
    if targets.is_empty() || points.is_empty() {
        return Ok((0.0, f64::INFINITY));
    }
    let tree = rstar::RTree::bulk_load(points.iter().map(|p| p.to_array()).collect());
    let dists: Vec<f64> = targets
        .iter()
        .map(|t| {
            t.dist(Point::from(
                *tree.nearest_neighbor(t.to_array()).expect("non-empty"),
            ))
        })
        .collect();
    let near = dists.iter().filter(|d| **d < tol).count();
    Ok((
        near as f64 / targets.len() as f64,
        dists.iter().fold(0.0, |a: f64, b| a.max(*b)),
    ))
}

pub fn cmd_giblin(a: &RunArgs) -> Result<()> {
    let input = load(a)?;
    let p = Pipeline::new(input.shape, input.config)?;
    let spacing = p.shape.spacing();
    let targets: Vec<Point> = p
        .shape
        .samples()
        .iter()
        .copied()
        .filter(|s| input.window.contains(*s))
        .collect();
    let mut csv = String::from("branch,side,t,x,y\n");
    let branches = reconstruct_branches(&p.graph, &p.shape, input.window);
    if branches.is_empty() {
        println!("no medial branches");
    }
    for (k, (_, out)) in branches.into_iter().enumerate() {
        let out = match out {
            Ok(o) => o,
            Err(e) => {
                println!("branch {k}: skipped ({e})");
                continue;
            }
        };
        let inside = |v: &[Point]| {
            v.iter()
                .copied()
                .filter(|q| input.window.contains(*q))
                .collect::<Vec<_>>()
        };
        let (cp, dp) = coverage(&targets, &inside(&out.plus), 3.0 * spacing)?;
        let (cm, dm) = coverage(&targets, &inside(&out.minus), 3.0 * spacing)?;
        let both: Vec<Point> = inside(&out.plus)
            .into_iter()
            .chain(inside(&out.minus))
            .collect();
        let (cb, db) = coverage(&targets, &both, 3.0 * spacing)?;
        println!(
            "branch {k}: {} parameters, {} skipped (|d'|>1), max residual {:.3e}; coverage of the samples in the window: plus {cp:.4} (one-sided {dp:.3e}), minus {cm:.4} (one-sided {dm:.3e}), both {cb:.4} (one-sided {db:.3e})",
            out.params.len(),
            out.skipped,
            out.max_residual
        );
        for (side, pts) in [("plus", &out.plus), ("minus", &out.minus)] {
            for (t, q) in out.params.iter().zip(pts) {
                writeln!(csv, "{k},{side},{t},{},{}", q.x, q.y).unwrap();
            }
        }
    }
    let path = write(&input.out, &format!("{}_giblin.csv", input.id), csv)?;
    println!("wrote {}", path.display());
    Ok(())
}
