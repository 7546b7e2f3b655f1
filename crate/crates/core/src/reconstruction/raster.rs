//! Grid classification and raster comparison.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Point, Window};

use super::{BallCover, Label, Pipeline};

/// Which reconstructibility test labels the cells.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Decider {
    /// Union of balls over the medial axis.
    Oracle,
    /// Convex hull plus qualifying half-planes.
    Theorem,
    /// Union of balls over the λ-medial axis.
    Lambda(f64),
}

impl fmt::Display for Decider {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decider::Oracle => write!(f, "oracle"),
            Decider::Theorem => write!(f, "theorem"),
            Decider::Lambda(l) => write!(f, "lambda({l})"),
        }
    }
}

/// Cell-centred grid over a window; row 0 is the bottom row.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid {
    pub window: Window,
    pub step: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    pub fn new(window: Window, step: f64) -> Result<Self> {
        window.validate()?;
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::contract("grid step must be positive"));
        }
        let nx = (window.width() / step).ceil() as usize;
        let ny = (window.height() / step).ceil() as usize;
        Ok(Grid {
            window,
            step,
            nx,
            ny,
        })
    }

    pub fn center(&self, i: usize, j: usize) -> Point {
        Point::new(
            self.window.xmin + (i as f64 + 0.5) * self.step,
            self.window.ymin + (j as f64 + 0.5) * self.step,
        )
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Runs `f` on every cell centre with `workers` threads; the result is
    /// in row-major order and independent of the thread count.
    pub fn map<T: Send>(&self, workers: usize, f: impl Fn(Point) -> T + Sync) -> Result<Vec<T>> {
        if workers == 0 {
            return Err(Error::contract("worker count must be at least 1"));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Invariant(format!("thread pool: {e}")))?;
        let rows: Vec<Vec<T>> = pool.install(|| {
            (0..self.ny)
                .into_par_iter()
                .map(|j| (0..self.nx).map(|i| f(self.center(i, j))).collect())
                .collect()
        });
        Ok(rows.into_iter().flatten().collect())
    }
}

/// Per-cell labels from one decider.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifiedRaster {
    pub grid: Grid,
    pub decider: Decider,
    /// Final labels, with cells near a decision boundary set to
    /// `BoundaryBand`.
    pub labels: Vec<Label>,
    /// The decider's answer before banding.
    pub decisions: Vec<Label>,
    pub warnings: Vec<String>,
}

impl ClassifiedRaster {
    pub fn label(&self, i: usize, j: usize) -> Label {
        self.labels[j * self.grid.nx + i]
    }

    pub fn count(&self, label: Label) -> usize {
        self.labels.iter().filter(|l| **l == label).count()
    }

    /// Cells whose decision (ignoring the band) is reconstructible.
    pub fn reconstructible_decisions(&self) -> usize {
        self.decisions
            .iter()
            .filter(|l| l.is_reconstructible())
            .count()
    }
}

impl Pipeline {
    /// Classifies every cell centre of the grid. Cells within `h/2` of the
    /// set are `InX`; cells within `h` of the set, of the hull boundary or
    /// of a qualifying line are banded.
    pub fn rasterize(
        &self,
        decider: Decider,
        window: Window,
        h: f64,
        workers: usize,
    ) -> Result<ClassifiedRaster> {
        let grid = Grid::new(window, h)?;
        let mut warnings = Vec::new();
        if self.shape.samples().iter().all(|p| !window.contains(*p)) {
            warnings.push("window contains no sample of the shape".to_string());
        }
        let lambda_cover: Option<BallCover> = match decider {
            Decider::Lambda(l) => Some(self.lambda_cover(l)?),
            _ => None,
        };
        let qualifying: Vec<_> = self.family.qualifying().copied().collect();
        let tol = super::hull_tol(&self.shape);
        let cells = grid.map(workers, |c| {
            let d = self.shape.distance(c);
            if d <= 0.5 * h {
                return (Label::InX, Label::InX);
            }
            let (pos, boundary) = self.hull.locate(c, tol);
            let in_hull = pos != crate::hull::HullPosition::Outside;
            let from_cover = |covered: bool| match (covered, in_hull) {
                (false, _) => Label::NotRecon,
                (true, true) => Label::ReconHull,
                (true, false) => Label::ReconHalfspace,
            };
            let decision = match decider {
                Decider::Theorem => self.theorem(c),
                Decider::Oracle => from_cover(self.oracle(c)),
                Decider::Lambda(_) => {
                    from_cover(lambda_cover.as_ref().expect("built above").contains(c))
                }
            };
            let band = d <= h
                || boundary <= h
                || qualifying.iter().any(|l| l.signed_distance(c).abs() <= h);
            (if band { Label::BoundaryBand } else { decision }, decision)
        })?;
        let (labels, decisions) = cells.into_iter().unzip();
        Ok(ClassifiedRaster {
            grid,
            decider,
            labels,
            decisions,
            warnings,
        })
    }
}

/// Cell-by-cell comparison of two rasters over the same grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    /// Fraction of compared cells on which the two agree about
    /// in-set / reconstructible / not reconstructible.
    pub agreement: f64,
    /// Cells banded in neither raster.
    pub compared: usize,
    /// `confusion[a][b]`: cells labelled `Label::ALL[a]` in the first
    /// raster and `Label::ALL[b]` in the second.
    pub confusion: [[usize; 5]; 5],
    /// `(i, j)` of compared cells that disagree.
    pub mismatches: Vec<(usize, usize)>,
}

fn label_index(l: Label) -> usize {
    Label::ALL
        .iter()
        .position(|x| *x == l)
        .expect("label listed")
}

fn class(l: Label) -> u8 {
    match l {
        Label::InX => 0,
        Label::ReconHull | Label::ReconHalfspace => 1,
        Label::NotRecon => 2,
        Label::BoundaryBand => 3,
    }
}

pub fn compare_rasters(a: &ClassifiedRaster, b: &ClassifiedRaster) -> Result<Comparison> {
    if a.grid != b.grid {
        return Err(Error::contract("rasters cover different grids"));
    }
    let mut confusion = [[0usize; 5]; 5];
    let mut mismatches = Vec::new();
    let mut compared = 0;
    for (k, (la, lb)) in a.labels.iter().zip(&b.labels).enumerate() {
        confusion[label_index(*la)][label_index(*lb)] += 1;
        if *la == Label::BoundaryBand || *lb == Label::BoundaryBand {
            continue;
        }
        compared += 1;
        if class(*la) != class(*lb) {
            mismatches.push((k % a.grid.nx, k / a.grid.nx));
        }
    }
    let agreement = if compared == 0 {
        1.0
    } else {
        1.0 - mismatches.len() as f64 / compared as f64
    };
    Ok(Comparison {
        agreement,
        compared,
        confusion,
        mismatches,
    })
}
