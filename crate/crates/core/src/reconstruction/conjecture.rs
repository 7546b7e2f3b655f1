//! Search for points of the hull, farther than λ from the set, that the
//! λ-medial axis fails to reconstruct.

use crate::error::{Error, Result};
use crate::geometry::{Point, Window};
use crate::hull::HullPosition;

use super::{Grid, Pipeline};

/// A grid point of the hull with `d(p) > λ` that is not λ-reconstructible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Counterexample {
    pub point: Point,
    pub distance: f64,
    /// Within `2h` of the set, the hull boundary or a qualifying line, where
    /// sampling effects are plausible.
    pub near_band: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConjectureReport {
    pub lambda: f64,
    pub step: f64,
    /// Grid points tested (in the hull, off the set, `d > λ`).
    pub candidates: usize,
    pub counterexamples: Vec<Counterexample>,
}

impl ConjectureReport {
    /// Counterexamples away from every band.
    pub fn unexplained(&self) -> usize {
        self.counterexamples.iter().filter(|c| !c.near_band).count()
    }
}

/// Enumerates grid points `p` of the closed hull with `d(p) > λ` and lists
/// those outside the λ-reconstruction. Reports only; draws no verdict.
pub fn conjecture_harness(
    pipeline: &Pipeline,
    lambda: f64,
    window: Window,
    h: f64,
    workers: usize,
) -> Result<ConjectureReport> {
    if !(lambda > 0.0) {
        return Err(Error::contract("lambda must be positive"));
    }
    let grid = Grid::new(window, h)?;
    let cover = pipeline.lambda_cover(lambda)?;
    let qualifying: Vec<_> = pipeline.family.qualifying().copied().collect();
    let tol = super::hull_tol(&pipeline.shape);
    let cells = grid.map(workers, |p| {
        let d = pipeline.shape.distance(p);
        if d <= lambda || d <= 0.5 * h {
            return None;
        }
        let (pos, boundary) = pipeline.hull.locate(p, tol);
        if pos == HullPosition::Outside {
            return None;
        }
        let hit = cover.contains(p);
        let near_band = d <= 3.0 * h
            || boundary <= 3.0 * h
            || qualifying
                .iter()
                .any(|l| l.signed_distance(p).abs() <= 3.0 * h);
        Some((
            hit,
            Counterexample {
                point: p,
                distance: d,
                near_band,
            },
        ))
    })?;
    let mut candidates = 0;
    let mut counterexamples = Vec::new();
    for (hit, c) in cells.into_iter().flatten() {
        candidates += 1;
        if !hit {
            counterexamples.push(c);
        }
    }
    Ok(ConjectureReport {
        lambda,
        step: h,
        candidates,
        counterexamples,
    })
}
