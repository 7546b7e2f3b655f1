//! Which points of the complement the medial axis reconstructs.
//!
//! Two independent deciders: the union-of-balls oracle over the computed
//! medial axis, and the classifier that only looks at the convex hull and
//! its qualifying supporting lines. Rasters of both can be compared cell by
//! cell.

mod conjecture;
mod giblin;
mod oracle;
mod qualify;
mod raster;

pub use conjecture::{conjecture_harness, ConjectureReport, Counterexample};
pub use giblin::{
    clip_path, extract_branches, giblin_reconstruct, reconstruct_branches, CurveBranch,
    GiblinOutput,
};
pub use oracle::{reconstructible_by_scan, reconstructible_oracle, BallCover, DEFAULT_RMAX_MULT};
pub use qualify::{
    classify_point, hull_tol, qualify_hyperplanes, HyperplaneFamily, Label, QualifyReason,
    SupportingLine,
};
pub use raster::{compare_rasters, ClassifiedRaster, Comparison, Decider, Grid};

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::hull::{convex_hull, ConvexHull};
use crate::medial::{
    lambda_prune, prune_sampling_artifacts, voronoi_medial_axis, MedialAxisGraph, DEFAULT_KAPPA,
};
use crate::shape::Shape;

/// Tunables shared by the deciders.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PipelineConfig {
    /// Artifact-pruning cutoff in units of sample spacing.
    pub kappa: f64,
    /// Ray cap in units of the window diagonal.
    pub rmax_mult: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            kappa: DEFAULT_KAPPA,
            rmax_mult: DEFAULT_RMAX_MULT,
        }
    }
}

/// A shape with its hull, qualifying lines and pruned medial axis computed
/// once, ready to answer reconstructibility queries.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub shape: Shape,
    pub hull: ConvexHull,
    pub family: HyperplaneFamily,
    /// Medial axis after sampling-artifact pruning.
    pub graph: MedialAxisGraph,
    pub r_max: f64,
    cover: BallCover,
}

impl Pipeline {
    pub fn new(shape: Shape, config: PipelineConfig) -> Result<Self> {
        if !(config.rmax_mult > 0.0) {
            return Err(Error::contract("r_max multiplier must be positive"));
        }
        let hull = convex_hull(&shape)?;
        let family = qualify_hyperplanes(&shape, &hull);
        let raw = voronoi_medial_axis(&shape)?;
        let graph = prune_sampling_artifacts(&raw, &shape, config.kappa)?;
        let r_max = config.rmax_mult * shape.window().diagonal();
        let cover = BallCover::new(&graph, r_max);
        Ok(Pipeline {
            shape,
            hull,
            family,
            graph,
            r_max,
            cover,
        })
    }

    /// Union-of-balls membership over the pruned medial axis.
    pub fn oracle(&self, p: Point) -> bool {
        self.cover.contains(p)
    }

    /// Depth of `p` inside the union of balls (positive iff covered).
    pub fn oracle_margin(&self, p: Point) -> f64 {
        self.cover.margin(p)
    }

    pub fn theorem(&self, p: Point) -> Label {
        classify_point(p, &self.shape, &self.hull, &self.family)
    }

    pub fn cover(&self) -> &BallCover {
        &self.cover
    }

    /// Ball cover of the λ-medial axis.
    pub fn lambda_cover(&self, lambda: f64) -> Result<BallCover> {
        Ok(BallCover::new(
            &lambda_prune(&self.graph, lambda)?,
            self.r_max,
        ))
    }
}

/// Union-of-balls membership over the λ-pruned medial axis.
pub fn lambda_reconstructible(
    p: Point,
    graph: &MedialAxisGraph,
    lambda: f64,
    r_max: f64,
) -> Result<bool> {
    Ok(reconstructible_oracle(
        p,
        &lambda_prune(graph, lambda)?,
        r_max,
    ))
}
