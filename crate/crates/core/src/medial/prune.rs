use crate::error::{Error, Result};
use crate::geometry::segment_distance;
use crate::shape::Shape;

use super::MedialAxisGraph;

/// Default separation cutoff for sampling artifacts, in units of spacing.
pub const DEFAULT_KAPPA: f64 = 1.5;

/// Largest index span along a chain that still counts as "neighbouring
/// samples".
const NEIGHBOUR_SPAN: usize = 4;

/// Drops Voronoi pieces that only separate neighbouring samples of one
/// curve: separation at most `kappa * spacing` and all witnesses within a
/// short run of one chain. Pieces whose witnesses bound a straight run of one
/// chain are dropped at any separation; they only exist through rounding,
/// since the samples in between are closer. Shapes without chain metadata
/// are unchanged.
pub fn prune_sampling_artifacts(
    graph: &MedialAxisGraph,
    shape: &Shape,
    kappa: f64,
) -> Result<MedialAxisGraph> {
    if !(kappa >= 0.0) {
        return Err(Error::contract("kappa must be non-negative"));
    }
    if shape.chains().is_empty() {
        return Ok(graph.clone());
    }
    let cutoff = kappa * shape.spacing();
    let straight_tol = 1e-9 * shape.window().diagonal();
    let artifact = |sep: f64, witnesses: &[usize]| match chain_run(shape, witnesses) {
        None => false,
        Some(run) => {
            (sep <= cutoff && run.span <= NEIGHBOUR_SPAN) || straight(shape, &run, straight_tol)
        }
    };
    Ok(graph.retain(
        |_, v| !artifact(v.separation, &v.witnesses),
        |e| !artifact(e.separation, &e.witnesses),
        |r| !artifact(r.separation, &r.witnesses),
    ))
}

/// The shortest run of one chain holding every witness: chain positions
/// `first, first + 1, ..., first + span` (mod the length if closed).
struct Run {
    chain: usize,
    first: usize,
    span: usize,
}

fn chain_run(shape: &Shape, witnesses: &[usize]) -> Option<Run> {
    let mut chain = None;
    let mut pos = Vec::with_capacity(witnesses.len());
    for &w in witnesses {
        let (c, k) = shape.chain_position(w)?;
        if *chain.get_or_insert(c) != c {
            return None;
        }
        pos.push(k);
    }
    let c = chain?;
    let info = &shape.chains()[c];
    pos.sort_unstable();
    let (lo, hi) = (pos[0], pos[pos.len() - 1]);
    if !info.closed {
        return Some(Run {
            chain: c,
            first: lo,
            span: hi - lo,
        });
    }
    // the run skips the widest gap between consecutive positions
    let (mut gap, mut first) = (info.len - hi + lo, lo);
    for w in pos.windows(2) {
        if w[1] - w[0] > gap {
            gap = w[1] - w[0];
            first = w[1];
        }
    }
    Some(Run {
        chain: c,
        first,
        span: info.len - gap,
    })
}

/// Whether every sample of the run lies within `tol` of the chord joining
/// its ends.
fn straight(shape: &Shape, run: &Run, tol: f64) -> bool {
    if run.span < 2 {
        return false;
    }
    let info = &shape.chains()[run.chain];
    let at = |k: usize| shape.samples()[info.start + (run.first + k) % info.len];
    let (a, b) = (at(0), at(run.span));
    (1..run.span).all(|k| segment_distance(at(k), a, b) <= tol)
}

/// λ-medial axis: keeps the vertices, edges and rays whose witnesses do not
/// fit in a ball of radius `lambda` (separation strictly greater). Since a
/// vertex's witnesses contain those of its edges, removal never strands an
/// edge.
pub fn lambda_prune(graph: &MedialAxisGraph, lambda: f64) -> Result<MedialAxisGraph> {
    if !(lambda >= 0.0) {
        return Err(Error::contract("lambda must be non-negative"));
    }
    if lambda == 0.0 {
        return Ok(graph.clone());
    }
    Ok(graph.retain(
        |_, v| v.separation > lambda,
        |e| e.separation > lambda,
        |r| r.separation > lambda,
    ))
}

#[cfg(test)]
mod tests {
    use std::f64::consts::TAU;

    use super::*;
    use crate::geometry::{Point, Window};
    use crate::medial::voronoi_medial_axis;
    use crate::shape::{Curve, Piece};

    fn circle(spacing: f64) -> Shape {
        let piece = Piece::Curve {
            curve: Curve::Circle {
                center: Point::ORIGIN,
                radius: 1.0,
            },
            t0: 0.0,
            t1: TAU,
            filled: false,
        };
        Shape::from_pieces(
            vec![piece],
            Window::new(-2.0, 2.0, -2.0, 2.0).unwrap(),
            spacing,
        )
        .unwrap()
    }

    #[test]
    fn dense_circle_keeps_only_the_center() {
        let s = circle(0.02);
        let g = voronoi_medial_axis(&s).unwrap();
        let p = prune_sampling_artifacts(&g, &s, DEFAULT_KAPPA).unwrap();
        assert!(p.edges.is_empty() && p.rays.is_empty());
        assert!(!p.vertices.is_empty());
        assert!(p.vertices.iter().all(|v| v.position.norm() < 1e-6));
        assert!(p.removed > 0);
    }

    #[test]
    fn finite_sets_are_not_pruned() {
        let pts = vec![
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.5),
        ];
        let s = Shape::from_samples(pts, Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 0.01).unwrap();
        let g = voronoi_medial_axis(&s).unwrap();
        assert_eq!(prune_sampling_artifacts(&g, &s, DEFAULT_KAPPA).unwrap(), g);
    }

    #[test]
    fn lambda_thresholds_on_two_points() {
        let pts = vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
        let s = Shape::from_samples(pts, Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 0.01).unwrap();
        let g = voronoi_medial_axis(&s).unwrap();
        assert_eq!(lambda_prune(&g, 0.0).unwrap(), g);
        assert_eq!(lambda_prune(&g, 0.9).unwrap().rays.len(), 2);
        assert!(lambda_prune(&g, 1.1).unwrap().is_empty());
        assert!(lambda_prune(&g, -1.0).is_err());
    }
}
