//! Boundary recovery from a smooth medial branch.
//!
//! For a unit-speed branch `γ` with radius `d`, tangent `T` and normal `N`,
//! the two points of the set touching the ball at `γ(t)` are
//! `γ - d d' T ± d sqrt(1 - d'²) N`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::geometry::{Point, Vector, Window};
use crate::medial::MedialAxisGraph;
use crate::shape::Shape;

/// Slack on the Lipschitz bound `|d'| <= 1`.
const LIPSCHITZ_SLACK: f64 = 1e-6;

/// Parameters within `END_STEPS` steps of each end are placed at
/// `END_STEPS step (j/END_REFINE)²`. At a branch end on a curvature centre
/// the contact point moves like `sqrt(s)`.
const END_STEPS: usize = 4;
const END_REFINE: usize = 16;

/// Fourth-order first-derivative stencils as `(offset, 12 * weight)`.
const CENTRAL: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
const FORWARD: [(f64, f64); 5] = [
    (0.0, -25.0),
    (1.0, 48.0),
    (2.0, -36.0),
    (3.0, 16.0),
    (4.0, -3.0),
];
const BACKWARD: [(f64, f64); 5] = [
    (0.0, 25.0),
    (-1.0, -48.0),
    (-2.0, 36.0),
    (-3.0, -16.0),
    (-4.0, 3.0),
];

/// A medial branch sampled at uniform arclength.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveBranch {
    pub params: Vec<f64>,
    pub positions: Vec<Point>,
    pub radii: Vec<f64>,
    pub tangents: Vec<Vector>,
    pub normals: Vec<Vector>,
    pub dprime: Vec<f64>,
}

impl CurveBranch {
    /// Resamples a polyline every `step` of arclength, more densely near
    /// each end. Tangents and `d'` are
    /// fourth-order finite differences with node spacing `width` along the
    /// polyline, one-sided within `2 width` of the ends. `d` is the exact
    /// distance to the shape.
    pub fn from_path(path: &[Point], shape: &Shape, step: f64, width: f64) -> Result<CurveBranch> {
        if path.len() < 2 {
            return Err(Error::contract("a branch needs at least two points"));
        }
        if !(step > 0.0 && width > 0.0) {
            return Err(Error::contract(
                "step and difference width must be positive",
            ));
        }
        let mut cum = vec![0.0];
        for w in path.windows(2) {
            cum.push(cum.last().unwrap() + w[0].dist(w[1]));
        }
        let total = *cum.last().unwrap();
        if total <= 4.0 * width {
            return Err(Error::contract(
                "branch is shorter than the difference stencil",
            ));
        }
        let at = |s: f64| -> Point {
            let s = s.clamp(0.0, total);
            let k = cum.partition_point(|c| *c < s).clamp(1, path.len() - 1);
            let span = cum[k] - cum[k - 1];
            let f = if span > 0.0 {
                (s - cum[k - 1]) / span
            } else {
                0.0
            };
            path[k - 1].lerp(path[k], f)
        };
        let d = |s: f64| shape.distance(at(s));
        let n = (total / step).floor() as usize + 1;
        let m = END_REFINE as f64;
        let near_end = |j: usize| END_STEPS as f64 * step * (j as f64 / m).powi(2);
        let mut params: Vec<f64> = (0..END_REFINE)
            .map(near_end)
            .filter(|s| *s < total)
            .collect();
        params.extend((END_STEPS..n).map(|k| k as f64 * step));
        let last = *params.last().unwrap();
        params.extend(
            (0..END_REFINE)
                .rev()
                .map(|j| total - near_end(j))
                .filter(|s| *s > last),
        );
        let n = params.len();
        let mut b = CurveBranch {
            params: Vec::with_capacity(n),
            positions: Vec::with_capacity(n),
            radii: Vec::with_capacity(n),
            tangents: Vec::with_capacity(n),
            normals: Vec::with_capacity(n),
            dprime: Vec::with_capacity(n),
        };
        for s in params {
            let stencil: &[(f64, f64)] = if s < 2.0 * width {
                &FORWARD
            } else if s > total - 2.0 * width {
                &BACKWARD
            } else {
                &CENTRAL
            };
            let mut chord = Point::ORIGIN;
            let mut dp = 0.0;
            for &(o, c) in stencil {
                chord = chord + at(s + o * width) * c;
                dp += c * d(s + o * width);
            }
            let dp = dp / (12.0 * width);
            let t = chord
                .normalized()
                .ok_or_else(|| Error::Invariant("branch tangent vanished".into()))?;
            b.params.push(s);
            b.positions.push(at(s));
            b.radii.push(d(s));
            b.tangents.push(t);
            b.normals.push(t.perp());
            b.dprime.push(dp);
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

/// Both boundary candidates at every usable parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct GiblinOutput {
    pub params: Vec<f64>,
    pub plus: Vec<Point>,
    pub minus: Vec<Point>,
    /// Parameters where `|d'| > 1` made the square root imaginary.
    pub skipped: usize,
    /// Largest distance from a recovered point to the shape.
    pub max_residual: f64,
}

impl GiblinOutput {
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.plus.iter().chain(&self.minus).copied()
    }
}

pub fn giblin_reconstruct(branch: &CurveBranch, shape: &Shape) -> GiblinOutput {
    let mut out = GiblinOutput {
        params: Vec::new(),
        plus: Vec::new(),
        minus: Vec::new(),
        skipped: 0,
        max_residual: 0.0,
    };
    for k in 0..branch.len() {
        let (g, d, dp) = (branch.positions[k], branch.radii[k], branch.dprime[k]);
        if dp.abs() > 1.0 + LIPSCHITZ_SLACK {
            out.skipped += 1;
            continue;
        }
        let along = g - branch.tangents[k] * (d * dp);
        let across = branch.normals[k] * (d * (1.0 - dp * dp).max(0.0).sqrt());
        let (p, m) = (along + across, along - across);
        out.max_residual = out
            .max_residual
            .max(shape.distance(p))
            .max(shape.distance(m));
        out.params.push(branch.params[k]);
        out.plus.push(p);
        out.minus.push(m);
    }
    out
}

/// Pieces of a polyline inside a window, split where it leaves.
pub fn clip_path(path: &[Point], window: Window) -> Vec<Vec<Point>> {
    let mut pieces: Vec<Vec<Point>> = Vec::new();
    let mut open = false;
    for w in path.windows(2) {
        let (a, b) = (w[0], w[1]);
        match window.clip_param(a, b - a, 0.0, 1.0) {
            Some((s0, s1)) => {
                let (p, q) = (a.lerp(b, s0), a.lerp(b, s1));
                if !open || s0 > 0.0 {
                    pieces.push(vec![p]);
                }
                let cur = pieces.last_mut().expect("pushed above");
                if *cur.last().unwrap() != q {
                    cur.push(q);
                }
                open = s1 >= 1.0;
            }
            None => open = false,
        }
    }
    pieces.retain(|p| p.len() >= 2);
    pieces
}

#[derive(PartialEq)]
struct Entry(f64, usize);

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> (Vec<f64>, Vec<usize>) {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut prev = vec![usize::MAX; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Entry(0.0, src));
    while let Some(Entry(d, u)) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            if d + w < dist[v] {
                dist[v] = d + w;
                prev[v] = u;
                heap.push(Entry(d + w, v));
            }
        }
    }
    (dist, prev)
}

/// Reachable vertex with the largest distance; `src` has distance 0.
fn farthest(dist: &[f64], src: usize) -> usize {
    let mut best = src;
    for (i, d) in dist.iter().enumerate() {
        if d.is_finite() && *d > dist[best] {
            best = i;
        }
    }
    best
}

/// Longest path through each connected component of the graph, continued
/// along a ray of length `reach` at each end where one leaves. Isolated
/// vertices are skipped; bisector rays of collinear sets become lines.
pub fn extract_branches(graph: &MedialAxisGraph, reach: f64) -> Vec<Vec<Point>> {
    let n = graph.vertices.len();
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for e in &graph.edges {
        let (a, b) = graph.edge_segment(e);
        let w = a.dist(b);
        adj[e.ends[0]].push((e.ends[1], w));
        adj[e.ends[1]].push((e.ends[0], w));
    }
    let labels = graph.vertex_components();
    let mut roots: Vec<usize> = labels.clone();
    roots.sort_unstable();
    roots.dedup();
    let mut branches = Vec::new();
    for root in roots {
        let (d0, _) = dijkstra(&adj, root);
        let u = farthest(&d0, root);
        let (du, prev) = dijkstra(&adj, u);
        let v = farthest(&du, u);
        let mut ids = vec![v];
        while *ids.last().unwrap() != u {
            ids.push(prev[*ids.last().unwrap()]);
        }
        let mut path: Vec<Point> = ids.iter().map(|&i| graph.vertices[i].position).collect();
        // continue through rays at both ends
        let extend = |end: usize, inward: Option<Vector>| -> Option<Point> {
            graph
                .rays
                .iter()
                .filter(|r| r.vertex == Some(end))
                .max_by(|a, b| {
                    let score = |r: &&crate::medial::MedialRay| {
                        inward.map_or(r.separation, |t| -r.direction.dot(t))
                    };
                    score(a).total_cmp(&score(b))
                })
                .map(|r| r.origin + r.direction * reach)
        };
        let dir = |from: Point, to: Point| (to - from).normalized();
        let head_in = if path.len() > 1 {
            dir(path[0], path[1])
        } else {
            None
        };
        if let Some(p) = extend(ids[0], head_in) {
            path.insert(0, p);
        }
        let m = path.len();
        let tail_in = if m > 1 {
            dir(path[m - 1], path[m - 2])
        } else {
            None
        };
        if let Some(p) = extend(*ids.last().unwrap(), tail_in) {
            if path.len() > 1 || p != path[0] {
                path.push(p);
            }
        }
        if path.len() >= 2 {
            branches.push(path);
        }
    }
    // rays without a vertex come in opposite pairs per bisector
    let free: Vec<_> = graph.rays.iter().filter(|r| r.vertex.is_none()).collect();
    let mut used = vec![false; free.len()];
    for i in 0..free.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let r = free[i];
        let twin = (i + 1..free.len()).find(|&j| !used[j] && free[j].witnesses == r.witnesses);
        let start = match twin {
            Some(j) => {
                used[j] = true;
                free[j].origin + free[j].direction * reach
            }
            None => r.origin,
        };
        branches.push(vec![start, r.origin + r.direction * reach]);
    }
    branches
}

/// Extracts the branches of `graph` reaching into `window`, clipped to the
/// window grown by half its diagonal, and applies Giblin's formula to each
/// at one sample spacing. Finite point sets have exactly straight branches
/// with a smooth radius, so a fine difference width is accurate; sampled
/// curves need one wider than the Voronoi edge length.
pub fn reconstruct_branches(
    graph: &MedialAxisGraph,
    shape: &Shape,
    window: Window,
) -> Vec<(Vec<Point>, Result<GiblinOutput>)> {
    let spacing = shape.spacing();
    let width = if shape.chains().is_empty() {
        3e-3
    } else {
        3.0 * spacing
    };
    let reach = window.diagonal();
    let region = window.inflated(0.5 * reach);
    extract_branches(graph, reach)
        .iter()
        .flat_map(|b| clip_path(b, region))
        .map(|path| {
            let out = CurveBranch::from_path(&path, shape, spacing, width)
                .map(|b| giblin_reconstruct(&b, shape));
            (path, out)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_points() -> Shape {
        Shape::from_samples(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(),
            0.01,
        )
        .unwrap()
    }

    #[test]
    fn bisector_recovers_both_points() {
        let s = two_points();
        let path = [Point::new(0.0, -1.0), Point::new(0.0, 1.0)];
        let b = CurveBranch::from_path(&path, &s, 2e-5, 2e-5).unwrap();
        let out = giblin_reconstruct(&b, &s);
        assert_eq!(out.skipped, 0);
        assert!(out.max_residual < 1e-9, "{}", out.max_residual);
        for (p, m) in out.plus.iter().zip(&out.minus) {
            assert!((p.x.abs() - 1.0).abs() < 1e-9 && (m.x.abs() - 1.0).abs() < 1e-9);
            assert!(p.x * m.x < 0.0);
        }
    }

    #[test]
    fn lipschitz_violations_are_skipped() {
        let s = two_points();
        let mut b =
            CurveBranch::from_path(&[Point::new(0.0, 0.0), Point::new(0.0, 1.0)], &s, 0.1, 0.1)
                .unwrap();
        b.dprime[3] = 1.5;
        assert_eq!(giblin_reconstruct(&b, &s).skipped, 1);
    }

    #[test]
    fn clipping_splits_at_the_window() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let path = [
            Point::new(-2.0, 0.0),
            Point::new(0.0, 0.0),
            Point::new(0.0, 3.0),
            Point::new(0.5, 0.5),
            Point::new(0.5, -0.5),
        ];
        let pieces = clip_path(&path, w);
        assert_eq!(pieces.len(), 2);
        assert_eq!(
            pieces[0],
            vec![
                Point::new(-1.0, 0.0),
                Point::new(0.0, 0.0),
                Point::new(0.0, 1.0)
            ]
        );
        assert_eq!(pieces[1][0].y, 1.0);
        assert_eq!(*pieces[1].last().unwrap(), Point::new(0.5, -0.5));
    }

    #[test]
    fn path_of_a_chain_graph() {
        use crate::medial::voronoi_medial_axis;
        let s = Shape::from_samples(
            vec![
                Point::new(0.0, 1.0),
                Point::new(0.0, -1.0),
                Point::new(-0.5, 0.0),
                Point::new(3.0, 0.0),
            ],
            Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(),
            0.01,
        )
        .unwrap();
        let g = voronoi_medial_axis(&s).unwrap();
        let branches = extract_branches(&g, 10.0);
        assert_eq!(branches.len(), 1);
        assert!(branches[0].len() >= 3);
    }
}
