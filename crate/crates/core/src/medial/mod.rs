//! Medial axes of sampled sets.
//!
//! For a finite point set the medial axis is exactly the union of Voronoi
//! edges and vertices; [`voronoi_medial_axis`] builds that graph from a
//! Delaunay triangulation. Sampled curves produce extra Voronoi pieces
//! between neighbouring samples which [`prune_sampling_artifacts`] removes.

mod central;
mod prune;

pub use central::{
    component_separation, directional_reaching_radius, inflate_to_center, is_medial_point,
    CentralPoint, Inflation, Reach,
};
pub use prune::{lambda_prune, prune_sampling_artifacts, DEFAULT_KAPPA};

use delaunator::{next_halfedge, prev_halfedge, triangulate, EMPTY};

use crate::error::{Error, Result};
use crate::geometry::{
    circumcenter, closest_on_segment, ray_distance, smallest_enclosing_circle, Point, Vector,
    Window,
};
use crate::shape::Shape;

/// A Voronoi vertex: a point with three or more nearest samples.
#[derive(Clone, Debug, PartialEq)]
pub struct MedialVertex {
    pub position: Point,
    /// Common distance to the witnesses.
    pub radius: f64,
    /// Indices into [`MedialAxisGraph::sites`], sorted.
    pub witnesses: Vec<usize>,
    /// Radius of the smallest disc enclosing the witnesses.
    pub separation: f64,
}

/// A bounded Voronoi edge; every interior point is equidistant from exactly
/// the two witnesses.
#[derive(Clone, Debug, PartialEq)]
pub struct MedialEdge {
    pub ends: [usize; 2],
    pub witnesses: [usize; 2],
    /// Half the distance between the witnesses.
    pub separation: f64,
}

/// An unbounded Voronoi edge.
#[derive(Clone, Debug, PartialEq)]
pub struct MedialRay {
    pub origin: Point,
    /// Vertex the ray starts from, `None` for bisectors of collinear sets.
    pub vertex: Option<usize>,
    pub direction: Vector,
    pub witnesses: [usize; 2],
    pub separation: f64,
}

/// Vertices, bounded edges and rays of a medial axis, together with the
/// sample sites that the witness indices refer to.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct MedialAxisGraph {
    pub sites: Vec<Point>,
    pub vertices: Vec<MedialVertex>,
    pub edges: Vec<MedialEdge>,
    pub rays: Vec<MedialRay>,
    /// Elements dropped by the pruning steps applied so far.
    pub removed: usize,
}

impl MedialAxisGraph {
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.edges.is_empty() && self.rays.is_empty()
    }

    pub fn witness_points(&self, ids: &[usize]) -> Vec<Point> {
        ids.iter().map(|&i| self.sites[i]).collect()
    }

    pub fn edge_segment(&self, e: &MedialEdge) -> (Point, Point) {
        (
            self.vertices[e.ends[0]].position,
            self.vertices[e.ends[1]].position,
        )
    }

    /// `d(a)` at any point of an edge or ray carrying `witnesses`.
    pub fn radius_at(&self, witnesses: [usize; 2], a: Point) -> f64 {
        a.dist(self.sites[witnesses[0]])
    }

    /// Euclidean distance from `p` to the point set of the graph.
    pub fn distance_to(&self, p: Point) -> f64 {
        let v = self.vertices.iter().map(|v| v.position.dist(p));
        let e = self.edges.iter().map(|e| {
            let (a, b) = self.edge_segment(e);
            closest_on_segment(p, a, b).0.dist(p)
        });
        let r = self
            .rays
            .iter()
            .map(|r| ray_distance(p, r.origin, r.direction));
        v.chain(e).chain(r).fold(f64::INFINITY, f64::min)
    }

    /// The part of the graph clipped to a window, as straight pieces.
    pub fn segments_in(&self, window: Window) -> Vec<(Point, Point)> {
        let mut out = Vec::new();
        for e in &self.edges {
            let (a, b) = self.edge_segment(e);
            if let Some((s0, s1)) = window.clip_param(a, b - a, 0.0, 1.0) {
                out.push((a + (b - a) * s0, a + (b - a) * s1));
            }
        }
        let far = 2.0 * window.diagonal()
            + self
                .rays
                .iter()
                .map(|r| r.origin.dist(window.center()))
                .fold(0.0, f64::max);
        for r in &self.rays {
            if let Some((s0, s1)) = window.clip_param(r.origin, r.direction, 0.0, far) {
                out.push((r.origin + r.direction * s0, r.origin + r.direction * s1));
            }
        }
        out
    }

    /// Number of connected components, counting rays with their vertex.
    pub fn component_count(&self) -> usize {
        let mut labels = self.vertex_components();
        labels.sort_unstable();
        labels.dedup();
        labels.len() + self.rays.iter().filter(|r| r.vertex.is_none()).count()
    }

    /// Component label for each vertex (labels are the smallest vertex index).
    pub fn vertex_components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut i: usize) -> usize {
            while parent[i] != i {
                parent[i] = parent[parent[i]];
                i = parent[i];
            }
            i
        }
        for e in &self.edges {
            let (a, b) = (find(&mut parent, e.ends[0]), find(&mut parent, e.ends[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.vertices.len())
            .map(|i| find(&mut parent, i))
            .collect()
    }

    /// Keeps vertices accepted by `keep_vertex`, then edges and rays that
    /// satisfy `keep_edge` / `keep_ray` and whose vertices survived.
    pub(crate) fn retain(
        &self,
        keep_vertex: impl Fn(usize, &MedialVertex) -> bool,
        keep_edge: impl Fn(&MedialEdge) -> bool,
        keep_ray: impl Fn(&MedialRay) -> bool,
    ) -> MedialAxisGraph {
        let mut map = vec![None; self.vertices.len()];
        let mut vertices = Vec::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if keep_vertex(i, v) {
                map[i] = Some(vertices.len());
                vertices.push(v.clone());
            }
        }
        let edges: Vec<MedialEdge> = self
            .edges
            .iter()
            .filter(|e| keep_edge(e))
            .filter_map(|e| {
                let ends = [map[e.ends[0]]?, map[e.ends[1]]?];
                Some(MedialEdge { ends, ..e.clone() })
            })
            .collect();
        let rays: Vec<MedialRay> = self
            .rays
            .iter()
            .filter(|r| keep_ray(r))
            .filter_map(|r| match r.vertex {
                None => Some(r.clone()),
                Some(v) => map[v].map(|nv| MedialRay {
                    vertex: Some(nv),
                    ..r.clone()
                }),
            })
            .collect();
        let removed = self.removed
            + (self.vertices.len() - vertices.len())
            + (self.edges.len() - edges.len())
            + (self.rays.len() - rays.len());
        MedialAxisGraph {
            sites: self.sites.clone(),
            vertices,
            edges,
            rays,
            removed,
        }
    }
}

/// Medial axis of the sample set: Voronoi vertices, bounded edges, and
/// unbounded rays. Exact for finite sets. Vertices inside a filled region of
/// the shape are dropped together with their edges and rays.
pub fn voronoi_medial_axis(shape: &Shape) -> Result<MedialAxisGraph> {
    let samples = shape.samples();
    // coincident samples share one site
    let mut order: Vec<usize> = (0..samples.len()).collect();
    order.sort_by(|&i, &j| {
        samples[i]
            .x
            .total_cmp(&samples[j].x)
            .then(samples[i].y.total_cmp(&samples[j].y))
    });
    order.dedup_by(|i, j| samples[*i] == samples[*j]);
    order.sort_unstable();
    if order.len() < 2 {
        return Err(Error::contract(
            "medial axis needs at least two distinct samples",
        ));
    }
    let sites: Vec<Point> = samples.to_vec();
    let pts: Vec<delaunator::Point> = order
        .iter()
        .map(|&i| delaunator::Point {
            x: sites[i].x,
            y: sites[i].y,
        })
        .collect();
    let tri = triangulate(&pts);
    let scale = Window::bounding(order.iter().map(|&i| sites[i]))
        .map(|w| w.diagonal())
        .unwrap_or(1.0)
        .max(1.0);

    if tri.triangles.is_empty() {
        return Ok(collinear_bisectors(sites, &order));
    }

    // one vertex per triangle, merged when circumcenters coincide
    let ntri = tri.triangles.len() / 3;
    let merge_tol = 1e-8 * scale;
    let mut tree: rstar::RTree<rstar::primitives::GeomWithData<[f64; 2], usize>> =
        rstar::RTree::new();
    let mut vertices: Vec<MedialVertex> = Vec::new();
    let mut tri_vertex = vec![usize::MAX; ntri];
    for t in 0..ntri {
        let ids = [0, 1, 2].map(|k| order[tri.triangles[3 * t + k]]);
        let [a, b, c] = ids.map(|i| sites[i]);
        let center =
            circumcenter(a, b, c).unwrap_or_else(|| smallest_enclosing_circle(&[a, b, c]).0);
        let hit = tree
            .locate_within_distance(center.to_array(), merge_tol * merge_tol)
            .map(|g| g.data)
            .min();
        let v = match hit {
            Some(v) => v,
            None => {
                tree.insert(rstar::primitives::GeomWithData::new(
                    center.to_array(),
                    vertices.len(),
                ));
                vertices.push(MedialVertex {
                    position: center,
                    radius: 0.0,
                    witnesses: Vec::new(),
                    separation: 0.0,
                });
                vertices.len() - 1
            }
        };
        vertices[v].witnesses.extend(ids);
        tri_vertex[t] = v;
    }
    for v in &mut vertices {
        v.witnesses.sort_unstable();
        v.witnesses.dedup();
        let w: Vec<Point> = v.witnesses.iter().map(|&i| sites[i]).collect();
        v.radius = w.iter().map(|q| q.dist(v.position)).sum::<f64>() / w.len() as f64;
        v.separation = smallest_enclosing_circle(&w).1;
    }

    let mut edges = Vec::new();
    let mut rays = Vec::new();
    for e in 0..tri.triangles.len() {
        let a = order[tri.triangles[e]];
        let b = order[tri.triangles[next_halfedge(e)]];
        let separation = 0.5 * sites[a].dist(sites[b]);
        let witnesses = if a < b { [a, b] } else { [b, a] };
        let opp = tri.halfedges[e];
        let v = tri_vertex[e / 3];
        if opp == EMPTY {
            let third = sites[order[tri.triangles[prev_halfedge(e)]]];
            let mut dir = (sites[b] - sites[a])
                .perp()
                .normalized()
                .expect("distinct sites");
            if dir.dot(third - sites[a]) > 0.0 {
                dir = -dir;
            }
            rays.push(MedialRay {
                origin: vertices[v].position,
                vertex: Some(v),
                direction: dir,
                witnesses,
                separation,
            });
        } else if e < opp {
            let w = tri_vertex[opp / 3];
            if v != w {
                edges.push(MedialEdge {
                    ends: [v.min(w), v.max(w)],
                    witnesses,
                    separation,
                });
            }
        }
    }
    let graph = MedialAxisGraph {
        sites,
        vertices,
        edges,
        rays,
        removed: 0,
    };
    if shape.pieces().is_empty() {
        return Ok(graph);
    }
    let inside: Vec<bool> = graph
        .vertices
        .iter()
        .map(|v| shape.distance(v.position) <= 1e-12 * scale && v.radius > 1e-12 * scale)
        .collect();
    Ok(graph.retain(|i, _| !inside[i], |_| true, |_| true))
}

/// All sites on one line: the medial axis is the family of perpendicular
/// bisectors between neighbours, each stored as two opposite rays.
fn collinear_bisectors(sites: Vec<Point>, order: &[usize]) -> MedialAxisGraph {
    let (p0, p1) = (sites[order[0]], sites[order[1]]);
    let dir = (p1 - p0).normalized().expect("distinct sites");
    let mut along: Vec<usize> = order.to_vec();
    along.sort_by(|&i, &j| {
        (sites[i] - p0)
            .dot(dir)
            .total_cmp(&(sites[j] - p0).dot(dir))
    });
    let mut rays = Vec::new();
    for w in along.windows(2) {
        let (a, b) = (sites[w[0]], sites[w[1]]);
        let witnesses = if w[0] < w[1] {
            [w[0], w[1]]
        } else {
            [w[1], w[0]]
        };
        let origin = a.midpoint(b);
        let normal = (b - a).perp().normalized().expect("distinct sites");
        let separation = 0.5 * a.dist(b);
        for d in [normal, -normal] {
            rays.push(MedialRay {
                origin,
                vertex: None,
                direction: d,
                witnesses,
                separation,
            });
        }
    }
    MedialAxisGraph {
        sites,
        vertices: Vec::new(),
        edges: Vec::new(),
        rays,
        removed: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn finite(points: &[(f64, f64)]) -> Shape {
        let p = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Shape::from_samples(p, Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(), 0.01).unwrap()
    }

    #[test]
    fn two_points_give_opposite_bisector_rays() {
        let g = voronoi_medial_axis(&finite(&[(-1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!(g.vertices.is_empty() && g.edges.is_empty());
        assert_eq!(g.rays.len(), 2);
        for r in &g.rays {
            assert_eq!(r.origin, Point::ORIGIN);
            assert!(r.direction.x.abs() < 1e-15);
            assert_eq!(r.separation, 1.0);
        }
        assert!((g.rays[0].direction + g.rays[1].direction).norm() < 1e-15);
    }

    #[test]
    fn equilateral_triangle() {
        let s = 3f64.sqrt();
        let g = voronoi_medial_axis(&finite(&[(-1.0, 0.0), (1.0, 0.0), (0.0, s)])).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.rays.len(), 3);
        let c = Point::new(0.0, s / 3.0);
        assert!(g.vertices[0].position.dist(c) < 1e-12);
        for r in &g.rays {
            // rays leave the triangle through the edge midpoints
            let mid_dir = (r.origin - c).norm() < 1e-12;
            assert!(mid_dir);
        }
    }

    #[test]
    fn square_corners_merge_into_one_vertex() {
        let g = voronoi_medial_axis(&finite(&[
            (-0.5, -0.5),
            (0.5, -0.5),
            (0.5, 0.5),
            (-0.5, 0.5),
        ]))
        .unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(g.edges.is_empty());
        assert_eq!(g.rays.len(), 4);
        assert!(g.vertices[0].position.norm() < 1e-12);
        assert!((g.vertices[0].radius - 0.5f64.sqrt()).abs() < 1e-12);
        assert_eq!(g.vertices[0].witnesses.len(), 4);
    }

    #[test]
    fn coincident_samples_are_rejected() {
        assert!(voronoi_medial_axis(&finite(&[(1.0, 1.0), (1.0, 1.0)])).is_err());
    }

    #[test]
    fn distance_to_graph() {
        let g = voronoi_medial_axis(&finite(&[(-1.0, 0.0), (1.0, 0.0)])).unwrap();
        assert!((g.distance_to(Point::new(0.7, 5.0)) - 0.7).abs() < 1e-15);
    }
}
