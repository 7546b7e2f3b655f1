//! Planar convex hulls and their supporting lines.

use std::f64::consts::{PI, TAU};

use rstar::primitives::{GeomWithData, Line};
use rstar::RTree;

use crate::error::{Error, Result};
use crate::geometry::{closest_on_segment, orient, Hyperplane, Point, Vector, Window};
use crate::shape::Shape;

/// How far recession directions are pushed, in multiples of the sample
/// bounding-box diagonal.
const RECESSION_REACH: f64 = 1e3;

/// Position of a point relative to a hull.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HullPosition {
    Inside,
    Boundary,
    Outside,
}

/// One edge of a hull, with the outward supporting line through it.
#[derive(Clone, Debug, PartialEq)]
pub struct HullEdge {
    pub a: Point,
    pub b: Point,
    /// Outward normal: every sample has `side_of` in {On, NegativeOpen}.
    pub plane: Hyperplane,
    /// The edge exists only because an unbounded set was cut off.
    pub truncation_artifact: bool,
}

/// Normals of lines supporting the hull at a single vertex, as the angular
/// interval `[start, start + width]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VertexFan {
    pub vertex: Point,
    pub start: f64,
    pub width: f64,
}

impl VertexFan {
    pub fn contains_normal(&self, n: Vector) -> bool {
        let rel = (n.y.atan2(n.x) - self.start).rem_euclid(TAU);
        rel <= self.width + 1e-12
    }
}

/// What a supporting line touches.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Face {
    /// Index into [`ConvexHull::edges`].
    Edge(usize),
    /// The line that contains a collinear set, in one orientation.
    Carrier,
}

/// Supporting lines of a hull: one per face plus the vertex fans.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportingLines {
    pub planes: Vec<(Hyperplane, Face)>,
    pub fans: Vec<VertexFan>,
}

type EdgeEntry = GeomWithData<Line<[f64; 2]>, usize>;

/// Counter-clockwise convex polygon; collinear inputs give a 2-vertex hull
/// flagged degenerate, a single point a 1-vertex hull.
#[derive(Clone, Debug)]
pub struct ConvexHull {
    vertices: Vec<Point>,
    synthetic: Vec<bool>,
    edges: Vec<HullEdge>,
    index: RTree<EdgeEntry>,
}

impl ConvexHull {
    /// Hull of a bare point list.
    pub fn of_points(points: &[Point]) -> Result<Self> {
        let flags = vec![false; points.len()];
        ConvexHull::build(points, &flags, &[])
    }

    fn build(points: &[Point], synthetic: &[bool], truncation: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::contract("convex hull of an empty set"));
        }
        let scale = Window::bounding(points.iter().copied())
            .map(|w| w.diagonal())
            .unwrap_or(0.0)
            .max(1.0);
        let mut idx: Vec<usize> = (0..points.len()).collect();
        idx.sort_by(|&i, &j| {
            let (p, q) = (points[i], points[j]);
            p.x.total_cmp(&q.x).then(p.y.total_cmp(&q.y))
        });
        idx.dedup_by(|i, j| points[*i] == points[*j]);
        // strict left turn, up to a relative angle tolerance
        let turns_left = |o: usize, a: usize, b: usize| {
            let (p, q, r) = (points[o], points[a], points[b]);
            orient(p, q, r) > 1e-12 * (q - p).norm() * (r - q).norm()
        };
        let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
        for pass in 0..2 {
            let floor = hull.len() + 2;
            let order: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
                Box::new(idx.iter())
            } else {
                Box::new(idx.iter().rev())
            };
            for &i in order {
                while hull.len() >= floor
                    && !turns_left(hull[hull.len() - 2], hull[hull.len() - 1], i)
                {
                    hull.pop();
                }
                hull.push(i);
            }
            hull.pop();
        }
        if hull.is_empty() {
            hull.push(idx[0]);
        }
        if hull.len() == 2 && points[hull[0]] == points[hull[1]] {
            hull.pop();
        }
        let vertices: Vec<Point> = hull.iter().map(|&i| points[i]).collect();
        let synth: Vec<bool> = hull.iter().map(|&i| synthetic[i]).collect();
        let near_cut = |p: Point| truncation.iter().any(|t| t.dist(p) <= 1e-9 * scale);
        let mut edges = Vec::new();
        if vertices.len() >= 3 {
            for k in 0..vertices.len() {
                let l = (k + 1) % vertices.len();
                let (a, b) = (vertices[k], vertices[l]);
                let outward = (b - a).perp() * -1.0;
                let plane = Hyperplane::through(a, outward)?;
                let artifact = (synth[k] && synth[l]) || near_cut(a) || near_cut(b);
                edges.push(HullEdge {
                    a,
                    b,
                    plane,
                    truncation_artifact: artifact,
                });
            }
        }
        let index = RTree::bulk_load(
            edges
                .iter()
                .enumerate()
                .map(|(i, e)| EdgeEntry::new(Line::new(e.a.to_array(), e.b.to_array()), i))
                .collect(),
        );
        Ok(ConvexHull {
            vertices,
            synthetic: synth,
            edges,
            index,
        })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// Whether a vertex was added to stand in for a recession direction.
    pub fn is_synthetic(&self, vertex: usize) -> bool {
        self.synthetic[vertex]
    }

    /// Edges in counter-clockwise order. Empty for degenerate hulls.
    pub fn edges(&self) -> &[HullEdge] {
        &self.edges
    }

    pub fn is_degenerate(&self) -> bool {
        self.vertices.len() < 3
    }

    /// Inside / boundary / outside, with points within `tol` of the
    /// boundary counted as boundary.
    pub fn contains(&self, p: Point, tol: f64) -> HullPosition {
        self.locate(p, tol).0
    }

    /// Distance from `p` to the hull boundary (to the segment when degenerate).
    pub fn boundary_distance(&self, p: Point) -> f64 {
        self.locate(p, 0.0).1
    }

    /// Position and boundary distance in one nearest-edge query.
    pub fn locate(&self, p: Point, tol: f64) -> (HullPosition, f64) {
        if self.vertices.len() < 3 {
            let (a, b) = (self.vertices[0], *self.vertices.last().unwrap());
            let d = closest_on_segment(p, a, b).0.dist(p);
            let pos = if d <= tol {
                HullPosition::Boundary
            } else {
                HullPosition::Outside
            };
            return (pos, d);
        }
        let k = self
            .index
            .nearest_neighbor(p.to_array())
            .expect("hull has edges")
            .data;
        let e = &self.edges[k];
        let (q, t) = closest_on_segment(p, e.a, e.b);
        let d = q.dist(p);
        if d <= tol {
            return (HullPosition::Boundary, d);
        }
        // at a vertex the outward direction is the sum of both edge normals
        let n = self.edges.len();
        let normal = if t <= 0.0 {
            e.plane.normal + self.edges[(k + n - 1) % n].plane.normal
        } else if t >= 1.0 {
            e.plane.normal + self.edges[(k + 1) % n].plane.normal
        } else {
            e.plane.normal
        };
        let pos = if (p - q).dot(normal) > 0.0 {
            HullPosition::Outside
        } else {
            HullPosition::Inside
        };
        (pos, d)
    }

    /// One line per edge (outward), the carrier in both orientations for a
    /// collinear hull, and the normal fan at every vertex.
    pub fn supporting_hyperplanes(&self) -> SupportingLines {
        let n = self.vertices.len();
        match n {
            1 => SupportingLines {
                planes: Vec::new(),
                fans: vec![VertexFan {
                    vertex: self.vertices[0],
                    start: 0.0,
                    width: TAU,
                }],
            },
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                let normal = (b - a).perp();
                let up = Hyperplane::through(a, normal).expect("distinct hull vertices");
                let angle = |v: Vector| v.y.atan2(v.x);
                SupportingLines {
                    planes: vec![(up, Face::Carrier), (up.flipped(), Face::Carrier)],
                    // the fan at `a` runs from +normal through -direction to -normal
                    fans: vec![
                        VertexFan {
                            vertex: a,
                            start: angle(normal),
                            width: PI,
                        },
                        VertexFan {
                            vertex: b,
                            start: angle(normal * -1.0),
                            width: PI,
                        },
                    ],
                }
            }
            _ => {
                let planes = self
                    .edges
                    .iter()
                    .enumerate()
                    .map(|(i, e)| (e.plane, Face::Edge(i)))
                    .collect();
                let fans = (0..n)
                    .map(|k| {
                        let prev = &self.edges[(k + n - 1) % n].plane.normal;
                        let next = &self.edges[k].plane.normal;
                        let start = prev.y.atan2(prev.x);
                        let width = (next.y.atan2(next.x) - start).rem_euclid(TAU);
                        VertexFan {
                            vertex: self.vertices[k],
                            start,
                            width,
                        }
                    })
                    .collect();
                SupportingLines { planes, fans }
            }
        }
    }
}

/// Closed convex hull of a shape's samples. Recession directions of an
/// unbounded (truncated) set are realised by far-away synthetic points.
pub fn convex_hull(shape: &Shape) -> Result<ConvexHull> {
    let samples = shape.samples();
    if shape.recession().is_empty() {
        return ConvexHull::build(
            samples,
            &vec![false; samples.len()],
            shape.truncation_points(),
        );
    }
    let reach = RECESSION_REACH
        * Window::bounding(samples.iter().copied())
            .map(|w| w.diagonal())
            .unwrap_or(1.0)
            .max(1.0);
    let mut points = samples.to_vec();
    let mut synthetic = vec![false; samples.len()];
    for d in shape.recession() {
        for s in samples {
            points.push(*s + *d * reach);
            synthetic.push(true);
        }
    }
    ConvexHull::build(&points, &synthetic, shape.truncation_points())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{side_of, Side};

    fn pts(v: &[(f64, f64)]) -> Vec<Point> {
        v.iter().map(|&(x, y)| Point::new(x, y)).collect()
    }

    #[test]
    fn square_with_center() {
        let h = ConvexHull::of_points(&pts(&[
            (0.0, 0.0),
            (1.0, 0.0),
            (1.0, 1.0),
            (0.0, 1.0),
            (0.5, 0.5),
        ]))
        .unwrap();
        assert_eq!(h.vertices().len(), 4);
        let s = h.supporting_hyperplanes();
        assert_eq!(s.planes.len(), 4);
        for f in &s.fans {
            assert!((f.width - PI / 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn collinear_and_single_point_hulls() {
        let h = ConvexHull::of_points(&pts(&[(-1.0, 0.0), (1.0, 0.0), (0.0, 0.0)])).unwrap();
        assert!(h.is_degenerate());
        assert_eq!(h.vertices().len(), 2);
        let s = h.supporting_hyperplanes();
        assert_eq!(s.planes.len(), 2);
        assert_eq!(s.planes[0].0.flipped(), s.planes[1].0);
        assert!(s.planes.iter().all(|(p, _)| p.normal.x.abs() < 1e-15));
        let one = ConvexHull::of_points(&pts(&[(2.0, 3.0), (2.0, 3.0)])).unwrap();
        assert_eq!(one.vertices().len(), 1);
        assert!(ConvexHull::of_points(&[]).is_err());
    }

    #[test]
    fn circle_samples_are_all_vertices() {
        let p: Vec<Point> = (0..64)
            .map(|k| Point::from_angle(TAU * k as f64 / 64.0))
            .collect();
        let h = ConvexHull::of_points(&p).unwrap();
        assert_eq!(h.vertices().len(), 64);
    }

    #[test]
    fn hexagon_fans_are_sixty_degrees() {
        let p: Vec<Point> = (0..6)
            .map(|k| Point::from_angle(TAU * k as f64 / 6.0))
            .collect();
        let s = ConvexHull::of_points(&p).unwrap().supporting_hyperplanes();
        assert_eq!(s.planes.len(), 6);
        let total: f64 = s.fans.iter().map(|f| f.width).sum();
        assert!((total - TAU).abs() < 1e-12);
        assert!(s.fans.iter().all(|f| (f.width - PI / 3.0).abs() < 1e-12));
    }

    #[test]
    fn containment_classes() {
        let tri = pts(&[(0.0, 0.0), (3.0, 0.0), (0.0, 3.0)]);
        let h = ConvexHull::of_points(&tri).unwrap();
        let tol = 1e-9;
        assert_eq!(h.contains(Point::new(1.0, 1.0), tol), HullPosition::Inside);
        assert_eq!(h.contains(tri[1], tol), HullPosition::Boundary);
        assert_eq!(
            h.contains(Point::new(1.0, -2.0 * tol), tol),
            HullPosition::Outside
        );
    }

    #[test]
    fn samples_lie_behind_every_edge() {
        let p = pts(&[(0.0, 0.0), (2.0, 0.3), (1.5, 2.0), (-0.4, 1.1), (0.7, 0.9)]);
        let h = ConvexHull::of_points(&p).unwrap();
        for (plane, _) in h.supporting_hyperplanes().planes {
            assert!(p.iter().all(|q| side_of(*q, &plane) != Side::PositiveOpen));
        }
    }

    #[test]
    fn nearest_edge_location_matches_half_plane_test() {
        let p: Vec<Point> = (0..40)
            .map(|k| Point::from_angle(TAU * k as f64 / 40.0) * (1.0 + 0.3 * (k % 3) as f64))
            .collect();
        let h = ConvexHull::of_points(&p).unwrap();
        for i in 0..60 {
            for j in 0..60 {
                let q = Point::new(-1.5 + 0.05 * i as f64, -1.5 + 0.05 * j as f64);
                let worst = h
                    .edges()
                    .iter()
                    .map(|e| e.plane.signed_distance(q))
                    .fold(f64::NEG_INFINITY, f64::max);
                let brute = h
                    .edges()
                    .iter()
                    .map(|e| closest_on_segment(q, e.a, e.b).0.dist(q))
                    .fold(f64::INFINITY, f64::min);
                let (pos, d) = h.locate(q, 1e-12);
                assert!((d - brute).abs() < 1e-12);
                if worst.abs() > 1e-9 {
                    assert_eq!(pos == HullPosition::Outside, worst > 0.0, "{q}");
                }
            }
        }
    }
}
