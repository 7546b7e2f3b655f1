//! Brute-force union-of-balls membership.
//!
//! Along a Voronoi edge or ray with witness `w`, the quantity
//! `|p - a|² - |w - a|²` is affine in the position `a`. So `p` lies in some
//! ball `B(a, d(a))` over the edge iff it lies in the ball at one of the
//! edge's endpoints. A ray capped at length `r_max` therefore contributes
//! exactly two balls, and the union over the whole graph is a finite union.

use rstar::primitives::{GeomWithData, Rectangle};
use rstar::RTree;

use crate::geometry::{Ball, Point};
use crate::medial::MedialAxisGraph;

/// Default ray cap in multiples of the window diagonal.
pub const DEFAULT_RMAX_MULT: f64 = 100.0;

type BallEntry = GeomWithData<Rectangle<[f64; 2]>, usize>;

/// The balls `B(a, d(a))` over a medial-axis graph, indexed for point
/// queries.
#[derive(Clone, Debug)]
pub struct BallCover {
    balls: Vec<Ball>,
    index: RTree<BallEntry>,
}

impl BallCover {
    /// Balls at every vertex, every ray origin, and every ray end at
    /// distance `r_max` along the ray. Edge balls are spanned by the balls
    /// at their end vertices.
    pub fn new(graph: &MedialAxisGraph, r_max: f64) -> Self {
        let mut balls = Vec::new();
        let mut push = |c: Point, r: f64| {
            if r > 0.0 {
                balls.push(Ball {
                    center: c,
                    radius: r,
                });
            }
        };
        for v in &graph.vertices {
            push(v.position, v.radius);
        }
        for r in &graph.rays {
            if r.vertex.is_none() {
                push(r.origin, graph.radius_at(r.witnesses, r.origin));
            }
            let end = r.origin + r.direction * r_max;
            push(end, graph.radius_at(r.witnesses, end));
        }
        let index = RTree::bulk_load(
            balls
                .iter()
                .enumerate()
                .map(|(i, b)| {
                    let (c, r) = (b.center, b.radius);
                    BallEntry::new(
                        Rectangle::from_corners([c.x - r, c.y - r], [c.x + r, c.y + r]),
                        i,
                    )
                })
                .collect(),
        );
        BallCover { balls, index }
    }

    pub fn balls(&self) -> &[Ball] {
        &self.balls
    }

    /// Whether `p` is in the open union of the balls.
    pub fn contains(&self, p: Point) -> bool {
        self.index
            .locate_all_at_point(p.to_array())
            .any(|e| self.balls[e.data].contains(p))
    }

    /// `max (d(a) - |p - a|)` over the balls, i.e. how deep `p` sits in the
    /// union; positive iff `p` is covered.
    pub fn margin(&self, p: Point) -> f64 {
        self.index
            .locate_all_at_point(p.to_array())
            .map(|e| -self.balls[e.data].signed_distance(p))
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Whether `p` lies in `B(a, d(a))` for some point `a` of the graph, with
/// rays capped at `r_max`.
pub fn reconstructible_oracle(p: Point, graph: &MedialAxisGraph, r_max: f64) -> bool {
    BallCover::new(graph, r_max).contains(p)
}

/// Slow reference: minimises `|p - a(s)| - d(a(s))` over every edge and ray
/// by a 64-sample scan followed by golden-section refinement.
pub fn reconstructible_by_scan(p: Point, graph: &MedialAxisGraph, r_max: f64) -> bool {
    let excess = |a: Point, w: Point| p.dist(a) - a.dist(w);
    if graph.vertices.iter().any(|v| p.dist(v.position) < v.radius) {
        return true;
    }
    let segments = graph
        .edges
        .iter()
        .map(|e| {
            let (a, b) = graph.edge_segment(e);
            (a, b, graph.sites[e.witnesses[0]])
        })
        .chain(graph.rays.iter().map(|r| {
            (
                r.origin,
                r.origin + r.direction * r_max,
                graph.sites[r.witnesses[0]],
            )
        }));
    for (a, b, w) in segments {
        let f = |s: f64| excess(a.lerp(b, s), w);
        const N: usize = 64;
        let (mut best_s, mut best) = (0.0, f64::INFINITY);
        for k in 0..=N {
            let s = k as f64 / N as f64;
            let v = f(s);
            if v < best {
                best = v;
                best_s = s;
            }
        }
        let (mut lo, mut hi) = (
            (best_s - 1.0 / N as f64).max(0.0),
            (best_s + 1.0 / N as f64).min(1.0),
        );
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..100 {
            let (m1, m2) = (hi - g * (hi - lo), lo + g * (hi - lo));
            if f(m1) < f(m2) {
                hi = m2;
            } else {
                lo = m1;
            }
        }
        if best.min(f(0.5 * (lo + hi))) < 0.0 {
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;
    use crate::medial::voronoi_medial_axis;
    use crate::shape::Shape;

    fn two_points() -> MedialAxisGraph {
        let s = Shape::from_samples(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            Window::new(-3.0, 3.0, -3.0, 3.0).unwrap(),
            0.01,
        )
        .unwrap();
        voronoi_medial_axis(&s).unwrap()
    }

    #[test]
    fn two_point_examples() {
        let g = two_points();
        let r_max = 100.0 * 72f64.sqrt();
        assert!(reconstructible_oracle(Point::new(0.5, 0.0), &g, r_max));
        assert!(!reconstructible_oracle(Point::new(2.0, 0.0), &g, r_max));
        assert!(reconstructible_oracle(Point::new(2.0, 0.5), &g, r_max));
    }

    #[test]
    fn endpoint_balls_match_the_scan() {
        let g = two_points();
        let cover = BallCover::new(&g, 50.0);
        for i in 0..41 {
            for j in 0..41 {
                let p = Point::new(-3.0 + 0.15 * i as f64, -3.0 + 0.15 * j as f64 + 0.013);
                assert_eq!(
                    cover.contains(p),
                    reconstructible_by_scan(p, &g, 50.0),
                    "{p}"
                );
            }
        }
    }
}
