//! Pointwise queries: medial-point test, maximal balls, reaching radii.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::geometry::{Point, Vector};
use crate::shape::{nearest_tol, Shape};

/// Tolerance of the tangency predicate used when growing balls.
const TANGENCY_TOL: f64 = 1e-9;
/// Directions probed when testing maximality.
const MAXIMAL_PROBES: usize = 16;

/// Whether `p` has at least two nearest points more than `2 tol` apart.
pub fn is_medial_point(p: Point, shape: &Shape, tol: f64) -> Result<bool> {
    let m = shape.nearest_set(p, tol)?;
    Ok(m.iter()
        .enumerate()
        .any(|(i, a)| m[i + 1..].iter().any(|b| a.dist(*b) > 2.0 * tol)))
}

/// Outcome of growing a tangent ball along a direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reach {
    Finite(f64),
    /// The ball still misses the set at the search cap.
    Unbounded,
}

/// `sup { ρ : B(x + ρv, d(x + ρv)) misses X }` for `x` on the set, by
/// bisection on the tangency predicate `d(x + ρv) >= ρ - tol`.
pub fn directional_reaching_radius(
    x: Point,
    v: Vector,
    shape: &Shape,
    r_max: f64,
) -> Result<Reach> {
    if shape.distance(x) > TANGENCY_TOL * x.norm().max(1.0) {
        return Err(Error::contract(format!("{x} is not a point of the set")));
    }
    let v = v
        .normalized()
        .ok_or_else(|| Error::contract("direction must be non-zero"))?;
    if !(r_max > 0.0) {
        return Err(Error::contract("r_max must be positive"));
    }
    let holds = |rho: f64| shape.distance(x + v * rho) >= rho - TANGENCY_TOL;
    if holds(r_max) {
        return Ok(Reach::Unbounded);
    }
    let (mut lo, mut hi) = (0.0, r_max);
    while hi - lo > 1e-13 * r_max {
        let mid = 0.5 * (lo + hi);
        if holds(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Reach::Finite(lo))
}

/// A ball in the complement of the set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CentralPoint {
    pub center: Point,
    pub radius: f64,
    /// No probed enlargement by `1e-6 radius` stays clear of the set.
    pub maximal: bool,
}

/// Result of inflating the ball at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Inflation {
    Center(CentralPoint),
    /// The ball grows past the search cap without meeting the set.
    Escaped,
}

/// Grows `B(p, d(p))` away from the unique nearest point `x_p` of `p` until
/// it becomes maximal, and returns that maximal ball.
pub fn inflate_to_center(p: Point, shape: &Shape, r_max: f64) -> Result<Inflation> {
    let d = shape.distance(p);
    if d <= 0.0 {
        return Err(Error::contract(format!("{p} lies in the set")));
    }
    let tol = nearest_tol(d);
    if is_medial_point(p, shape, tol)? {
        return Err(Error::contract(format!(
            "{p} has several nearest points, so the inflation direction is ambiguous"
        )));
    }
    let xp = shape.nearest_set(p, tol)?[0];
    match directional_reaching_radius(xp, p - xp, shape, r_max)? {
        Reach::Unbounded => Ok(Inflation::Escaped),
        Reach::Finite(rho) => {
            let v = (p - xp).normalized().expect("p is off the set");
            // p itself is always covered; bisection may stop a hair short
            let center = xp + v * rho.max(d);
            let radius = shape.distance(center);
            Ok(Inflation::Center(CentralPoint {
                center,
                radius,
                maximal: is_maximal(center, radius, shape),
            }))
        }
    }
}

/// Every probed enlargement `B(c + δu, r + δ)` meets the set.
fn is_maximal(center: Point, radius: f64, shape: &Shape) -> bool {
    let delta = 1e-6 * radius;
    (0..MAXIMAL_PROBES).all(|k| {
        let u = Point::from_angle(TAU * k as f64 / MAXIMAL_PROBES as f64);
        shape.distance(center + u * delta) < radius + delta * (1.0 - 1e-3)
    })
}

/// Smallest distance between distinct single-linkage clusters of the
/// nearest set of `p`; infinite when the nearest set is one cluster.
pub fn component_separation(p: Point, shape: &Shape, link_radius: f64) -> Result<f64> {
    let d = shape.distance(p);
    if d <= 0.0 {
        return Err(Error::contract(format!("{p} lies in the set")));
    }
    let m = shape.nearest_set(p, nearest_tol(d))?;
    let n = m.len();
    let mut label: Vec<usize> = (0..n).collect();
    // single linkage by repeated relabelling; nearest sets are small
    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            for j in 0..n {
                if m[i].dist(m[j]) <= link_radius && label[j] > label[i] {
                    label[j] = label[i];
                    changed = true;
                }
            }
        }
    }
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            if label[i] != label[j] {
                best = best.min(m[i].dist(m[j]));
            }
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Window;
    use crate::shape::{Curve, Piece};

    fn win() -> Window {
        Window::new(-3.0, 3.0, -3.0, 3.0).unwrap()
    }

    fn finite(points: &[(f64, f64)]) -> Shape {
        let p = points.iter().map(|&(x, y)| Point::new(x, y)).collect();
        Shape::from_samples(p, win(), 0.01).unwrap()
    }

    fn circle() -> Shape {
        let piece = Piece::Curve {
            curve: Curve::Circle {
                center: Point::ORIGIN,
                radius: 1.0,
            },
            t0: 0.0,
            t1: TAU,
            filled: false,
        };
        Shape::from_pieces(vec![piece], win(), 0.01).unwrap()
    }

    #[test]
    fn medial_points_of_two_points() {
        let s = finite(&[(-1.0, 0.0), (1.0, 0.0)]);
        assert!(is_medial_point(Point::new(0.0, 5.0), &s, 1e-9).unwrap());
        assert!(!is_medial_point(Point::new(2.0, 0.0), &s, 1e-9).unwrap());
    }

    #[test]
    fn reaching_radius_examples() {
        let line = Shape::from_pieces(
            vec![Piece::Segment {
                a: Point::new(-50.0, 0.0),
                b: Point::new(50.0, 0.0),
            }],
            Window::new(-50.0, 50.0, -50.0, 50.0).unwrap(),
            0.1,
        )
        .unwrap();
        assert_eq!(
            directional_reaching_radius(Point::ORIGIN, Point::new(0.0, 1.0), &line, 20.0).unwrap(),
            Reach::Unbounded
        );
        let c = circle();
        let x = Point::new(1.0, 0.0);
        assert_eq!(
            directional_reaching_radius(x, Point::new(1.0, 0.0), &c, 100.0).unwrap(),
            Reach::Unbounded
        );
        match directional_reaching_radius(x, Point::new(-1.0, 0.0), &c, 100.0).unwrap() {
            Reach::Finite(r) => assert!((r - 1.0).abs() < 1e-6 * 100.0),
            Reach::Unbounded => panic!("inward radius must be finite"),
        }
        let two = finite(&[(-1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(
            directional_reaching_radius(x, Point::new(0.0, 1.0), &two, 100.0).unwrap(),
            Reach::Unbounded
        );
        assert!(
            directional_reaching_radius(Point::new(0.0, 0.5), Point::new(0.0, 1.0), &two, 1.0)
                .is_err()
        );
    }

    #[test]
    fn inflation_examples() {
        let sq = finite(&[(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]);
        let Inflation::Center(c) = inflate_to_center(Point::new(0.1, 0.1), &sq, 100.0).unwrap()
        else {
            panic!("square corners trap the ball");
        };
        assert!(c.center.norm() < 1e-9);
        assert!((c.radius - 0.5f64.sqrt()).abs() < 1e-9);
        assert!(c.maximal);
        let two = finite(&[(-1.0, 0.0), (1.0, 0.0)]);
        assert!(matches!(
            inflate_to_center(Point::new(0.0, 0.5), &two, 100.0),
            Err(Error::Contract(_))
        ));
        assert_eq!(
            inflate_to_center(Point::new(2.0, 0.0), &circle(), 100.0).unwrap(),
            Inflation::Escaped
        );
    }

    #[test]
    fn separation_between_witness_clusters() {
        let two = finite(&[(-1.0, 0.0), (1.0, 0.0)]);
        assert_eq!(
            component_separation(Point::new(0.0, 0.3), &two, 0.02).unwrap(),
            2.0
        );
        assert_eq!(
            component_separation(Point::new(3.0, 0.0), &two, 0.02).unwrap(),
            f64::INFINITY
        );
        let s = 3f64.sqrt();
        let tri = finite(&[(-1.0, 0.0), (1.0, 0.0), (0.0, s)]);
        let c = Point::new(0.0, s / 3.0);
        assert!((component_separation(c, &tri, 0.02).unwrap() - 2.0).abs() < 1e-12);
    }
}
