//! Planar primitives: points, balls, hyperplanes (lines) and the handful of
//! closed-form distance routines everything else builds on.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used by [`side_of`] and other exact-sign decisions.
pub const SIDE_TOL: f64 = 1e-12;

/// A point (or free vector) in the Euclidean plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

/// Free vectors share the point representation.
pub type Vector = Point;

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Checked constructor; rejects non-finite coordinates.
    pub fn try_new(x: f64, y: f64) -> Result<Self> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(Error::contract(format!("non-finite coordinate ({x}, {y})")))
        }
    }

    #[inline]
    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    #[inline]
    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    #[inline]
    pub fn dist2(self, o: Point) -> f64 {
        (self - o).norm2()
    }

    /// Counter-clockwise rotation by a quarter turn.
    #[inline]
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn normalized(self) -> Option<Point> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self * (1.0 / n))
    }

    #[inline]
    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    #[inline]
    pub fn midpoint(self, o: Point) -> Point {
        Point::new(0.5 * (self.x + o.x), 0.5 * (self.y + o.y))
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn from_angle(theta: f64) -> Point {
        Point::new(theta.cos(), theta.sin())
    }

    pub fn rotate(self, theta: f64) -> Point {
        let (s, c) = theta.sin_cos();
        Point::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 2] {
        [self.x, self.y]
    }
}

impl From<[f64; 2]> for Point {
    fn from(a: [f64; 2]) -> Self {
        Point::new(a[0], a[1])
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

impl Add for Point {
    type Output = Point;
    #[inline]
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    #[inline]
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    #[inline]
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    #[inline]
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Open ball `B(center, radius)`; its boundary circle is the locus at
/// exactly `radius` from `center`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn new(center: Point, radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() || !center.is_finite() {
            return Err(Error::contract(format!("invalid ball radius {radius}")));
        }
        Ok(Ball { center, radius })
    }

    /// Strict (open-ball) membership.
    #[inline]
    pub fn contains(&self, p: Point) -> bool {
        p.dist(self.center) < self.radius
    }

    /// Signed distance of `p` to the bounding circle, negative inside.
    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        p.dist(self.center) - self.radius
    }
}

/// Which side of a hyperplane a point lies on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    PositiveOpen,
    On,
    NegativeOpen,
}

/// The line `{x : <x, normal> = offset}`. The open half-plane
/// `{<x, normal> > offset}` is its positive side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hyperplane {
    pub normal: Vector,
    pub offset: f64,
}

impl Hyperplane {
    /// Builds a hyperplane from any non-zero normal, normalising it.
    pub fn new(normal: Vector, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) || !n.is_finite() || !offset.is_finite() {
            return Err(Error::contract(
                "hyperplane normal must be non-zero and finite",
            ));
        }
        Ok(Hyperplane {
            normal: normal * (1.0 / n),
            offset: offset / n,
        })
    }

    /// Line through `p` with the given unit normal.
    pub fn through(p: Point, normal: Vector) -> Result<Self> {
        let n = normal
            .normalized()
            .ok_or_else(|| Error::contract("zero normal"))?;
        Ok(Hyperplane {
            normal: n,
            offset: p.dot(n),
        })
    }

    #[inline]
    pub fn signed_distance(&self, p: Point) -> f64 {
        p.dot(self.normal) - self.offset
    }

    pub fn flipped(&self) -> Hyperplane {
        Hyperplane {
            normal: -self.normal,
            offset: -self.offset,
        }
    }

    /// Direction along the line (normal rotated clockwise).
    pub fn direction(&self) -> Vector {
        -self.normal.perp()
    }

    /// Foot of the perpendicular from the origin.
    pub fn anchor(&self) -> Point {
        self.normal * self.offset
    }
}

/// Sign of `<p, normal> - offset`, with `|.| <= 1e-12` reported as `On`.
pub fn side_of(p: Point, plane: &Hyperplane) -> Side {
    let s = plane.signed_distance(p);
    if s > SIDE_TOL {
        Side::PositiveOpen
    } else if s < -SIDE_TOL {
        Side::NegativeOpen
    } else {
        Side::On
    }
}

/// Closest point on the closed segment `[a, b]` to `p`, with its parameter.
pub fn closest_on_segment(p: Point, a: Point, b: Point) -> (Point, f64) {
    let ab = b - a;
    let len2 = ab.norm2();
    if len2 == 0.0 {
        return (a, 0.0);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    (a + ab * t, t)
}

pub fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    closest_on_segment(p, a, b).0.dist(p)
}

/// Distance from `p` to the closed ray `origin + s * dir`, `s >= 0`.
pub fn ray_distance(p: Point, origin: Point, dir: Vector) -> f64 {
    let s = (p - origin).dot(dir).max(0.0);
    p.dist(origin + dir * s)
}

/// Twice the signed area of the triangle `(a, b, c)`; positive when
/// counter-clockwise.
#[inline]
pub fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b - a).cross(c - a)
}

/// Circumcenter of a non-degenerate triangle.
pub fn circumcenter(a: Point, b: Point, c: Point) -> Option<Point> {
    let b = b - a;
    let c = c - a;
    let d = 2.0 * b.cross(c);
    if d == 0.0 {
        return None;
    }
    let b2 = b.norm2();
    let c2 = c.norm2();
    let ux = (c.y * b2 - b.y * c2) / d;
    let uy = (b.x * c2 - c.x * b2) / d;
    let center = Point::new(a.x + ux, a.y + uy);
    center.is_finite().then_some(center)
}

/// Smallest enclosing circle of a point set (Welzl, move-to-front).
///
/// The input is processed in a fixed, deterministic order.
pub fn smallest_enclosing_circle(points: &[Point]) -> (Point, f64) {
    match points.len() {
        0 => return (Point::ORIGIN, 0.0),
        1 => return (points[0], 0.0),
        _ => {}
    }
    // deterministic pseudo-shuffle keeps the expected linear running time
    let mut pts: Vec<Point> = points.to_vec();
    let n = pts.len();
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    for i in (1..n).rev() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let j = (state % (i as u64 + 1)) as usize;
        pts.swap(i, j);
    }

    let contains = |c: Point, r: f64, p: Point| p.dist(c) <= r * (1.0 + 1e-12) + 1e-15;
    let mut c = pts[0];
    let mut r = 0.0;
    for i in 1..n {
        if contains(c, r, pts[i]) {
            continue;
        }
        c = pts[i];
        r = 0.0;
        for j in 0..i {
            if contains(c, r, pts[j]) {
                continue;
            }
            c = pts[i].midpoint(pts[j]);
            r = pts[i].dist(c);
            for k in 0..j {
                if contains(c, r, pts[k]) {
                    continue;
                }
                match circumcenter(pts[i], pts[j], pts[k]) {
                    Some(cc) => {
                        c = cc;
                        r = cc.dist(pts[i]).max(cc.dist(pts[j])).max(cc.dist(pts[k]));
                    }
                    None => {
                        // collinear triple: the farthest pair spans the circle
                        let cand = [(pts[i], pts[j]), (pts[i], pts[k]), (pts[j], pts[k])];
                        let (a, b) = cand
                            .into_iter()
                            .max_by(|x, y| x.0.dist(x.1).total_cmp(&y.0.dist(y.1)))
                            .unwrap();
                        c = a.midpoint(b);
                        r = a.dist(c);
                    }
                }
            }
        }
    }
    (c, r)
}

/// Axis-aligned rectangle `[xmin, xmax] x [ymin, ymax]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Window {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
}

impl From<[f64; 4]> for Window {
    fn from(a: [f64; 4]) -> Self {
        Window {
            xmin: a[0],
            xmax: a[1],
            ymin: a[2],
            ymax: a[3],
        }
    }
}

impl From<Window> for [f64; 4] {
    fn from(w: Window) -> Self {
        [w.xmin, w.xmax, w.ymin, w.ymax]
    }
}

impl Window {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64) -> Result<Self> {
        let w = Window {
            xmin,
            xmax,
            ymin,
            ymax,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let ok = [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|v| v.is_finite())
            && self.xmax > self.xmin
            && self.ymax > self.ymin;
        if ok {
            Ok(())
        } else {
            Err(Error::contract(format!("degenerate window {self:?}")))
        }
    }

    pub fn width(&self) -> f64 {
        self.xmax - self.xmin
    }

    pub fn height(&self) -> f64 {
        self.ymax - self.ymin
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(0.5 * (self.xmin + self.xmax), 0.5 * (self.ymin + self.ymax))
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.xmin && p.x <= self.xmax && p.y >= self.ymin && p.y <= self.ymax
    }

    pub fn inflated(&self, margin: f64) -> Window {
        Window {
            xmin: self.xmin - margin,
            xmax: self.xmax + margin,
            ymin: self.ymin - margin,
            ymax: self.ymax + margin,
        }
    }

    pub fn bounding(points: impl IntoIterator<Item = Point>) -> Option<Window> {
        let mut it = points.into_iter();
        let first = it.next()?;
        let mut w = Window {
            xmin: first.x,
            xmax: first.x,
            ymin: first.y,
            ymax: first.y,
        };
        for p in it {
            w.xmin = w.xmin.min(p.x);
            w.xmax = w.xmax.max(p.x);
            w.ymin = w.ymin.min(p.y);
            w.ymax = w.ymax.max(p.y);
        }
        Some(w)
    }

    /// Clips the segment `a + s (b - a)`, `s in [s0, s1]`, to the window
    /// (Liang-Barsky). Returns the clipped parameter range.
    pub fn clip_param(&self, a: Point, d: Vector, s0: f64, s1: f64) -> Option<(f64, f64)> {
        let (mut lo, mut hi) = (s0, s1);
        let checks = [
            (-d.x, a.x - self.xmin),
            (d.x, self.xmax - a.x),
            (-d.y, a.y - self.ymin),
            (d.y, self.ymax - a.y),
        ];
        for (p, q) in checks {
            if p == 0.0 {
                if q < 0.0 {
                    return None;
                }
            } else {
                let r = q / p;
                if p < 0.0 {
                    lo = lo.max(r);
                } else {
                    hi = hi.min(r);
                }
            }
        }
        (lo <= hi).then_some((lo, hi))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn side_of_examples() {
        let l = Hyperplane::new(Point::new(1.0, 0.0), 0.0).unwrap();
        assert_eq!(side_of(Point::new(2.0, 3.0), &l), Side::PositiveOpen);
        assert_eq!(side_of(Point::new(0.0, 7.0), &l), Side::On);
        assert_eq!(side_of(Point::new(-1e-3, 0.0), &l), Side::NegativeOpen);
    }

    #[test]
    fn side_of_matches_direct_dot_product() {
        let l = Hyperplane::new(Point::new(0.6, -0.8), 0.3).unwrap();
        for i in 0..200 {
            let p = Point::new((i as f64 * 0.37).sin() * 5.0, (i as f64 * 1.3).cos() * 5.0);
            let raw = 0.6 * p.x - 0.8 * p.y - 0.3;
            let expect = if raw > 1e-12 {
                Side::PositiveOpen
            } else if raw < -1e-12 {
                Side::NegativeOpen
            } else {
                Side::On
            };
            assert_eq!(side_of(p, &l), expect);
        }
    }

    #[test]
    fn hyperplane_normal_is_unit() {
        let l = Hyperplane::new(Point::new(3.0, 4.0), 10.0).unwrap();
        assert!((l.normal.norm() - 1.0).abs() < 1e-12);
        assert!((l.offset - 2.0).abs() < 1e-12);
        assert!(Hyperplane::new(Point::ORIGIN, 1.0).is_err());
    }

    #[test]
    fn circumcenter_is_equidistant() {
        let (a, b, c) = (
            Point::new(0.0, 0.0),
            Point::new(4.0, 0.0),
            Point::new(1.0, 3.0),
        );
        let o = circumcenter(a, b, c).unwrap();
        assert!((o.dist(a) - o.dist(b)).abs() < 1e-12);
        assert!((o.dist(a) - o.dist(c)).abs() < 1e-12);
        assert!(circumcenter(a, b, Point::new(8.0, 0.0)).is_none());
    }

    #[test]
    fn enclosing_circle_small_cases() {
        let (c, r) = smallest_enclosing_circle(&[Point::new(-1.0, 0.0), Point::new(1.0, 0.0)]);
        assert!(c.norm() < 1e-12 && (r - 1.0).abs() < 1e-12);
        // obtuse triangle: the long side is a diameter
        let pts = [
            Point::new(-1.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(0.0, 0.1),
        ];
        let (c, r) = smallest_enclosing_circle(&pts);
        assert!(c.norm() < 1e-12 && (r - 1.0).abs() < 1e-12);
        let ring: Vec<Point> = (0..100)
            .map(|k| Point::from_angle(k as f64 * 0.0628))
            .collect();
        let (c, r) = smallest_enclosing_circle(&ring);
        assert!(c.norm() < 1e-9 && (r - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ball_rejects_nonpositive_radius() {
        assert!(Ball::new(Point::ORIGIN, 0.0).is_err());
        let b = Ball::new(Point::ORIGIN, 1.0).unwrap();
        assert!(b.contains(Point::new(0.5, 0.5)));
        assert!(!b.contains(Point::new(1.0, 0.0)));
    }

    #[test]
    fn clip_segment_to_window() {
        let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
        let (lo, hi) = w
            .clip_param(Point::new(-5.0, 0.0), Point::new(1.0, 0.0), 0.0, 100.0)
            .unwrap();
        assert!((lo - 4.0).abs() < 1e-12 && (hi - 6.0).abs() < 1e-12);
        assert!(w
            .clip_param(Point::new(-5.0, 3.0), Point::new(1.0, 0.0), 0.0, 100.0)
            .is_none());
    }
}
