//! Closed planar sets given by finite samples plus optional exact geometry.
//!
//! A [`Shape`] always carries a non-empty sample set. When exact pieces are
//! present, distance queries go to the exact geometry (closed-form for
//! segments, bounded Newton iteration for analytic curves) and the samples
//! only seed the solvers; otherwise the samples *are* the set.

use std::f64::consts::TAU;
use std::path::Path;

use rstar::primitives::GeomWithData;
use rstar::RTree;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{closest_on_segment, Point, Vector, Window};

const NEWTON_MAX_STEPS: usize = 50;
const NEWTON_STEP_TOL: f64 = 1e-12;
/// Number of arclength quadrature nodes per curve.
const ARCLENGTH_NODES: usize = 20_000;

/// Default absolute floor of the nearest-set band.
pub const NEAREST_ABS_TOL: f64 = 1e-9;
/// Default relative width of the nearest-set band.
pub const NEAREST_REL_TOL: f64 = 1e-7;

/// Nearest-set tolerance at distance `d`: `max(1e-9, 1e-7 d)`.
pub fn nearest_tol(d: f64) -> f64 {
    NEAREST_ABS_TOL.max(NEAREST_REL_TOL * d)
}

/// Analytic planar curves, parameterised over an interval `[t0, t1]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum Curve {
    /// `center + radius (cos t, sin t)`.
    Circle { center: Point, radius: f64 },
    /// `center + (a cos t, b sin t)`.
    Ellipse { center: Point, a: f64, b: f64 },
    /// Graph of the natural logarithm, parameterised by height: `(e^t, t)`.
    Logarithm,
}

impl Curve {
    pub fn point(&self, t: f64) -> Point {
        match *self {
            Curve::Circle { center, radius } => center + Point::from_angle(t) * radius,
            Curve::Ellipse { center, a, b } => center + Point::new(a * t.cos(), b * t.sin()),
            Curve::Logarithm => Point::new(t.exp(), t),
        }
    }

    pub fn deriv(&self, t: f64) -> Vector {
        match *self {
            Curve::Circle { radius, .. } => Point::new(-t.sin(), t.cos()) * radius,
            Curve::Ellipse { a, b, .. } => Point::new(-a * t.sin(), b * t.cos()),
            Curve::Logarithm => Point::new(t.exp(), 1.0),
        }
    }

    fn deriv2(&self, t: f64) -> Vector {
        match *self {
            Curve::Circle { radius, .. } => Point::new(-t.cos(), -t.sin()) * radius,
            Curve::Ellipse { a, b, .. } => Point::new(-a * t.cos(), -b * t.sin()),
            Curve::Logarithm => Point::new(t.exp(), 0.0),
        }
    }

    fn is_periodic(&self) -> bool {
        matches!(self, Curve::Circle { .. } | Curve::Ellipse { .. })
    }

    fn validate(&self) -> Result<()> {
        match *self {
            Curve::Circle { center, radius } if center.is_finite() && radius > 0.0 => Ok(()),
            Curve::Ellipse { center, a, b } if center.is_finite() && a > 0.0 && b > 0.0 => Ok(()),
            Curve::Logarithm => Ok(()),
            _ => Err(Error::contract(format!(
                "invalid curve parameters {self:?}"
            ))),
        }
    }

    /// Whether `p` lies in the closed region bounded by a closed curve.
    fn encloses(&self, p: Point) -> bool {
        match *self {
            Curve::Circle { center, radius } => p.dist(center) <= radius,
            Curve::Ellipse { center, a, b } => {
                let q = p - center;
                (q.x / a).powi(2) + (q.y / b).powi(2) <= 1.0
            }
            Curve::Logarithm => false,
        }
    }
}

/// An exact-geometry descriptor of part of the set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Piece {
    Segment {
        a: Point,
        b: Point,
    },
    Polyline {
        points: Vec<Point>,
        #[serde(default)]
        closed: bool,
    },
    /// An analytic curve over `[t0, t1]`. A closed curve may be `filled`, in
    /// which case the enclosed region belongs to the set as well.
    Curve {
        curve: Curve,
        t0: f64,
        t1: f64,
        #[serde(default)]
        filled: bool,
    },
    Point {
        at: Point,
    },
}

impl Piece {
    pub fn is_closed(&self) -> bool {
        match self {
            Piece::Polyline { closed, .. } => *closed,
            Piece::Curve { curve, t0, t1, .. } => {
                curve.is_periodic() && t1 - t0 >= TAU * (1.0 - 1e-12)
            }
            _ => false,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Piece::Segment { a, b } if a.is_finite() && b.is_finite() && a != b => Ok(()),
            Piece::Polyline { points, .. }
                if points.len() >= 2 && points.iter().all(|p| p.is_finite()) =>
            {
                Ok(())
            }
            Piece::Curve {
                curve,
                t0,
                t1,
                filled,
            } => {
                curve.validate()?;
                if !(t0.is_finite() && t1.is_finite() && t1 > t0) {
                    return Err(Error::contract(
                        "curve parameter interval must satisfy t0 < t1",
                    ));
                }
                if *filled && !self.is_closed() {
                    return Err(Error::contract("only closed curves can be filled"));
                }
                Ok(())
            }
            Piece::Point { at } if at.is_finite() => Ok(()),
            other => Err(Error::contract(format!("invalid piece {other:?}"))),
        }
    }

    /// Straight pieces of a segment or polyline; empty for other kinds.
    pub fn segments(&self) -> Vec<(Point, Point)> {
        match self {
            Piece::Segment { a, b } => vec![(*a, *b)],
            Piece::Polyline { points, closed } => {
                let mut segs: Vec<_> = points.windows(2).map(|w| (w[0], w[1])).collect();
                if *closed {
                    segs.push((*points.last().unwrap(), points[0]));
                }
                segs
            }
            _ => Vec::new(),
        }
    }

    /// Translated copy of the descriptor, if its kind can express one.
    pub fn translated(&self, v: Vector) -> Option<Piece> {
        Some(match self {
            Piece::Segment { a, b } => Piece::Segment {
                a: *a + v,
                b: *b + v,
            },
            Piece::Polyline { points, closed } => Piece::Polyline {
                points: points.iter().map(|p| *p + v).collect(),
                closed: *closed,
            },
            Piece::Curve {
                curve,
                t0,
                t1,
                filled,
            } => {
                let curve = match *curve {
                    Curve::Circle { center, radius } => Curve::Circle {
                        center: center + v,
                        radius,
                    },
                    Curve::Ellipse { center, a, b } => Curve::Ellipse {
                        center: center + v,
                        a,
                        b,
                    },
                    Curve::Logarithm => return None,
                };
                Piece::Curve {
                    curve,
                    t0: *t0,
                    t1: *t1,
                    filled: *filled,
                }
            }
            Piece::Point { at } => Piece::Point { at: *at + v },
        })
    }
}

/// Arclength-uniform samples of one piece.
///
/// Open pieces include both endpoints; closed pieces do not repeat the start.
pub fn sample_curve(piece: &Piece, spacing: f64) -> Result<Vec<Point>> {
    Ok(sample_piece(piece, spacing)?.0)
}

/// Samples plus, for analytic curves, the parameter of every sample.
fn sample_piece(piece: &Piece, spacing: f64) -> Result<(Vec<Point>, Vec<f64>)> {
    if !(spacing > 0.0) || !spacing.is_finite() {
        return Err(Error::contract("spacing must be positive"));
    }
    piece.validate()?;
    match piece {
        Piece::Point { at } => Ok((vec![*at], Vec::new())),
        Piece::Segment { .. } | Piece::Polyline { .. } => {
            let segs = piece.segments();
            let mut out = Vec::new();
            for (i, (a, b)) in segs.iter().enumerate() {
                let n = ((a.dist(*b) / spacing).ceil() as usize).max(1);
                let start = if i == 0 { 0 } else { 1 };
                for k in start..=n {
                    out.push(if k == n {
                        *b
                    } else {
                        a.lerp(*b, k as f64 / n as f64)
                    });
                }
            }
            if piece.is_closed() {
                out.pop();
            }
            Ok((out, Vec::new()))
        }
        Piece::Curve { curve, t0, t1, .. } => {
            let closed = piece.is_closed();
            let (t0, t1) = (*t0, if closed { *t0 + TAU } else { *t1 });
            // cumulative arclength table by Simpson's rule on each node interval
            let m = ARCLENGTH_NODES;
            let dt = (t1 - t0) / m as f64;
            let speed = |t: f64| curve.deriv(t).norm();
            let mut cum = Vec::with_capacity(m + 1);
            cum.push(0.0);
            for k in 0..m {
                let a = t0 + k as f64 * dt;
                let s = dt / 6.0 * (speed(a) + 4.0 * speed(a + 0.5 * dt) + speed(a + dt));
                cum.push(cum[k] + s);
            }
            let total = cum[m];
            let n = ((total / spacing).ceil() as usize).max(1);
            let count = if closed { n } else { n + 1 };
            let mut params = Vec::with_capacity(count);
            let mut j = 0;
            for k in 0..count {
                let target = total * k as f64 / n as f64;
                while j + 1 < m && cum[j + 1] < target {
                    j += 1;
                }
                let span = cum[j + 1] - cum[j];
                let frac = if span > 0.0 {
                    ((target - cum[j]) / span).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                params.push(t0 + (j as f64 + frac) * dt);
            }
            if !closed {
                *params.last_mut().unwrap() = t1;
            }
            let pts = params.iter().map(|&t| curve.point(t)).collect();
            Ok((pts, params))
        }
    }
}

/// An ordered run of samples that came from one piece.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Chain {
    /// Index into the exact pieces, when the shape still has them.
    pub piece: Option<usize>,
    pub start: usize,
    pub len: usize,
    pub closed: bool,
}

type IndexedPoint = GeomWithData<[f64; 2], usize>;

#[derive(Clone, Debug)]
struct CurveSolver {
    piece: usize,
    tree: RTree<IndexedPoint>,
    params: Vec<f64>,
    points: Vec<Point>,
}

/// A non-empty closed subset of the plane.
#[derive(Clone, Debug)]
pub struct Shape {
    samples: Vec<Point>,
    pieces: Vec<Piece>,
    chains: Vec<Chain>,
    chain_of: Vec<Option<(usize, usize)>>,
    window: Window,
    spacing: f64,
    recession: Vec<Vector>,
    truncation: Vec<Point>,
    tree: RTree<IndexedPoint>,
    solvers: Vec<CurveSolver>,
}

impl Shape {
    /// A shape that is exactly the given finite point set.
    pub fn from_samples(samples: Vec<Point>, window: Window, spacing: f64) -> Result<Self> {
        Shape::assemble(samples, Vec::new(), Vec::new(), window, spacing, None)
    }

    /// Samples every piece at `spacing` and keeps the exact geometry.
    pub fn from_pieces(pieces: Vec<Piece>, window: Window, spacing: f64) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::contract("shape needs at least one piece"));
        }
        let mut samples = Vec::new();
        let mut chains = Vec::new();
        let mut params = Vec::new();
        for (i, piece) in pieces.iter().enumerate() {
            let (pts, ts) = sample_piece(piece, spacing)?;
            chains.push(Chain {
                piece: Some(i),
                start: samples.len(),
                len: pts.len(),
                closed: piece.is_closed(),
            });
            params.push(ts);
            samples.extend(pts);
        }
        let actual = max_chain_gap(&samples, &chains).unwrap_or(spacing);
        Shape::assemble(
            samples,
            pieces,
            chains,
            window,
            actual.max(f64::MIN_POSITIVE),
            Some(params),
        )
    }

    /// Samples without exact geometry but with chain (ordering) metadata,
    /// e.g. a perturbed copy of a sampled curve.
    pub fn from_chains(
        samples: Vec<Point>,
        chains: Vec<Chain>,
        window: Window,
        spacing: f64,
    ) -> Result<Self> {
        let chains = chains
            .into_iter()
            .map(|c| Chain { piece: None, ..c })
            .collect();
        Shape::assemble(samples, Vec::new(), chains, window, spacing, None)
    }

    fn assemble(
        samples: Vec<Point>,
        pieces: Vec<Piece>,
        chains: Vec<Chain>,
        window: Window,
        spacing: f64,
        params: Option<Vec<Vec<f64>>>,
    ) -> Result<Self> {
        window.validate()?;
        if samples.is_empty() {
            return Err(Error::contract("shape needs at least one sample"));
        }
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::contract("sample spacing must be positive"));
        }
        if let Some(bad) = samples.iter().find(|p| !p.is_finite()) {
            return Err(Error::contract(format!("non-finite sample {bad}")));
        }
        let reach = window.inflated(2.0 * window.diagonal());
        if let Some(bad) = samples.iter().find(|p| !reach.contains(**p)) {
            return Err(Error::contract(format!(
                "sample {bad} lies far outside the window"
            )));
        }
        for p in &pieces {
            p.validate()?;
        }
        let mut chain_of = vec![None; samples.len()];
        for (ci, c) in chains.iter().enumerate() {
            if c.start + c.len > samples.len() {
                return Err(Error::contract("chain exceeds the sample list"));
            }
            for k in 0..c.len {
                chain_of[c.start + k] = Some((ci, k));
            }
        }
        let tree = RTree::bulk_load(
            samples
                .iter()
                .enumerate()
                .map(|(i, p)| IndexedPoint::new(p.to_array(), i))
                .collect(),
        );
        let mut solvers = Vec::new();
        if let Some(params) = params {
            for (ci, c) in chains.iter().enumerate() {
                let Some(pi) = c.piece else { continue };
                if !matches!(pieces[pi], Piece::Curve { .. }) {
                    continue;
                }
                let points = samples[c.start..c.start + c.len].to_vec();
                let tree = RTree::bulk_load(
                    points
                        .iter()
                        .enumerate()
                        .map(|(i, p)| IndexedPoint::new(p.to_array(), i))
                        .collect(),
                );
                solvers.push(CurveSolver {
                    piece: pi,
                    tree,
                    params: params[ci].clone(),
                    points,
                });
            }
        }
        let shape = Shape {
            samples,
            pieces,
            chains,
            chain_of,
            window,
            spacing,
            recession: Vec::new(),
            truncation: Vec::new(),
            tree,
            solvers,
        };
        if !shape.pieces.is_empty() {
            for s in &shape.samples {
                let d = shape.exact_distance(*s);
                if d > 1e-9 * s.norm().max(1.0) {
                    return Err(Error::contract(format!(
                        "sample {s} is {d:e} away from every exact piece"
                    )));
                }
            }
        }
        Ok(shape)
    }

    /// Declares recession directions of the closed convex hull, for sets
    /// that are unbounded but stored truncated.
    pub fn with_recession(mut self, dirs: Vec<Vector>, truncation: Vec<Point>) -> Result<Self> {
        self.recession = dirs
            .into_iter()
            .map(|d| {
                d.normalized()
                    .ok_or_else(|| Error::contract("zero recession direction"))
            })
            .collect::<Result<_>>()?;
        self.truncation = truncation;
        Ok(self)
    }

    pub fn samples(&self) -> &[Point] {
        &self.samples
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn chains(&self) -> &[Chain] {
        &self.chains
    }

    pub fn window(&self) -> Window {
        self.window
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn recession(&self) -> &[Vector] {
        &self.recession
    }

    pub fn truncation_points(&self) -> &[Point] {
        &self.truncation
    }

    pub fn has_exact_pieces(&self) -> bool {
        !self.pieces.is_empty()
    }

    /// `(chain index, position in chain)` of a sample.
    pub fn chain_position(&self, sample: usize) -> Option<(usize, usize)> {
        self.chain_of.get(sample).copied().flatten()
    }

    /// Index of the sample nearest to `p` (ties broken by the tree).
    pub fn nearest_sample(&self, p: Point) -> (usize, f64) {
        let n = self
            .tree
            .nearest_neighbor(p.to_array())
            .expect("non-empty shape");
        (n.data, p.dist(Point::from(*n.geom())))
    }

    /// Indices of all samples within `r` of `p`.
    pub fn samples_within(&self, p: Point, r: f64) -> Vec<usize> {
        let mut v: Vec<usize> = self
            .tree
            .locate_within_distance(p.to_array(), r * r)
            .map(|g| g.data)
            .collect();
        v.sort_unstable();
        v
    }

    /// `d(p, X)`: exact when pieces are present, sample-based otherwise.
    pub fn distance(&self, p: Point) -> f64 {
        if self.pieces.is_empty() {
            self.nearest_sample(p).1
        } else {
            self.exact_distance(p)
        }
    }

    /// Distance to the finite sample set, ignoring exact geometry.
    pub fn sample_distance(&self, p: Point) -> f64 {
        self.nearest_sample(p).1
    }

    fn exact_distance(&self, p: Point) -> f64 {
        let mut best = f64::INFINITY;
        let mut solver_iter = self.solvers.iter();
        for piece in &self.pieces {
            let d = match piece {
                Piece::Point { at } => p.dist(*at),
                Piece::Segment { .. } | Piece::Polyline { .. } => piece
                    .segments()
                    .iter()
                    .map(|(a, b)| closest_on_segment(p, *a, *b).0.dist(p))
                    .fold(f64::INFINITY, f64::min),
                Piece::Curve { curve, filled, .. } => {
                    let solver = solver_iter.next().expect("one solver per curve piece");
                    if *filled && curve.encloses(p) {
                        0.0
                    } else {
                        self.curve_closest(solver, p, None).1
                    }
                }
            };
            best = best.min(d);
        }
        best
    }

    /// Closest point on an analytic curve, seeded from the nearest sample of
    /// that curve (or from the given sample position). Bounded Newton on
    /// `<c(t) - p, c'(t)> = 0`; the nearest sample wins if
    /// Newton ends farther away.
    fn curve_closest(&self, solver: &CurveSolver, p: Point, seed: Option<usize>) -> (Point, f64) {
        let Piece::Curve { curve, t0, t1, .. } = &self.pieces[solver.piece] else {
            unreachable!("solver bound to a curve piece")
        };
        let k = seed.unwrap_or_else(|| solver.tree.nearest_neighbor(p.to_array()).unwrap().data);
        let fallback = (solver.points[k], solver.points[k].dist(p));
        let periodic = curve.is_periodic() && t1 - t0 >= TAU * (1.0 - 1e-12);
        let mut t = solver.params[k];
        for _ in 0..NEWTON_MAX_STEPS {
            let c = curve.point(t);
            let d1 = curve.deriv(t);
            let f = (c - p).dot(d1);
            let df = d1.norm2() + (c - p).dot(curve.deriv2(t));
            if !(df > 0.0) {
                break;
            }
            let mut step = f / df;
            // keep each step local to the seed's neighbourhood
            let max_step = 0.25 * (t1 - t0).abs().min(1.0);
            step = step.clamp(-max_step, max_step);
            let next = if periodic {
                t - step
            } else {
                (t - step).clamp(*t0, *t1)
            };
            let moved = (next - t).abs();
            t = next;
            if moved < NEWTON_STEP_TOL {
                break;
            }
        }
        let c = curve.point(t);
        let d = c.dist(p);
        if d <= fallback.1 {
            (c, d)
        } else {
            fallback
        }
    }

    /// Whether `p` belongs to the set within `tol`.
    pub fn contains(&self, p: Point, tol: f64) -> bool {
        self.distance(p) <= tol
    }

    /// `m(p)`: every point of the set realising `d(p)` up to `tol`,
    /// deduplicated at resolution `tol / 2`. Never empty.
    pub fn nearest_set(&self, p: Point, tol: f64) -> Result<Vec<Point>> {
        if !(tol > 0.0) {
            return Err(Error::contract("nearest-set tolerance must be positive"));
        }
        let d = self.distance(p);
        let reach = d + tol;
        let mut found: Vec<Point> = self
            .samples_within(p, reach)
            .into_iter()
            .map(|i| self.samples[i])
            .collect();
        if d == 0.0 {
            found.push(p);
        }
        let mut solver_iter = self.solvers.iter();
        for piece in &self.pieces {
            match piece {
                Piece::Point { at } => {
                    if p.dist(*at) <= reach {
                        found.push(*at);
                    }
                }
                Piece::Segment { .. } | Piece::Polyline { .. } => {
                    for (a, b) in piece.segments() {
                        let (c, _) = closest_on_segment(p, a, b);
                        if c.dist(p) <= reach {
                            found.push(c);
                        }
                    }
                }
                Piece::Curve { .. } => {
                    let solver = solver_iter.next().expect("one solver per curve piece");
                    // one Newton refinement per run of nearby samples
                    let mut near: Vec<usize> = solver
                        .tree
                        .locate_within_distance(p.to_array(), (reach + self.spacing).powi(2))
                        .map(|g| g.data)
                        .collect();
                    near.sort_unstable();
                    for run in split_runs(&near, solver.points.len()) {
                        let seed = *run
                            .iter()
                            .min_by(|a, b| {
                                solver.points[**a]
                                    .dist(p)
                                    .total_cmp(&solver.points[**b].dist(p))
                            })
                            .unwrap();
                        let (c, dc) = self.curve_closest(solver, p, Some(seed));
                        if dc <= reach {
                            found.push(c);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Point> = Vec::new();
        for q in found {
            if !out.iter().any(|o| o.dist(q) <= 0.5 * tol) {
                out.push(q);
            }
        }
        if out.is_empty() {
            out.push(self.samples[self.nearest_sample(p).0]);
        }
        Ok(out)
    }

    /// Rigidly moved copy (rotation about the origin, then translation).
    pub fn transformed(&self, theta: f64, shift: Vector) -> Result<Shape> {
        let map = |p: Point| p.rotate(theta) + shift;
        let samples: Vec<Point> = self.samples.iter().map(|p| map(*p)).collect();
        let c = self.window.center();
        let half = 0.5 * self.window.diagonal();
        let nc = map(c);
        let window = Window::new(nc.x - half, nc.x + half, nc.y - half, nc.y + half)?;
        let mut s = Shape::from_chains(samples, self.chains.clone(), window, self.spacing)?;
        s.recession = self.recession.iter().map(|d| d.rotate(theta)).collect();
        s.truncation = self.truncation.iter().map(|p| map(*p)).collect();
        Ok(s)
    }

    /// Translated copy. Exact pieces are kept when every piece can be
    /// translated; otherwise the copy is samples plus chains only.
    pub fn translated(&self, v: Vector) -> Result<Shape> {
        let samples: Vec<Point> = self.samples.iter().map(|p| *p + v).collect();
        let w = self.window;
        let window = Window::new(w.xmin + v.x, w.xmax + v.x, w.ymin + v.y, w.ymax + v.y)?;
        let pieces: Option<Vec<Piece>> = self.pieces.iter().map(|p| p.translated(v)).collect();
        let mut s = match pieces {
            Some(pieces) if !pieces.is_empty() => {
                let params = self.chain_params();
                Shape::assemble(
                    samples,
                    pieces,
                    self.chains.clone(),
                    window,
                    self.spacing,
                    Some(params),
                )?
            }
            _ => Shape::from_chains(samples, self.chains.clone(), window, self.spacing)?,
        };
        s.recession = self.recession.clone();
        s.truncation = self.truncation.iter().map(|p| *p + v).collect();
        Ok(s)
    }

    /// Same samples and chains with the exact geometry dropped.
    pub fn with_samples(&self, samples: Vec<Point>) -> Result<Shape> {
        if samples.len() != self.samples.len() {
            return Err(Error::contract(
                "replacement samples must match the sample count",
            ));
        }
        let mut s = Shape::from_chains(samples, self.chains.clone(), self.window, self.spacing)?;
        s.recession = self.recession.clone();
        s.truncation = self.truncation.clone();
        Ok(s)
    }

    /// Copy without the samples for which `drop` holds; chains are split
    /// where samples were removed. Exact geometry is dropped.
    pub fn without_samples(&self, drop: impl Fn(Point) -> bool) -> Result<Shape> {
        let mut samples = Vec::new();
        let mut chains = Vec::new();
        let mut push_run = |run: &mut Vec<Point>, closed: bool, samples: &mut Vec<Point>| {
            if !run.is_empty() {
                chains.push(Chain {
                    piece: None,
                    start: samples.len(),
                    len: run.len(),
                    closed,
                });
                samples.append(run);
            }
        };
        let mut covered = vec![false; self.samples.len()];
        for c in &self.chains {
            let pts = &self.samples[c.start..c.start + c.len];
            covered[c.start..c.start + c.len].fill(true);
            let kept: Vec<bool> = pts.iter().map(|p| !drop(*p)).collect();
            if kept.iter().all(|k| *k) {
                push_run(&mut pts.to_vec(), c.closed, &mut samples);
                continue;
            }
            // start after a dropped sample so a closed chain's wrap-around
            // run stays whole
            let first = if c.closed {
                kept.iter().position(|k| !*k).unwrap() + 1
            } else {
                0
            };
            let mut run = Vec::new();
            for k in 0..c.len {
                let i = (first + k) % c.len;
                if kept[i] {
                    run.push(pts[i]);
                } else {
                    push_run(&mut run, false, &mut samples);
                }
            }
            push_run(&mut run, false, &mut samples);
        }
        for (k, p) in self.samples.iter().enumerate() {
            if !covered[k] && !drop(*p) {
                push_run(&mut vec![*p], false, &mut samples);
            }
        }
        if samples.is_empty() {
            return Err(Error::contract("every sample was removed"));
        }
        let mut s = Shape::from_chains(samples, chains, self.window, self.spacing)?;
        s.recession = self.recession.clone();
        s.truncation = self.truncation.clone();
        Ok(s)
    }

    /// Curve parameters of each chain's samples, as needed to rebuild the
    /// exact-distance solvers.
    fn chain_params(&self) -> Vec<Vec<f64>> {
        self.chains
            .iter()
            .map(|c| {
                self.solvers
                    .iter()
                    .find(|s| Some(s.piece) == c.piece)
                    .map(|s| s.params.clone())
                    .unwrap_or_default()
            })
            .collect()
    }

    /// Loads a shape from the TOML schema documented in the README.
    pub fn from_toml_str(text: &str) -> Result<Shape> {
        let file: ShapeFile = toml::from_str(text)?;
        file.into_shape()
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Shape> {
        Shape::from_toml_str(&std::fs::read_to_string(path)?)
    }
}

/// Splits sorted indices into runs of consecutive values, treating indices
/// as cyclic modulo `n` so a run wrapping past the end stays whole.
fn split_runs(sorted: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut runs: Vec<Vec<usize>> = Vec::new();
    for &i in sorted {
        match runs.last_mut() {
            Some(r) if *r.last().unwrap() + 1 == i => r.push(i),
            _ => runs.push(vec![i]),
        }
    }
    if runs.len() > 1 && runs[0][0] == 0 && *runs.last().unwrap().last().unwrap() == n - 1 {
        let tail = runs.pop().unwrap();
        runs[0].splice(0..0, tail);
    }
    runs
}

fn max_chain_gap(samples: &[Point], chains: &[Chain]) -> Option<f64> {
    let mut gap: Option<f64> = None;
    for c in chains {
        let s = &samples[c.start..c.start + c.len];
        let mut g = s.windows(2).map(|w| w[0].dist(w[1])).fold(0.0, f64::max);
        if c.closed && s.len() > 2 {
            g = g.max(s[0].dist(*s.last().unwrap()));
        }
        if s.len() > 1 {
            gap = Some(gap.map_or(g, |x: f64| x.max(g)));
        }
    }
    gap
}

/// On-disk shape description.
///
/// `samples` may be omitted when `pieces` are given; the pieces are then
/// sampled at `spacing`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapeFile {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub samples: Vec<Point>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pieces: Vec<Piece>,
    pub window: Window,
    pub spacing: f64,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub recession: Vec<Point>,
    /// Points where an unbounded piece was cut off.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub truncation: Vec<Point>,
}

impl ShapeFile {
    pub fn into_shape(self) -> Result<Shape> {
        let shape = match (self.samples.is_empty(), self.pieces.is_empty()) {
            (true, true) => {
                return Err(Error::Parse(
                    "shape file needs `samples` or `pieces`".into(),
                ))
            }
            (false, true) => Shape::from_samples(self.samples, self.window, self.spacing)?,
            (true, false) => Shape::from_pieces(self.pieces, self.window, self.spacing)?,
            (false, false) => {
                // explicit samples must lie on the pieces; keep them verbatim
                let mut shape = Shape::from_pieces(self.pieces, self.window, self.spacing)?;
                let extra = Shape::from_samples(self.samples.clone(), self.window, self.spacing)?;
                for s in extra.samples() {
                    if shape.distance(*s) > 1e-9 * s.norm().max(1.0) {
                        return Err(Error::Parse(format!(
                            "sample {s} does not lie on any piece"
                        )));
                    }
                }
                let mut samples = shape.samples.clone();
                let base = samples.len();
                samples.extend(self.samples.iter().copied());
                let mut chains = shape.chains.clone();
                for k in 0..self.samples.len() {
                    chains.push(Chain {
                        piece: None,
                        start: base + k,
                        len: 1,
                        closed: false,
                    });
                }
                let params = shape
                    .chain_params()
                    .into_iter()
                    .chain(std::iter::repeat_n(Vec::new(), self.samples.len()))
                    .collect();
                shape = Shape::assemble(
                    samples,
                    std::mem::take(&mut shape.pieces),
                    chains,
                    self.window,
                    shape.spacing,
                    Some(params),
                )?;
                shape
            }
        };
        if self.recession.is_empty() && self.truncation.is_empty() {
            Ok(shape)
        } else {
            shape.with_recession(self.recession, self.truncation)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn win() -> Window {
        Window::new(-3.0, 3.0, -3.0, 3.0).unwrap()
    }

    fn two_points() -> Shape {
        Shape::from_samples(
            vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)],
            win(),
            1.0,
        )
        .unwrap()
    }

    #[test]
    fn distance_to_symmetric_pair() {
        let s = two_points();
        assert_eq!(s.distance(Point::ORIGIN), 1.0);
        assert_eq!(s.distance(Point::new(1.0, 0.0)), 0.0);
    }

    #[test]
    fn segment_distance_agrees_with_dense_samples() {
        let seg = Piece::Segment {
            a: Point::new(-1.0, 0.0),
            b: Point::new(1.0, 0.0),
        };
        let s = Shape::from_pieces(vec![seg.clone()], win(), 0.05).unwrap();
        let p = Point::new(0.0, 1.0);
        assert!((s.distance(p) - 1.0).abs() < 1e-15);
        // brute force over a much denser sampling
        let dense = sample_curve(&seg, 1e-4).unwrap();
        let brute = dense
            .iter()
            .map(|q| q.dist(p))
            .fold(f64::INFINITY, f64::min);
        assert!((brute - s.distance(p)).abs() < s.spacing());
    }

    #[test]
    fn nearest_set_examples() {
        let s = two_points();
        let m = s.nearest_set(Point::ORIGIN, 1e-9).unwrap();
        assert_eq!(m.len(), 2);
        let m = s.nearest_set(Point::new(2.0, 0.0), 1e-9).unwrap();
        assert_eq!(m, vec![Point::new(1.0, 0.0)]);
        assert!(s.nearest_set(Point::ORIGIN, 0.0).is_err());
    }

    #[test]
    fn nearest_set_of_circumcenter_has_three_points() {
        let (a, b, c) = (
            Point::new(0.0, 0.0),
            Point::new(2.0, 0.1),
            Point::new(0.7, 1.9),
        );
        let s = Shape::from_samples(vec![a, b, c, Point::new(5.0, 5.0)], win(), 1.0).unwrap();
        let o = crate::geometry::circumcenter(a, b, c).unwrap();
        assert!((o.dist(a) - o.dist(b)).abs() < 1e-12 && (o.dist(a) - o.dist(c)).abs() < 1e-12);
        let m = s.nearest_set(o, nearest_tol(o.dist(a))).unwrap();
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn sampling_counts() {
        let seg = Piece::Segment {
            a: Point::ORIGIN,
            b: Point::new(1.0, 0.0),
        };
        assert_eq!(sample_curve(&seg, 0.25).unwrap().len(), 5);
        let circle = Piece::Curve {
            curve: Curve::Circle {
                center: Point::ORIGIN,
                radius: 1.0,
            },
            t0: 0.0,
            t1: TAU,
            filled: false,
        };
        for s in [0.3, 0.1, 0.01] {
            assert_eq!(
                sample_curve(&circle, s).unwrap().len(),
                (TAU / s).ceil() as usize
            );
        }
    }

    #[test]
    fn log_samples_are_arclength_uniform() {
        let piece = Piece::Curve {
            curve: Curve::Logarithm,
            t0: 0.0,
            t1: 1.0,
            filled: false,
        };
        let pts = sample_curve(&piece, 0.1).unwrap();
        assert!(
            (pts[0].x - 1.0).abs() < 1e-12
                && (pts.last().unwrap().x - std::f64::consts::E).abs() < 1e-12
        );
        for w in pts.windows(2) {
            let g = w[0].dist(w[1]);
            assert!((0.09..=0.11).contains(&g), "gap {g}");
        }
    }

    #[test]
    fn newton_distance_to_ellipse_matches_brute_force() {
        let piece = Piece::Curve {
            curve: Curve::Ellipse {
                center: Point::ORIGIN,
                a: 2.0,
                b: 1.0,
            },
            t0: 0.0,
            t1: TAU,
            filled: false,
        };
        let s = Shape::from_pieces(vec![piece.clone()], win(), 0.05).unwrap();
        let dense = sample_curve(&piece, 1e-4).unwrap();
        for p in [
            Point::new(0.3, 0.2),
            Point::new(2.5, 1.5),
            Point::new(-1.2, -0.1),
            Point::new(0.0, 2.0),
        ] {
            let brute = dense
                .iter()
                .map(|q| q.dist(p))
                .fold(f64::INFINITY, f64::min);
            assert!(
                (s.distance(p) - brute).abs() < 1e-7,
                "{p}: {} vs {brute}",
                s.distance(p)
            );
        }
    }

    #[test]
    fn filled_disc_has_zero_interior_distance() {
        let piece = Piece::Curve {
            curve: Curve::Circle {
                center: Point::ORIGIN,
                radius: 1.0,
            },
            t0: 0.0,
            t1: TAU,
            filled: true,
        };
        let s = Shape::from_pieces(vec![piece], win(), 0.05).unwrap();
        assert_eq!(s.distance(Point::new(0.2, 0.3)), 0.0);
        assert!((s.distance(Point::new(2.0, 0.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn shape_file_rejects_unknown_fields() {
        let ok =
            "spacing = 0.5\nwindow = [-3.0, 3.0, -3.0, 3.0]\nsamples = [[-1.0, 0.0], [1.0, 0.0]]\n";
        assert_eq!(Shape::from_toml_str(ok).unwrap().samples().len(), 2);
        let bad = format!("{ok}colour = \"red\"\n");
        assert!(matches!(Shape::from_toml_str(&bad), Err(Error::Parse(_))));
        let pieces = r#"
spacing = 0.1
window = [-2.0, 2.0, -2.0, 2.0]
[[pieces]]
kind = "segment"
a = [-1.0, 0.0]
b = [1.0, 0.0]
[[pieces]]
kind = "curve"
t0 = 0.0
t1 = 1.0
curve = { name = "logarithm" }
"#;
        let s = Shape::from_toml_str(pieces).unwrap();
        assert_eq!(s.pieces().len(), 2);
        let bad_piece = pieces.replace("kind = \"segment\"", "kind = \"segment\"\nwidth = 2.0");
        assert!(Shape::from_toml_str(&bad_piece).is_err());
    }

    #[test]
    fn empty_shape_is_rejected() {
        assert!(Shape::from_samples(vec![], win(), 1.0).is_err());
        assert!(Shape::from_samples(vec![Point::new(1e6, 0.0)], win(), 1.0).is_err());
    }

    #[test]
    fn runs_wrap_cyclically() {
        assert_eq!(
            split_runs(&[0, 1, 5, 6, 9], 10),
            vec![vec![9, 0, 1], vec![5, 6]]
        );
        assert_eq!(split_runs(&[2, 3], 10), vec![vec![2, 3]]);
    }

    fn circle() -> Shape {
        let c = Curve::Circle {
            center: Point::ORIGIN,
            radius: 1.0,
        };
        let piece = Piece::Curve {
            curve: c,
            t0: 0.0,
            t1: std::f64::consts::TAU,
            filled: false,
        };
        Shape::from_pieces(vec![piece], win(), 0.1).unwrap()
    }

    #[test]
    fn translation_keeps_exact_distances() {
        let v = Point::new(0.5, -0.25);
        let s = circle();
        let t = s.translated(v).unwrap();
        assert!(t.has_exact_pieces());
        let p = Point::new(0.3, 2.0);
        assert!((t.distance(p + v) - s.distance(p)).abs() < 1e-12);
        assert!((t.window().xmin - (s.window().xmin + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn removing_samples_splits_closed_chains() {
        let s = circle();
        let t = s.without_samples(|p| p.x > 0.9).unwrap();
        assert!(t.samples().len() < s.samples().len());
        assert!(t.samples().iter().all(|p| p.x <= 0.9));
        assert_eq!(t.chains().len(), 1);
        assert!(!t.chains()[0].closed);
        // the surviving run is contiguous along the circle
        let pts = t.samples();
        assert!(pts.windows(2).all(|w| w[0].dist(w[1]) < 0.11));
        assert!(s.without_samples(|_| true).is_err());
    }
}
