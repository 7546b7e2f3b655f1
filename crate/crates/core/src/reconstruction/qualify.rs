//! Supporting lines whose open side is reconstructible, and the point
//! classifier built on them.

use crate::geometry::{side_of, Hyperplane, Point, Side};
use crate::hull::{ConvexHull, Face, HullPosition};
use crate::shape::{Piece, Shape};

/// Why a supporting line `L` has `X ∩ L` different from `conv X ∩ L`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QualifyReason {
    /// `X ∩ L` has a gap.
    NonconvexIntersection,
    /// `X ∩ L` is an interval that stops short of an end of the hull face.
    HullFaceNotCovered,
    /// The whole set lies in `L`, and misses part of its hull.
    ShapeInPlane,
}

impl QualifyReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            QualifyReason::NonconvexIntersection => "nonconvex_intersection",
            QualifyReason::HullFaceNotCovered => "hull_face_not_covered",
            QualifyReason::ShapeInPlane => "shape_in_plane",
        }
    }
}

/// One supporting line of the hull and the verdict on it.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportingLine {
    pub plane: Hyperplane,
    pub face: Face,
    pub qualifies: bool,
    pub reason: Option<QualifyReason>,
    /// The face only exists because the stored set is a truncation.
    pub truncation_artifact: bool,
}

/// Every face-supporting line of a hull with its qualification verdict.
/// Vertex-only supporting lines never qualify and are not listed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct HyperplaneFamily {
    pub lines: Vec<SupportingLine>,
    /// Maximal gap tolerated inside `X ∩ L`.
    pub coverage_tol: f64,
}

impl HyperplaneFamily {
    /// Qualifying lines, excluding truncation artifacts.
    pub fn qualifying(&self) -> impl Iterator<Item = &Hyperplane> {
        self.lines
            .iter()
            .filter(|l| l.qualifies && !l.truncation_artifact)
            .map(|l| &l.plane)
    }
}

/// Decides, for every hull face, whether `X ∩ L ≠ conv X ∩ L`. Pieces of
/// `X ∩ L` are the exact segments lying on `L` plus samples on `L`; gaps up
/// to `2 · spacing` are closed, since neighbouring samples of a curve span a
/// hull chord.
pub fn qualify_hyperplanes(shape: &Shape, hull: &ConvexHull) -> HyperplaneFamily {
    let coverage_tol = 2.0 * shape.spacing();
    let scale = shape.window().diagonal().max(1.0);
    let line_tol = 1e-9 * scale;
    let mut lines = Vec::new();
    let support = hull.supporting_hyperplanes();
    match hull.vertices().len() {
        1 => {}
        2 => {
            let (a, b) = (hull.vertices()[0], hull.vertices()[1]);
            let verdict = face_verdict(shape, a, b, line_tol, coverage_tol)
                .map(|_| QualifyReason::ShapeInPlane);
            for (plane, face) in support.planes {
                lines.push(SupportingLine {
                    plane,
                    face,
                    qualifies: verdict.is_some(),
                    reason: verdict,
                    truncation_artifact: false,
                });
            }
        }
        _ => {
            for (plane, face) in support.planes {
                let Face::Edge(k) = face else { continue };
                let edge = &hull.edges()[k];
                let verdict = face_verdict(shape, edge.a, edge.b, line_tol, coverage_tol);
                lines.push(SupportingLine {
                    plane,
                    face,
                    qualifies: verdict.is_some(),
                    reason: verdict,
                    truncation_artifact: edge.truncation_artifact,
                });
            }
        }
    }
    HyperplaneFamily {
        lines,
        coverage_tol,
    }
}

/// Compares `X ∩ L` with the face `[a, b]` of the hull on `L`.
fn face_verdict(
    shape: &Shape,
    a: Point,
    b: Point,
    line_tol: f64,
    coverage_tol: f64,
) -> Option<QualifyReason> {
    let len = a.dist(b);
    let u = (b - a) * (1.0 / len);
    let n = u.perp();
    let on_line = |p: Point| (p - a).dot(n).abs() <= line_tol;
    let param = |p: Point| (p - a).dot(u).clamp(0.0, len);
    let mut spans: Vec<(f64, f64)> = Vec::new();
    for piece in shape.pieces() {
        match piece {
            Piece::Segment { .. } | Piece::Polyline { .. } => {
                for (p, q) in piece.segments() {
                    if on_line(p) && on_line(q) {
                        let (s, t) = (param(p), param(q));
                        spans.push((s.min(t), s.max(t)));
                    }
                }
            }
            Piece::Point { at } if on_line(*at) => spans.push((param(*at), param(*at))),
            _ => {}
        }
    }
    for s in shape.samples() {
        if on_line(*s) {
            spans.push((param(*s), param(*s)));
        }
    }
    spans.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (lo, hi) in spans {
        match merged.last_mut() {
            Some(last) if lo - last.1 <= coverage_tol => last.1 = last.1.max(hi),
            _ => merged.push((lo, hi)),
        }
    }
    if merged.len() > 1 {
        Some(QualifyReason::NonconvexIntersection)
    } else if merged.is_empty() || merged[0].0 > coverage_tol || len - merged[0].1 > coverage_tol {
        Some(QualifyReason::HullFaceNotCovered)
    } else {
        None
    }
}

/// Label assigned to a grid cell or point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    InX,
    ReconHull,
    ReconHalfspace,
    NotRecon,
    BoundaryBand,
}

impl Label {
    pub const ALL: [Label; 5] = [
        Label::InX,
        Label::ReconHull,
        Label::ReconHalfspace,
        Label::NotRecon,
        Label::BoundaryBand,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            Label::InX => "IN_X",
            Label::ReconHull => "RECON_HULL",
            Label::ReconHalfspace => "RECON_HALFSPACE",
            Label::NotRecon => "NOT_RECON",
            Label::BoundaryBand => "BOUNDARY_BAND",
        }
    }

    pub fn is_reconstructible(&self) -> bool {
        matches!(self, Label::ReconHull | Label::ReconHalfspace)
    }
}

/// Tolerance of the hull test used by the classifier.
pub fn hull_tol(shape: &Shape) -> f64 {
    1e-9 * shape.window().diagonal().max(1.0)
}

/// Reconstructible iff `p` is in the closed hull or on the open far side of
/// a qualifying supporting line.
pub fn classify_point(
    p: Point,
    shape: &Shape,
    hull: &ConvexHull,
    family: &HyperplaneFamily,
) -> Label {
    if hull.contains(p, hull_tol(shape)) != HullPosition::Outside {
        Label::ReconHull
    } else if family
        .qualifying()
        .any(|l| side_of(p, l) == Side::PositiveOpen)
    {
        Label::ReconHalfspace
    } else {
        Label::NotRecon
    }
}
