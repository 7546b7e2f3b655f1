//! Built-in shapes with known answers.
//!
//! Each scenario is a [`ShapeFile`] plus the supporting lines expected to
//! qualify. The default instances are also shipped as TOML files under
//! `scenarios/` so they can be fed back through `--shape-file`.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Hyperplane, Point, Window};
use crate::shape::{Curve, Piece, Shape, ShapeFile};

pub const DEFAULT_SPACING: f64 = 0.01;

/// Principal branch of the Lambert W function: `w e^w = z`, `w >= -1`.
pub fn lambert_w0(z: f64) -> Result<f64> {
    let branch = -(-1.0f64).exp();
    if !(z >= branch + 1e-12) || !z.is_finite() {
        return Err(Error::Domain(format!(
            "lambert_w0 needs z >= -1/e, got {z}"
        )));
    }
    let mut w = if z >= 0.0 {
        z.ln_1p()
    } else {
        -1.0 + (2.0 * (1.0 + std::f64::consts::E * z)).sqrt()
    };
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - z;
        let step = f / (ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0));
        w -= step;
        if step.abs() <= 1e-16 * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}

/// `e^{W(1)+1}`, the abscissa quoted for the logarithm example.
pub fn quoted_xi() -> f64 {
    (lambert_w0(1.0).expect("1 is in the domain") + 1.0).exp()
}

/// Abscissa where the tangent to `y = ln x` through `(-1, 0)` touches the
/// graph: `ln x0 = 1 + 1/x0`, i.e. `x0 = e^{W(1/e)+1}`.
pub fn log_tangency_abscissa() -> f64 {
    (lambert_w0((-1.0f64).exp()).expect("1/e is in the domain") + 1.0).exp()
}

/// A supporting line expected to qualify, with the reason it is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpectedLine {
    pub normal: Point,
    pub offset: f64,
    pub source: String,
}

impl ExpectedLine {
    fn new(plane: Hyperplane, source: &str) -> Self {
        ExpectedLine {
            normal: plane.normal,
            offset: plane.offset,
            source: source.into(),
        }
    }

    pub fn plane(&self) -> Result<Hyperplane> {
        Hyperplane::new(self.normal, self.offset)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default)]
    pub qualifying: Vec<ExpectedLine>,
}

/// A named shape description and its expected supporting-line structure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub description: String,
    pub shape: ShapeFile,
    #[serde(default)]
    pub expected: Expected,
}

impl Scenario {
    pub fn build(&self) -> Result<Shape> {
        self.shape.clone().into_shape()
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serialises")
    }

    pub fn from_toml_str(text: &str) -> Result<Scenario> {
        Ok(toml::from_str(text)?)
    }
}

/// Names accepted by [`scenario`]; parameterised ones take their arguments
/// in parentheses, e.g. `gap_rectangle(0.3)`.
pub const SCENARIO_NAMES: [&str; 9] = [
    "disc",
    "ellipse",
    "two_points",
    "square_corners",
    "spade_like",
    "punctured_line",
    "line",
    "logarithm",
    "gap_rectangle",
];

/// Builds a scenario by name at the given spacing, optionally over a
/// different window.
pub fn scenario(name: &str, spacing: Option<f64>, window: Option<Window>) -> Result<Scenario> {
    let (base, args) = parse_name(name)?;
    let spacing = spacing.unwrap_or(DEFAULT_SPACING);
    let arg = |i: usize, default: f64| args.get(i).copied().unwrap_or(default);
    let too_many = |n: usize| {
        if args.len() > n {
            Err(Error::contract(format!(
                "`{base}` takes at most {n} parameters"
            )))
        } else {
            Ok(())
        }
    };
    let s = match base {
        "disc" => {
            too_many(0)?;
            disc(spacing, window)
        }
        "ellipse" => {
            too_many(2)?;
            ellipse(arg(0, 2.0), arg(1, 1.0), spacing, window)
        }
        "two_points" => {
            too_many(0)?;
            two_points(spacing, window)
        }
        "square_corners" => {
            too_many(0)?;
            square_corners(spacing, window)
        }
        "spade_like" => {
            too_many(0)?;
            spade_like(spacing, window)
        }
        "punctured_line" => {
            too_many(1)?;
            punctured_line(arg(0, 0.1), spacing, window)
        }
        "line" => {
            too_many(0)?;
            line(spacing, window)
        }
        "logarithm" => {
            too_many(0)?;
            logarithm(spacing, window)
        }
        "gap_rectangle" => {
            too_many(1)?;
            gap_rectangle(arg(0, 0.2), spacing, window)
        }
        _ => {
            return Err(Error::UnknownScenario {
                name: name.to_string(),
                valid: SCENARIO_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    }?;
    s.build()?;
    Ok(s)
}

/// Builds the shape of a named scenario.
pub fn build_scenario(
    name: &str,
    spacing: Option<f64>,
    window: Option<Window>,
) -> Result<(Shape, Scenario)> {
    let s = scenario(name, spacing, window)?;
    Ok((s.build()?, s))
}

fn parse_name(name: &str) -> Result<(&str, Vec<f64>)> {
    let name = name.trim();
    let Some(open) = name.find('(') else {
        return Ok((name, Vec::new()));
    };
    let inner = name[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| Error::Parse(format!("unbalanced parentheses in `{name}`")))?;
    let args = inner
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("`{s}` in `{name}`: {e}")))
        })
        .collect::<Result<_>>()?;
    Ok((name[..open].trim(), args))
}

fn shape_file(pieces: Vec<Piece>, samples: Vec<Point>, window: Window, spacing: f64) -> ShapeFile {
    ShapeFile {
        samples,
        pieces,
        window,
        spacing,
        recession: Vec::new(),
        truncation: Vec::new(),
    }
}

fn scenario_of(
    name: &str,
    description: &str,
    shape: ShapeFile,
    qualifying: Vec<ExpectedLine>,
) -> Result<Scenario> {
    Ok(Scenario {
        name: name.into(),
        description: description.into(),
        shape,
        expected: Expected { qualifying },
    })
}

fn square_window(r: f64) -> Window {
    Window {
        xmin: -r,
        xmax: r,
        ymin: -r,
        ymax: r,
    }
}

fn full_circle(curve: Curve, filled: bool) -> Piece {
    Piece::Curve {
        curve,
        t0: 0.0,
        t1: TAU,
        filled,
    }
}

pub fn disc(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let piece = full_circle(
        Curve::Circle {
            center: Point::ORIGIN,
            radius: 1.0,
        },
        true,
    );
    scenario_of(
        "disc",
        "closed unit disc; convex, so its exterior medial axis is empty",
        shape_file(
            vec![piece],
            Vec::new(),
            window.unwrap_or(square_window(2.0)),
            spacing,
        ),
        Vec::new(),
    )
}

pub fn ellipse(a: f64, b: f64, spacing: f64, window: Option<Window>) -> Result<Scenario> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::contract("ellipse semi-axes must be positive"));
    }
    let piece = full_circle(
        Curve::Ellipse {
            center: Point::ORIGIN,
            a,
            b,
        },
        false,
    );
    let w = window.unwrap_or(Window {
        xmin: -1.5 * a,
        xmax: 1.5 * a,
        ymin: -2.0 * b,
        ymax: 2.0 * b,
    });
    scenario_of(
        "ellipse",
        "ellipse curve (boundary only); interior medial axis is the segment between the evolute cusps",
        shape_file(vec![piece], Vec::new(), w, spacing),
        Vec::new(),
    )
}

pub fn two_points(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let samples = vec![Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
    let carrier = Hyperplane::new(Point::new(0.0, 1.0), 0.0)?;
    scenario_of(
        "two_points",
        "the set {(-1,0), (1,0)}; its medial axis is the bisector x = 0",
        shape_file(
            Vec::new(),
            samples,
            window.unwrap_or(square_window(3.0)),
            spacing,
        ),
        vec![
            ExpectedLine::new(carrier, "set lies in y = 0; both open sides miss it"),
            ExpectedLine::new(
                carrier.flipped(),
                "set lies in y = 0; both open sides miss it",
            ),
        ],
    )
}

pub fn square_corners(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let samples = vec![
        Point::new(-0.5, -0.5),
        Point::new(0.5, -0.5),
        Point::new(0.5, 0.5),
        Point::new(-0.5, 0.5),
    ];
    let lines = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]
        .into_iter()
        .map(|(x, y)| {
            Hyperplane::new(Point::new(x, y), 0.5)
                .map(|h| ExpectedLine::new(h, "edge meets the set only at its two corners"))
        })
        .collect::<Result<_>>()?;
    scenario_of(
        "square_corners",
        "the four corners of a unit square centred at the origin",
        shape_file(
            Vec::new(),
            samples,
            window.unwrap_or(square_window(2.0)),
            spacing,
        ),
        lines,
    )
}

/// Vertices of the concave polygon used by `spade_like`.
pub const SPADE_VERTICES: [(f64, f64); 9] = [
    (0.0, 1.2),
    (-0.9, 0.2),
    (-0.6, -0.6),
    (-0.15, -0.3),
    (-0.3, -1.0),
    (0.3, -1.0),
    (0.15, -0.3),
    (0.6, -0.6),
    (0.9, 0.2),
];

pub fn spade_like(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let points: Vec<Point> = SPADE_VERTICES
        .iter()
        .map(|&(x, y)| Point::new(x, y))
        .collect();
    // the two hull edges that bridge the notches
    let bridge = |a: Point, b: Point| -> Result<ExpectedLine> {
        // counter-clockwise hull order a -> b, outward normal on the right
        let n = (b - a).perp() * -1.0;
        Ok(ExpectedLine::new(
            Hyperplane::through(a, n)?,
            "hull edge spans a notch; only its endpoints are in the set",
        ))
    };
    let lines = vec![
        bridge(Point::new(-0.6, -0.6), Point::new(-0.3, -1.0))?,
        bridge(Point::new(0.3, -1.0), Point::new(0.6, -0.6))?,
    ];
    scenario_of(
        "spade_like",
        "closed concave polygon with a notch on each side of the stem",
        shape_file(
            vec![Piece::Polyline {
                points,
                closed: true,
            }],
            Vec::new(),
            window.unwrap_or(square_window(2.0)),
            spacing,
        ),
        lines,
    )
}

/// Half-length of the stored line pieces.
const LINE_REACH: f64 = 15.0;

pub fn punctured_line(eps: f64, spacing: f64, window: Option<Window>) -> Result<Scenario> {
    if !(eps > 0.0 && eps < LINE_REACH) {
        return Err(Error::contract("puncture half-width must lie in (0, 15)"));
    }
    let pieces = vec![
        Piece::Segment {
            a: Point::new(-LINE_REACH, 0.0),
            b: Point::new(-eps, 0.0),
        },
        Piece::Segment {
            a: Point::new(eps, 0.0),
            b: Point::new(LINE_REACH, 0.0),
        },
    ];
    let carrier = Hyperplane::new(Point::new(0.0, 1.0), 0.0)?;
    let mut file = shape_file(
        pieces,
        Vec::new(),
        window.unwrap_or(square_window(3.0)),
        spacing,
    );
    file.truncation = vec![Point::new(-LINE_REACH, 0.0), Point::new(LINE_REACH, 0.0)];
    scenario_of(
        "punctured_line",
        "the x-axis with the open interval (-eps, eps) removed",
        file,
        vec![
            ExpectedLine::new(carrier, "set lies in y = 0 and has a gap"),
            ExpectedLine::new(carrier.flipped(), "set lies in y = 0 and has a gap"),
        ],
    )
}

pub fn line(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let pieces = vec![Piece::Segment {
        a: Point::new(-LINE_REACH, 0.0),
        b: Point::new(LINE_REACH, 0.0),
    }];
    let mut file = shape_file(
        pieces,
        Vec::new(),
        window.unwrap_or(square_window(3.0)),
        spacing,
    );
    file.truncation = vec![Point::new(-LINE_REACH, 0.0), Point::new(LINE_REACH, 0.0)];
    scenario_of(
        "line",
        "the x-axis; its medial axis is empty",
        file,
        Vec::new(),
    )
}

pub fn logarithm(spacing: f64, window: Option<Window>) -> Result<Scenario> {
    let w = window.unwrap_or(Window {
        xmin: -3.0,
        xmax: 8.0,
        ymin: -4.0,
        ymax: 4.0,
    });
    // cut the graph two window sizes beyond the right and bottom edges
    let x_end = w.xmax + 2.0 * w.width();
    let y_start = w.ymin - 2.0 * w.height();
    if !(x_end > 0.0) || y_start >= x_end.ln() {
        return Err(Error::contract("window does not meet the logarithm graph"));
    }
    let pieces = vec![
        Piece::Curve {
            curve: Curve::Logarithm,
            t0: y_start,
            t1: x_end.ln(),
            filled: false,
        },
        Piece::Point {
            at: Point::new(-1.0, 0.0),
        },
    ];
    let mut file = shape_file(pieces, Vec::new(), w, spacing);
    file.recession = vec![Point::new(0.0, -1.0)];
    file.truncation = vec![
        Point::new(y_start.exp(), y_start),
        Point::new(x_end, x_end.ln()),
    ];
    let x0 = log_tangency_abscissa();
    let tangent = Hyperplane::through(Point::new(-1.0, 0.0), Point::new(-1.0 / x0, 1.0))?;
    scenario_of(
        "logarithm",
        "graph of y = ln x together with the point (-1, 0)",
        file,
        vec![
            ExpectedLine::new(
                Hyperplane::new(Point::new(-1.0, 0.0), 1.0)?,
                "vertical support at the isolated point; hull extends downward",
            ),
            ExpectedLine::new(
                tangent,
                "tangent from (-1, 0) to the graph at x0 = e^(W(1/e)+1)",
            ),
        ],
    )
}

pub fn gap_rectangle(g: f64, spacing: f64, window: Option<Window>) -> Result<Scenario> {
    if !(g > 0.0 && g < 2.0) {
        return Err(Error::contract("gap width must lie in (0, 2)"));
    }
    let points = vec![
        Point::new(2.0, 0.5 * g),
        Point::new(2.0, 1.0),
        Point::new(-2.0, 1.0),
        Point::new(-2.0, -1.0),
        Point::new(2.0, -1.0),
        Point::new(2.0, -0.5 * g),
    ];
    let w = window.unwrap_or(Window {
        xmin: -3.0,
        xmax: 4.0,
        ymin: -2.5,
        ymax: 2.5,
    });
    scenario_of(
        "gap_rectangle",
        "boundary of the rectangle [-2,2]x[-1,1] with a gap of width g centred on the right side",
        shape_file(
            vec![Piece::Polyline {
                points,
                closed: false,
            }],
            Vec::new(),
            w,
            spacing,
        ),
        vec![ExpectedLine::new(
            Hyperplane::new(Point::new(1.0, 0.0), 2.0)?,
            "right side is interrupted by the gap",
        )],
    )
}

/// Default instance of every scenario.
pub fn all_scenarios(spacing: Option<f64>) -> Result<Vec<Scenario>> {
    SCENARIO_NAMES
        .iter()
        .map(|n| scenario(n, spacing, None))
        .collect()
}
