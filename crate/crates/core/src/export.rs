//! File formats: graph tables, graymaps, SVG figures and CSV reports.
//!
//! Graymap bytes per label:
//!
//! | label             | byte |
//! |-------------------|------|
//! | `IN_X`            | 0    |
//! | `BOUNDARY_BAND`   | 64   |
//! | `RECON_HULL`      | 160  |
//! | `RECON_HALFSPACE` | 208  |
//! | `NOT_RECON`       | 255  |
//!
//! The first row written is the top of the window.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::{Hyperplane, Point, Window};
use crate::medial::MedialAxisGraph;
use crate::reconstruction::{ClassifiedRaster, Comparison, Label, Pipeline};
use crate::shape::Shape;
use crate::stability::{LiminfReport, MarginOutcome, PersistenceReport};

pub fn label_byte(label: Label) -> u8 {
    match label {
        Label::InX => 0,
        Label::BoundaryBand => 64,
        Label::ReconHull => 160,
        Label::ReconHalfspace => 208,
        Label::NotRecon => 255,
    }
}

/// Binary portable graymap (P5) of the final labels.
pub fn raster_pgm(raster: &ClassifiedRaster) -> Vec<u8> {
    let (nx, ny) = (raster.grid.nx, raster.grid.ny);
    let mut out = format!("P5\n{nx} {ny}\n255\n").into_bytes();
    out.reserve(nx * ny);
    for j in (0..ny).rev() {
        out.extend((0..nx).map(|i| label_byte(raster.label(i, j))));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRow {
    pub x: f64,
    pub y: f64,
    pub radius: f64,
    pub separation: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeRow {
    pub from: usize,
    pub to: usize,
    pub witnesses: [Point; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RayRow {
    pub origin: Point,
    pub direction: Point,
    /// Index of the vertex the ray starts at, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertex: Option<usize>,
}

/// Medial-axis graph as TOML tables.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    #[serde(default)]
    pub vertices: Vec<VertexRow>,
    #[serde(default)]
    pub edges: Vec<EdgeRow>,
    #[serde(default)]
    pub rays: Vec<RayRow>,
}

impl GraphFile {
    pub fn from_graph(graph: &MedialAxisGraph) -> GraphFile {
        GraphFile {
            vertices: graph
                .vertices
                .iter()
                .map(|v| VertexRow {
                    x: v.position.x,
                    y: v.position.y,
                    radius: v.radius,
                    separation: v.separation,
                })
                .collect(),
            edges: graph
                .edges
                .iter()
                .map(|e| EdgeRow {
                    from: e.ends[0],
                    to: e.ends[1],
                    witnesses: [graph.sites[e.witnesses[0]], graph.sites[e.witnesses[1]]],
                })
                .collect(),
            rays: graph
                .rays
                .iter()
                .map(|r| RayRow {
                    origin: r.origin,
                    direction: r.direction,
                    vertex: r.vertex,
                })
                .collect(),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("graph tables serialise")
    }

    pub fn from_toml_str(text: &str) -> Result<GraphFile> {
        Ok(toml::from_str(text)?)
    }
}

/// Header of the comparison metrics table.
pub const METRICS_HEADER: &str =
    "shape,decider_a,decider_b,h,agreement,compared,mismatches,confusion";

/// One metrics row. The confusion matrix is flattened row-major over
/// `Label::ALL` and joined with `;` so the row keeps a fixed column count.
pub fn metrics_row(
    shape_id: &str,
    a: &ClassifiedRaster,
    b: &ClassifiedRaster,
    cmp: &Comparison,
) -> String {
    let confusion: Vec<String> = cmp
        .confusion
        .iter()
        .flatten()
        .map(|c| c.to_string())
        .collect();
    format!(
        "{shape_id},{},{},{},{:.6},{},{},{}",
        a.decider,
        b.decider,
        a.grid.step,
        cmp.agreement,
        cmp.compared,
        cmp.mismatches.len(),
        confusion.join(";")
    )
}

/// Per-label cell counts of single rasters.
pub fn label_counts_csv(shape_id: &str, rasters: &[&ClassifiedRaster]) -> String {
    let mut out = String::from("shape,decider,h");
    for l in Label::ALL {
        write!(out, ",{}", l.as_str()).unwrap();
    }
    out.push('\n');
    for r in rasters {
        write!(out, "{shape_id},{},{}", r.decider, r.grid.step).unwrap();
        for l in Label::ALL {
            write!(out, ",{}", r.count(l)).unwrap();
        }
        out.push('\n');
    }
    out
}

/// `probe_x,probe_y,t,distance` per probe and ladder entry, then the set
/// distances per ladder entry with empty probe columns.
pub fn liminf_csv(report: &LiminfReport) -> String {
    let mut out = String::from("probe_x,probe_y,t,distance,one_sided,hausdorff\n");
    for (p, row) in report.probes.iter().zip(&report.distances) {
        for (t, d) in report.ladder.iter().zip(row) {
            writeln!(out, "{},{},{t},{d},,", p.x, p.y).unwrap();
        }
    }
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for (k, t) in report.ladder.iter().enumerate() {
        writeln!(
            out,
            ",,{t},,{},{}",
            opt(report.one_sided[k]),
            opt(report.hausdorff[k])
        )
        .unwrap();
    }
    out
}

/// `probe_x,probe_y,margin,t,persisted` rows in walking order.
pub fn persistence_csv(reports: &[(f64, &PersistenceReport)]) -> String {
    let mut out = String::from("probe_x,probe_y,margin,t,persisted\n");
    for (margin, r) in reports {
        for (t, ok) in r.walked.iter().zip(&r.persisted) {
            writeln!(out, "{},{},{margin},{t},{ok}", r.point.x, r.point.y).unwrap();
        }
    }
    out
}

pub fn margin_csv(outcomes: &[MarginOutcome]) -> String {
    let rows: Vec<(f64, &PersistenceReport)> = outcomes
        .iter()
        .map(|o| (o.probe.margin, &o.report))
        .collect();
    persistence_csv(&rows)
}

const SVG_WIDTH: f64 = 800.0;

fn label_fill(label: Label) -> Option<&'static str> {
    match label {
        Label::InX => Some("#000000"),
        Label::BoundaryBand => Some("#bdbdbd"),
        Label::ReconHull => Some("#6baed6"),
        Label::ReconHalfspace => Some("#c6dbef"),
        Label::NotRecon => None,
    }
}

/// SVG canvas with the window mapped to a fixed-width viewport, y up.
pub struct Svg {
    window: Window,
    scale: f64,
    body: String,
}

impl Svg {
    pub fn new(window: Window) -> Svg {
        Svg {
            window,
            scale: SVG_WIDTH / window.width(),
            body: String::new(),
        }
    }

    fn px(&self, p: Point) -> (f64, f64) {
        (
            (p.x - self.window.xmin) * self.scale,
            (self.window.ymax - p.y) * self.scale,
        )
    }

    /// Cells of a raster, merging runs of equal labels along each row.
    pub fn raster(&mut self, raster: &ClassifiedRaster) {
        let g = &raster.grid;
        let cell = g.step * self.scale;
        for j in 0..g.ny {
            let mut i = 0;
            while i < g.nx {
                let l = raster.label(i, j);
                let start = i;
                while i < g.nx && raster.label(i, j) == l {
                    i += 1;
                }
                if let Some(fill) = label_fill(l) {
                    let corner = Point::new(
                        g.window.xmin + start as f64 * g.step,
                        g.window.ymin + (j + 1) as f64 * g.step,
                    );
                    let (x, y) = self.px(corner);
                    writeln!(
                        self.body,
                        r#"<rect x="{x:.3}" y="{y:.3}" width="{:.3}" height="{cell:.3}" fill="{fill}"/>"#,
                        (i - start) as f64 * cell
                    )
                    .unwrap();
                }
            }
        }
    }

    pub fn segment(&mut self, a: Point, b: Point, style: &str) {
        let Some((s0, s1)) = self.window.clip_param(a, b - a, 0.0, 1.0) else {
            return;
        };
        let (p, q) = (a.lerp(b, s0), a.lerp(b, s1));
        let ((x1, y1), (x2, y2)) = (self.px(p), self.px(q));
        writeln!(
            self.body,
            r#"<line x1="{x1:.3}" y1="{y1:.3}" x2="{x2:.3}" y2="{y2:.3}" {style}/>"#
        )
        .unwrap();
    }

    /// A line across the window with its equation written near one end.
    pub fn labeled_line(&mut self, plane: &Hyperplane, style: &str) {
        let far = 2.0 * self.window.diagonal();
        let c = self.window.center();
        let foot = c - plane.normal * plane.signed_distance(c);
        let d = plane.direction();
        let Some((s0, s1)) = self
            .window
            .clip_param(foot - d * far, d * (2.0 * far), 0.0, 1.0)
        else {
            return;
        };
        self.segment(foot - d * far, foot + d * far, style);
        let at = (foot - d * far).lerp(foot + d * far, s0 + 0.9 * (s1 - s0));
        let (x, y) = self.px(at);
        let (n, o) = (plane.normal, plane.offset);
        writeln!(
            self.body,
            r##"<text x="{x:.3}" y="{y:.3}" font-size="12" fill="#b2182b">{:.4}x{:+.4}y={:.4}</text>"##,
            n.x, n.y, o
        )
        .unwrap();
    }

    pub fn dot(&mut self, p: Point, r: f64, fill: &str) {
        if !self.window.contains(p) {
            return;
        }
        let (x, y) = self.px(p);
        writeln!(
            self.body,
            r#"<circle cx="{x:.3}" cy="{y:.3}" r="{r}" fill="{fill}"/>"#
        )
        .unwrap();
    }

    pub fn samples(&mut self, shape: &Shape) {
        for p in shape.samples() {
            self.dot(*p, 1.0, "#000000");
        }
    }

    /// The graph clipped to the window, dashed.
    pub fn medial_axis(&mut self, graph: &MedialAxisGraph) {
        for (a, b) in graph.segments_in(self.window) {
            self.segment(
                a,
                b,
                r##"stroke="#d95f02" stroke-width="1.5" stroke-dasharray="6 4""##,
            );
        }
    }

    pub fn finish(self) -> String {
        let h = self.window.height() * self.scale;
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SVG_WIDTH}\" height=\"{h:.3}\" viewBox=\"0 0 {SVG_WIDTH} {h:.3}\">\n\
             <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n{}</svg>\n",
            self.body
        )
    }
}

/// Samples and dashed medial axis.
pub fn medial_svg(shape: &Shape, graph: &MedialAxisGraph, window: Window) -> String {
    let mut svg = Svg::new(window);
    svg.medial_axis(graph);
    svg.samples(shape);
    svg.finish()
}

/// Classified cells under the hull outline, the qualifying lines and the
/// dashed medial axis.
pub fn raster_svg(raster: &ClassifiedRaster, pipeline: &Pipeline) -> String {
    let mut svg = Svg::new(raster.grid.window);
    svg.raster(raster);
    for e in pipeline.hull.edges() {
        if !e.truncation_artifact {
            svg.segment(e.a, e.b, r##"stroke="#1b7837" stroke-width="2""##);
        }
    }
    for plane in pipeline.family.qualifying() {
        svg.labeled_line(plane, r##"stroke="#b2182b" stroke-width="1.5""##);
    }
    svg.medial_axis(&pipeline.graph);
    svg.samples(&pipeline.shape);
    svg.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reconstruction::{Decider, PipelineConfig};
    use crate::scenarios::build_scenario;

    #[test]
    fn pgm_layout() {
        let (shape, _) = build_scenario("two_points", None, None).unwrap();
        let p = Pipeline::new(shape, PipelineConfig::default()).unwrap();
        let w = Window::new(-3.0, 3.0, -1.0, 2.0).unwrap();
        let r = p.rasterize(Decider::Oracle, w, 0.5, 1).unwrap();
        let bytes = raster_pgm(&r);
        let header = b"P5\n12 6\n255\n";
        assert_eq!(&bytes[..header.len()], header);
        assert_eq!(bytes.len(), header.len() + 72);
        // first written row is the top one
        assert_eq!(bytes[header.len()], label_byte(r.label(0, 5)));
    }

    #[test]
    fn graph_tables_round_trip() {
        let (shape, _) = build_scenario("square_corners", None, None).unwrap();
        let p = Pipeline::new(shape, PipelineConfig::default()).unwrap();
        let g = GraphFile::from_graph(&p.graph);
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.rays.len(), 4);
        assert_eq!(GraphFile::from_toml_str(&g.to_toml()).unwrap(), g);
    }

    #[test]
    fn svg_is_well_formed_enough() {
        let (shape, _) = build_scenario("square_corners", None, None).unwrap();
        let p = Pipeline::new(shape, PipelineConfig::default()).unwrap();
        let r = p
            .rasterize(Decider::Theorem, p.shape.window(), 0.1, 1)
            .unwrap();
        let s = raster_svg(&r, &p);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert_eq!(s.matches("<text").count(), 4);
        assert!(s.contains("stroke-dasharray"));
    }
}
