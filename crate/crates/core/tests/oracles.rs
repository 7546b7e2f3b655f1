//! Checks against closed forms derived independently of the library.

use medial_recon::reconstruction::{Pipeline, PipelineConfig};
use medial_recon::scenarios::{build_scenario, lambert_w0, log_tangency_abscissa, quoted_xi};
use medial_recon::stability::{liminf_inclusion_check, Generator, ShapeFamily};
use medial_recon::{Point, Window};

fn pipeline(name: &str) -> Pipeline {
    let (shape, _) = build_scenario(name, None, None).unwrap();
    Pipeline::new(shape, PipelineConfig::default()).unwrap()
}

/// `p` is in some `B((0,t), sqrt(1+t²))` iff `x² + y² - 2yt < 1` for some t.
fn two_point_closed_form(p: Point) -> bool {
    p.y != 0.0 || p.x.abs() < 1.0
}

#[test]
fn two_point_oracle_matches_closed_form() {
    let p = pipeline("two_points");
    for i in 0..61 {
        for j in 0..61 {
            let q = Point::new(-3.0 + 0.1 * i as f64 + 0.013, -3.0 + 0.1 * j as f64);
            if q.y.abs() > 1e-12 && q.y.abs() < 0.02 {
                continue;
            }
            if (q.x.abs() - 1.0).abs() < 1e-9 && q.y == 0.0 {
                continue;
            }
            assert_eq!(p.oracle(q), two_point_closed_form(q), "{q}");
        }
    }
}

#[test]
fn ellipse_interior_axis_spans_the_evolute_cusps() {
    // cusps of the evolute of x²/a² + y²/b² = 1 on the major axis: ±(a - b²/a)
    let (a, b) = (2.0, 1.0);
    let cusp = a - b * b / a;
    let p = pipeline("ellipse");
    let xs: Vec<f64> = p.graph.vertices.iter().map(|v| v.position.x).collect();
    assert!(p.graph.vertices.iter().all(|v| v.position.y.abs() < 1e-6));
    let (lo, hi) = xs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| {
            (l.min(*x), h.max(*x))
        });
    assert!(hi <= cusp + 1e-6 && lo >= -cusp - 1e-6, "{lo} {hi}");
    assert!(hi > cusp - 0.05 && lo < -cusp + 0.05, "{lo} {hi}");
}

#[test]
fn lambert_w_residuals() {
    for k in 0..200 {
        let z = -(-1.0f64).exp() + 1e-6 + 0.05 * k as f64;
        let w = lambert_w0(z).unwrap();
        assert!((w * w.exp() - z).abs() < 1e-12 * z.abs().max(1.0), "{z}");
    }
    // the omega constant
    assert!((lambert_w0(1.0).unwrap() - 0.567_143_290_409_784).abs() < 1e-12);
    assert!((lambert_w0(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-12);
    assert!(lambert_w0(-1.0).is_err());
}

#[test]
fn log_tangent_line_touches_the_graph() {
    let x0 = log_tangency_abscissa();
    // the line through (-1, 0) with slope 1/x0 meets ln at x0 with equal slope
    assert!((x0.ln() - (x0 + 1.0) / x0).abs() < 1e-12);
    for k in 1..400 {
        let x = 0.05 * k as f64;
        assert!(x.ln() <= (x + 1.0) / x0 + 1e-12, "{x}");
    }
    // e^(W(1)+1) fails the same tangency condition
    let xi = quoted_xi();
    assert!((xi.ln() - (xi + 1.0) / xi).abs() > 0.3);
}

#[test]
fn translated_medial_axis_distances() {
    // the corners' medial axis is the union of the coordinate axes
    let (shape, _) = build_scenario("square_corners", None, None).unwrap();
    let v = Point::new(0.6, 0.8);
    let ladder = vec![0.0, 0.05, 0.1, 0.2];
    let family = ShapeFamily::new(
        &shape,
        Generator::Translate { direction: v },
        ladder.clone(),
    )
    .unwrap();
    let pipes = family.pipelines(PipelineConfig::default()).unwrap();
    let graphs: Vec<_> = pipes.iter().map(|p| &p.graph).collect();
    let probes = [Point::new(0.2, 0.0), Point::new(0.0, -0.3)];
    let w = Window::new(-1.0, 1.0, -1.0, 1.0).unwrap();
    let report = liminf_inclusion_check(&family, &graphs, &probes, w, 0.01).unwrap();
    for (k, t) in ladder.iter().enumerate() {
        let (sx, sy) = (v.x * t, v.y * t);
        let want = |p: Point| (p.x - sx).abs().min((p.y - sy).abs());
        for (i, p) in probes.iter().enumerate() {
            assert!(
                (report.distances[i][k] - want(*p)).abs() < 1e-9,
                "t={t} {p}"
            );
        }
    }
    assert!(report.all_trend_to_zero());
}

#[test]
fn punctured_line_reconstructs_everything_off_the_line() {
    let p = pipeline("punctured_line");
    for i in 0..30 {
        for j in 0..30 {
            let q = Point::new(-3.0 + 0.2 * i as f64 + 0.01, -3.0 + 0.2 * j as f64 + 0.01);
            assert!(p.oracle(q), "{q}");
        }
    }
    let line = pipeline("line");
    assert!(line.graph.is_empty());
    assert!(!line.oracle(Point::new(0.3, 1.0)));
}
