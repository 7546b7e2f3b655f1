use medial_recon::hull::{convex_hull, HullPosition};
use medial_recon::medial::{lambda_prune, voronoi_medial_axis};
use medial_recon::reconstruction::{lambda_reconstructible, reconstructible_oracle};
use medial_recon::stability::one_sided_distance;
use medial_recon::{Point, Shape, Window};
use proptest::prelude::*;

fn win() -> Window {
    Window::new(-2.0, 2.0, -2.0, 2.0).unwrap()
}

fn point() -> impl Strategy<Value = Point> {
    (-1.5f64..1.5, -1.5f64..1.5).prop_map(|(x, y)| Point::new(x, y))
}

fn cloud(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(point(), n).prop_filter("distinct", |v| {
        v.iter()
            .enumerate()
            .all(|(i, a)| v[..i].iter().all(|b| a.dist(*b) > 1e-3))
    })
}

fn shape(pts: Vec<Point>) -> Shape {
    Shape::from_samples(pts, win(), 0.1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn one_sided_distance_is_zero_on_itself_and_subadditive(a in cloud(1..20), b in cloud(1..20), c in cloud(1..20)) {
        prop_assert_eq!(one_sided_distance(&a, &a).unwrap(), 0.0);
        let ab = one_sided_distance(&a, &b).unwrap();
        let bc = one_sided_distance(&b, &c).unwrap();
        let ac = one_sided_distance(&a, &c).unwrap();
        prop_assert!(ac <= ab + bc + 1e-12);
    }

    #[test]
    fn hull_contains_every_sample(pts in cloud(3..30)) {
        let s = shape(pts);
        let hull = convex_hull(&s).unwrap();
        for p in s.samples() {
            prop_assert_ne!(hull.contains(*p, 1e-9), HullPosition::Outside);
        }
    }

    #[test]
    fn lambda_pruning_is_nested(pts in cloud(3..25), l1 in 0.0f64..1.0, dl in 0.0f64..1.0) {
        let g = voronoi_medial_axis(&shape(pts)).unwrap();
        let small = lambda_prune(&g, l1).unwrap();
        let large = lambda_prune(&g, l1 + dl).unwrap();
        prop_assert!(large.vertices.len() <= small.vertices.len());
        prop_assert!(large.edges.len() <= small.edges.len());
        prop_assert!(large.rays.len() <= small.rays.len());
        for v in &large.vertices {
            prop_assert!(small.vertices.iter().any(|w| w.position == v.position));
        }
    }

    #[test]
    fn lambda_reconstruction_shrinks(pts in cloud(3..15), q in point(), l1 in 0.0f64..0.5, dl in 0.0f64..0.5) {
        let g = voronoi_medial_axis(&shape(pts)).unwrap();
        let r_max = 100.0 * win().diagonal();
        if lambda_reconstructible(q, &g, l1 + dl, r_max).unwrap() {
            prop_assert!(lambda_reconstructible(q, &g, l1, r_max).unwrap());
        }
        prop_assert_eq!(lambda_reconstructible(q, &g, 0.0, r_max).unwrap(), reconstructible_oracle(q, &g, r_max));
    }

    #[test]
    fn medial_axis_is_translation_equivariant(pts in cloud(3..20), vx in -0.4f64..0.4, vy in -0.4f64..0.4) {
        let v = Point::new(vx, vy);
        let s = shape(pts);
        let g = voronoi_medial_axis(&s).unwrap();
        let t = voronoi_medial_axis(&s.translated(v).unwrap()).unwrap();
        prop_assert_eq!(g.vertices.len(), t.vertices.len());
        prop_assert_eq!(g.rays.len(), t.rays.len());
        for a in &g.vertices {
            let moved = a.position + v;
            let near = t.vertices.iter().map(|b| b.position.dist(moved)).fold(f64::INFINITY, f64::min);
            prop_assert!(near < 1e-6 * (1.0 + a.position.norm()), "{near}");
        }
    }
}
