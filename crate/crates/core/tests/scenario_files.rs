use std::path::PathBuf;

use medial_recon::hull::convex_hull;
use medial_recon::reconstruction::qualify_hyperplanes;
use medial_recon::scenarios::{build_scenario, scenario, Scenario, SCENARIO_NAMES};

fn shipped(name: &str) -> Scenario {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(format!("{name}.toml"));
    Scenario::from_toml_str(&std::fs::read_to_string(&path).unwrap()).unwrap()
}

#[test]
fn shipped_files_match_the_builders() {
    for name in SCENARIO_NAMES {
        assert_eq!(shipped(name), scenario(name, None, None).unwrap(), "{name}");
    }
}

#[test]
fn shipped_files_build_the_same_samples() {
    for name in SCENARIO_NAMES {
        let (shape, _) = build_scenario(name, None, None).unwrap();
        assert_eq!(
            shipped(name).build().unwrap().samples(),
            shape.samples(),
            "{name}"
        );
    }
}

#[test]
fn rebuilding_is_bit_identical() {
    for name in SCENARIO_NAMES {
        let (a, _) = build_scenario(name, None, None).unwrap();
        let (b, _) = build_scenario(name, None, None).unwrap();
        let bits = |s: &medial_recon::Shape| {
            s.samples()
                .iter()
                .map(|p| (p.x.to_bits(), p.y.to_bits()))
                .collect::<Vec<_>>()
        };
        assert_eq!(bits(&a), bits(&b), "{name}");
    }
}

#[test]
fn expected_qualifying_lines_are_found() {
    for name in SCENARIO_NAMES {
        let (shape, sc) = build_scenario(name, None, None).unwrap();
        let hull = convex_hull(&shape).unwrap();
        let found: Vec<_> = qualify_hyperplanes(&shape, &hull)
            .qualifying()
            .copied()
            .collect();
        assert_eq!(
            found.len(),
            sc.expected.qualifying.len(),
            "{name}: {found:?}"
        );
        for e in &sc.expected.qualifying {
            let want = e.plane().unwrap();
            let hit = found.iter().any(|f| {
                f.normal.dist(want.normal) < 1e-6
                    && (f.offset - want.offset).abs() <= 2.0 * shape.spacing()
            });
            assert!(
                hit,
                "{name}: expected {want:?} ({}) among {found:?}",
                e.source
            );
        }
    }
}

#[test]
fn unknown_names_list_the_valid_ones() {
    let err = scenario("torus", None, None).unwrap_err().to_string();
    for name in SCENARIO_NAMES {
        assert!(err.contains(name), "{err}");
    }
}

#[test]
fn parameterised_names() {
    let (shape, _) = build_scenario("punctured_line(0.25)", None, None).unwrap();
    assert!(shape.samples().iter().all(|p| p.x.abs() >= 0.25));
    assert!(build_scenario("gap_rectangle(0.1, 2)", None, None).is_err());
    assert!(build_scenario("gap_rectangle(0.1", None, None).is_err());
}
