use std::path::Path;

use medial_recon::cli::{run, OUT_ENV};

fn run_in(out: &Path, args: &[&str]) -> i32 {
    let mut argv = vec!["medial-recon".to_string()];
    argv.extend(args.iter().map(|s| s.to_string()));
    argv.push("--out".into());
    argv.push(out.display().to_string());
    run(argv)
}

#[test]
fn list_scenarios_succeeds() {
    assert_eq!(run(["medial-recon", "list-scenarios"]), 0);
}

#[test]
fn bad_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["medial", "--scenario", "torus"]), 2);
    assert_eq!(
        run_in(
            dir.path(),
            &["classify", "--scenario", "disc", "--grid-step=0"]
        ),
        2
    );
    assert_eq!(
        run_in(
            dir.path(),
            &["classify", "--scenario", "disc", "--window", "1,0,0,1"]
        ),
        2
    );
    assert_eq!(run(["medial-recon", "frobnicate"]), 2);
    let missing = dir.path().join("nope.toml");
    assert_eq!(
        run_in(
            dir.path(),
            &["medial", "--shape-file", missing.to_str().unwrap()]
        ),
        2
    );
}

#[test]
fn medial_writes_graph_and_figure() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        run_in(dir.path(), &["medial", "--scenario", "two_points"]),
        0
    );
    let graph = std::fs::read_to_string(dir.path().join("two_points_graph.toml")).unwrap();
    let table = medial_recon::export::GraphFile::from_toml_str(&graph).unwrap();
    assert_eq!(table.rays.len(), 2);
    assert!(dir.path().join("two_points_medial.svg").exists());
}

#[test]
fn classify_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = [
        "classify",
        "--scenario",
        "square_corners",
        "--grid-step",
        "0.05",
    ];
    assert_eq!(run_in(a.path(), &args), 0);
    assert_eq!(
        run_in(b.path(), &[&args[..], &["--workers", "1"]].concat()),
        0
    );
    for name in [
        "square_corners_labels.csv",
        "square_corners_metrics.csv",
        "square_corners_oracle.pgm",
        "square_corners_theorem.pgm",
    ] {
        let x = std::fs::read(a.path().join(name)).unwrap();
        let y = std::fs::read(b.path().join(name)).unwrap();
        assert_eq!(x, y, "{name}");
    }
    let metrics = std::fs::read_to_string(a.path().join("square_corners_metrics.csv")).unwrap();
    assert!(metrics.starts_with(medial_recon::export::METRICS_HEADER));
}

#[test]
fn stability_and_giblin_run() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "stability",
        "--scenario",
        "two_points",
        "--generator",
        "translate",
        "--probes",
        "4",
    ];
    assert_eq!(run_in(dir.path(), &args), 0);
    assert_eq!(
        run_in(dir.path(), &["giblin", "--scenario", "two_points"]),
        0
    );
    let csv = std::fs::read_to_string(dir.path().join("two_points_giblin.csv")).unwrap();
    assert!(csv.starts_with("branch,side,t,x,y"));
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    std::env::set_var(OUT_ENV, dir.path());
    let code = run(["medial-recon", "medial", "--scenario", "disc"]);
    std::env::remove_var(OUT_ENV);
    assert_eq!(code, 0);
    assert!(dir.path().join("disc_graph.toml").exists());
}

#[test]
fn shipped_scenario_files_are_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let file =
        std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/square_corners.toml");
    assert_eq!(
        run_in(
            dir.path(),
            &["medial", "--shape-file", file.to_str().unwrap()]
        ),
        0
    );
    assert!(dir.path().join("square_corners_graph.toml").exists());
}
