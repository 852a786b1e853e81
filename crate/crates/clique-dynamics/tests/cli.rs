//! End-to-end checks of the command-line surface: artifact files, wire
//! formats, and byte-identical reruns.

use std::fs;
use std::path::{Path, PathBuf};

use clap::Parser;
use clique_dynamics::cli::{run, RunConfig};

fn invoke(args: &[&str]) -> i32 {
    let mut full = vec!["clique-dynamics"];
    full.extend_from_slice(args);
    let config = RunConfig::try_parse_from(full).expect("arguments parse");
    run(&config).expect("command runs")
}

fn path_str(path: &Path) -> String {
    path.to_str().unwrap().to_string()
}

#[test]
fn generate_iterate_and_rerun_identically() {
    let dir = tempfile::tempdir().unwrap();
    let torus = dir.path().join("torus.json");
    let csv: PathBuf = dir.path().join("iterate.csv");

    let status = invoke(&["generate", "torus", "--basis", "5", "0", "0", "5", "--output", &path_str(&torus)]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&torus).unwrap()).unwrap();
    assert_eq!(json["vertices"], 25);
    assert_eq!(json["edges"].as_array().unwrap().len(), 75);

    let status = invoke(&["iterate", "--host", &path_str(&torus), "-n", "2", "--output", &path_str(&csv)]);
    assert_eq!(status, 0);
    let first = fs::read(&csv).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.contains("level,n_vertices,n_edges,max_degree,budget_hit"));
    assert!(text.contains("\n1,50,"), "first iterate has fifty vertices: {text}");

    // byte-identical rerun
    invoke(&["iterate", "--host", &path_str(&torus), "-n", "2", "--output", &path_str(&csv)]);
    assert_eq!(fs::read(&csv).unwrap(), first);

    // a tiny budget flags a partial result instead of failing
    let status = invoke(&[
        "iterate",
        "--host",
        &path_str(&torus),
        "-n",
        "2",
        "--vertex-budget",
        "10",
        "--output",
        &path_str(&csv),
    ]);
    assert_eq!(status, 0);
    assert!(fs::read_to_string(&csv).unwrap().contains(",,,,true"));
}

#[test]
fn geoclique_census_and_invariant_reports() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("window.json");
    invoke(&["generate", "window", "--radius", "9", "--output", &path_str(&host)]);

    let report = dir.path().join("geo.json");
    invoke(&[
        "geoclique", "--host", &path_str(&host), "--level", "2", "--margin", "4",
        "--report", &path_str(&report),
    ]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(json["config"]["level"], 2);
    assert!(json["shapes_per_side"]["0"].as_u64().unwrap() > 0);
    assert!(json["shapes_per_side"]["2"].as_u64().unwrap() > 0);
    assert_eq!(json["delta_warning"], true); // windows have a rim

    let census = dir.path().join("census.json");
    invoke(&[
        "census", "--host", &path_str(&host), "--level", "2", "--margin", "4",
        "--output", &path_str(&census),
    ]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&census).unwrap()).unwrap();
    assert!(!json["not26"].as_array().unwrap().is_empty());

    let inv = dir.path().join("invariant.csv");
    invoke(&[
        "invariant-D", "--host", &path_str(&host), "--level", "2", "--margin", "4",
        "--probes", "sample:5", "--seed", "7", "--output", &path_str(&inv),
    ]);
    let text = fs::read_to_string(&inv).unwrap();
    assert!(text.starts_with("# clique-dynamics invariant-D csv v1"));
    assert!(text.lines().count() >= 3);
}

#[test]
fn cover_quotient_and_reduce() {
    let dir = tempfile::tempdir().unwrap();
    let torus = dir.path().join("torus.json");
    invoke(&["generate", "torus", "--basis", "5", "0", "0", "5", "--output", &path_str(&torus)]);

    let out = dir.path().join("cover.json");
    invoke(&["cover", "--host", &path_str(&torus), "--radius", "3", "--output", &path_str(&out)]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["local_isomorphism_on_interior"], true);
    assert_eq!(json["cover"]["vertices"], 37); // the radius-3 lattice ball

    // quotient of K3 by its rotation
    let k3 = dir.path().join("k3.json");
    fs::write(&k3, r#"{"vertices": 3, "edges": [[0,1],[1,2],[0,2]]}"#).unwrap();
    let action = dir.path().join("action.json");
    fs::write(&action, r#"{"generators": [[1,2,0]]}"#).unwrap();
    let out = dir.path().join("quotient.json");
    invoke(&[
        "quotient", "--host", &path_str(&k3), "--action", &path_str(&action),
        "--output", &path_str(&out),
    ]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["quotient"]["vertices"], 1);
    assert_eq!(json["loops_dropped"], 3);

    // reduce a triangle boundary walk
    let walk = dir.path().join("walk.json");
    fs::write(&walk, r#"{"vertices": [0, 1, 6, 0]}"#).unwrap();
    let out = dir.path().join("reduce.json");
    invoke(&[
        "reduce", "--host", &path_str(&torus), "--walk", &path_str(&walk),
        "--budget", "10000", "--output", &path_str(&out),
    ]);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["trivial"], true);
}

#[test]
fn verify_commands_pass_on_a_torus() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    fs::write(&spec, r#"{"basis": [[5, 0], [0, 5]]}"#).unwrap();

    let witness = dir.path().join("witness.json");
    let status = invoke(&[
        "verify-structure", "--torus", &path_str(&spec), "--level", "1",
        "--witness", &path_str(&witness),
    ]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&witness).unwrap()).unwrap();
    assert_eq!(json["bijection"].as_array().unwrap().len(), 50);

    let out = dir.path().join("verify-c.json");
    let status = invoke(&["verify-C", "--torus", &path_str(&spec), "--level", "2", "--output", &path_str(&out)]);
    assert_eq!(status, 0);
    let json: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(json["part_sizes_ok"], true);
}

#[test]
fn invalid_inputs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{").unwrap();
    let config =
        RunConfig::try_parse_from(["clique-dynamics", "iterate", "--host", &path_str(&bad), "-n", "1", "--output", "/dev/null"]).unwrap();
    assert!(run(&config).is_err());

    let config = RunConfig::try_parse_from([
        "clique-dynamics", "generate", "torus", "--basis", "2", "0", "0", "2",
        "--output", &path_str(&dir.path().join("t.json")),
    ])
    .unwrap();
    assert!(run(&config).is_err()); // lattice norm below four
}
