use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quasiorbit"));
    for a in args {
        match a.strip_prefix('@') {
            Some(name) => cmd.arg(fixture(name)),
            None => cmd.arg(a),
        };
    }
    cmd.output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn jordan_model_of_interleaved_subspace() {
    let out = run(&["jordan-model", "--input", "@interleaved.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["restriction"], "(z^2, z)");
    assert_eq!(report["compression"], "(z)");
    assert_eq!(report["dim"], 3);
}

#[test]
fn jordan_model_with_ambient_override_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("models.json");
    let out = run(&[
        "jordan-model",
        "--input",
        "@line_first.json",
        "--ambient",
        "@ambient.json",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(report["restriction"], "(z)");
    assert_eq!(report["compression"], "(z^2, z)");
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["jordan-model", "--input", "@not_invariant.json"]).status.code(), Some(3));
    assert_eq!(run(&["jordan-model", "--input", "@missing.json"]).status.code(), Some(2));
    assert_eq!(run(&["jordan-model", "--input", "@density.json"]).status.code(), Some(2));
    assert_eq!(run(&["density-sweep"]).status.code(), Some(2));
    let out = run(&["density-sweep", "--config", "@density_bad.json"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("(i)"), "{}", stderr(&out));
    let out = run(&["counterexample", "--blocks", "1,1", "--resolution", "2", "--budget", "2"]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn verify_orbit_on_quasisimilar_lines() {
    let out = run(&["verify-orbit", "--input", "@line_first.json", "--input", "@line_second.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["verdict"], "orbit");
    assert_eq!(report["restriction_models_equal"], true);
    for point in report["distance_curve"].as_array().unwrap() {
        assert!(point[1].as_f64().unwrap() <= 1e-10);
    }
}

#[test]
fn verify_orbit_short_circuits_on_unequal_restrictions() {
    let out = run(&["verify-orbit", "--input", "@line_first.json", "--input", "@interleaved.json", "--sweep", "8,12"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["verdict"], "no-orbit");
    assert_eq!(report["restriction_models_equal"], false);
    assert!(report["distance_curve"].as_array().unwrap().is_empty());
}

fn parse_csv(text: &str) -> (String, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines.next().unwrap().to_string();
    let rows = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn density_csv_matches_golden_file() {
    let out = run(&["density-sweep", "--config", "@density.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let golden = std::fs::read_to_string(fixture("density.golden.csv")).unwrap();
    let (header, rows) = parse_csv(&stdout(&out));
    let (golden_header, golden_rows) = parse_csv(&golden);
    assert_eq!(header, "m,residual,bound,sigma_min,intertwine,condition");
    assert_eq!(header, golden_header);
    assert_eq!(rows.len(), golden_rows.len());
    for (row, expected) in rows.iter().zip(&golden_rows) {
        for (x, y) in row.iter().zip(expected) {
            assert!((x - y).abs() <= 1e-9 * y.abs().max(1e-6), "{row:?} vs {expected:?}");
        }
    }
    let residual11 = rows.last().unwrap()[1];
    assert!(residual11 <= 0.05);
    assert_eq!(rows[0][5], 1.0);
    assert!((rows[4][5] - 0.20716).abs() < 1e-4);
}

#[test]
fn zero_target_and_polynomial_warning() {
    let out = run(&["density-sweep", "--config", "@density_zero.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let (_, rows) = parse_csv(&stdout(&out));
    assert!(rows.iter().all(|r| r[1] <= 1e-10));

    let out = run(&["density-sweep", "--config", "@density_polynomial.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(stderr(&out).contains("warning"));
    let (_, rows) = parse_csv(&stdout(&out));
    assert!(rows.windows(2).all(|w| w[1][5] > w[0][5]));
}

#[test]
fn counterexample_witness_and_control() {
    let out = run(&["counterexample", "--resolution", "0"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    let witness = &report["witnesses"][0];
    assert_eq!(witness["m1"], serde_json::json!([["0", "1", "0"]]));
    assert_eq!(witness["m2"], serde_json::json!([["0", "0", "1"]]));
    assert_eq!(witness["decided_by"], "grid");

    let out = run(&["counterexample", "--blocks", "1,1", "--resolution", "2", "--max-witnesses", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["complete"], true);
    assert!(report["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn cordiag_demo_agrees() {
    let out = run(&["cordiag-demo", "--config", "@cordiag.json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = json(&out);
    assert_eq!(report["disagreements"], 0);
    assert_eq!(report["pairs"].as_array().unwrap().len(), 6);
}
