use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

use rif_core::io;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn rif(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rif")).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn rif_json(args: &[&str]) -> (i32, Value) {
    let (code, stdout, stderr) = rif(args);
    let value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{e}: {stdout}{stderr}"));
    (code, value)
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_inner_reports_and_exit_codes() {
    let (code, report) = rif_json(&["check-inner", path_str(&fixture("fixture_a.json"))]);
    assert_eq!(code, 0);
    assert_eq!(report["verdict"], "inner");
    assert!(report["defect"].as_f64().unwrap() < 1e-14);

    let (code, report) = rif_json(&["check-inner", path_str(&fixture("half_z.json"))]);
    assert_eq!(code, 1);
    assert!((report["defect"].as_f64().unwrap() - 0.75).abs() < 1e-12);
    assert_eq!(report["verdict"], "not-inner");

    assert_eq!(rif(&["check-inner", path_str(&fixture("malformed.json"))]).0, 2);
    assert_eq!(rif(&["check-inner", path_str(&fixture("pole_in_disk.json"))]).0, 3);
    assert_eq!(rif(&["check-inner", "/nonexistent/input.json"]).0, 2);
}

#[test]
fn config_validation() {
    let a = fixture("fixture_a.json");
    assert_eq!(rif(&["check-inner", path_str(&a), "--grid", "4"]).0, 2);
    assert_eq!(rif(&["connect", path_str(&a), "--t-samples", "1"]).0, 2);
    assert_eq!(rif(&["check-inner", path_str(&a), "--tol", "nonsense=1e-3"]).0, 2);
    assert_eq!(rif(&["check-inner", path_str(&a), "--tol", "inner=-1"]).0, 2);
    // a loose enough tolerance accepts the 0.75 defect
    assert_eq!(rif(&["check-inner", path_str(&fixture("half_z.json")), "--tol", "inner=0.8"]).0, 0);
}

#[test]
fn connect_writes_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let (code, manifest) = rif_json(&[
        "connect",
        path_str(&fixture("fixture_a.json")),
        "--grid",
        "64",
        "--t-samples",
        "9",
        "--out",
        path_str(dir.path()),
    ]);
    assert_eq!(code, 0);
    let kinds: Vec<&str> = manifest["segments"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["constant", "deform-F", "column-deform"]);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(written["segments"], manifest["segments"]);

    let mut reader = csv::Reader::from_path(dir.path().join("samples.csv")).unwrap();
    assert_eq!(reader.headers().unwrap(), vec!["t", "theta", "row", "col", "re", "im"]);
    assert_eq!(reader.records().count(), 9 * 64 * 2);
}

#[test]
fn connect_fixture_b_and_square_rejection() {
    let (code, manifest) = rif_json(&["connect", path_str(&fixture("fixture_b.json")), "--grid", "128"]);
    assert_eq!(code, 0);
    let segments = manifest["segments"].as_array().unwrap();
    assert_eq!(segments.last().unwrap()["kind"], "constant");

    let (code, manifest) = rif_json(&["connect", path_str(&fixture("flipped_pin.json")), "--grid", "64"]);
    assert_eq!(code, 0);
    let kinds: Vec<&str> = manifest["segments"].as_array().unwrap().iter().map(|s| s["kind"].as_str().unwrap()).collect();
    assert_eq!(kinds, ["unitary-left", "constant"]);

    let (code, _, stderr) = rif(&["connect", path_str(&fixture("z_identity2.json"))]);
    assert_eq!(code, 4);
    assert!(stderr.contains("not path connected"));
    assert_eq!(rif(&["connect", path_str(&fixture("half_z.json"))]).0, 1);
}

#[test]
fn factor_commands() {
    let (code, doc) = rif_json(&["factor", "--which", "potapov", path_str(&fixture("z_identity2.json"))]);
    assert_eq!(code, 0);
    assert_eq!(doc["factorization"]["factors"].as_array().unwrap().len(), 2);
    assert!(doc["verification"]["reconstruction_residual"].as_f64().unwrap() <= 1e-10);
    let c = &doc["factorization"]["constant_unitary"];
    assert_eq!(c[0][0][0].as_f64().unwrap(), 1.0);
    assert_eq!(c[0][1][0].as_f64().unwrap(), 0.0);

    let (code, doc) = rif_json(&["factor", "--which", "fejer-riesz", path_str(&fixture("trig_2_plus_2cos.json"))]);
    assert_eq!(code, 0);
    let g = &doc["factor"]["coefficients"];
    assert!((g[0][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert!((g[1][0][0][0].as_f64().unwrap() - 1.0).abs() < 1e-6);
    assert_eq!(doc["verification"]["boundary_degenerate"], true);

    let dir = tempfile::tempdir().unwrap();
    let x = fixture("fixture_b_x.json");
    let (code, doc) = rif_json(&["factor", "--which", "inner-outer", path_str(&x), "--out", path_str(dir.path())]);
    assert_eq!(code, 0);
    assert!(doc["verification"]["interior_zeros"].as_array().unwrap().is_empty());
    let outer = io::parse_rational_matrix::<f64>(&std::fs::read_to_string(dir.path().join("outer.json")).unwrap()).unwrap();
    let inner = io::parse_rational_matrix::<f64>(&std::fs::read_to_string(dir.path().join("inner.json")).unwrap()).unwrap();
    let source = io::parse_rational_matrix::<f64>(&std::fs::read_to_string(&x).unwrap()).unwrap();
    assert!(outer.grid_distance(&source, 256) < 1e-12);
    assert!(inner.grid_distance(&rif_core::double::RationalMatrixFunction::identity(1), 256) < 1e-12);

    assert_eq!(rif(&["factor", "--which", "inner-outer", path_str(&fixture("fixture_a.json"))]).0, 2);
    assert_eq!(rif(&["factor", "--which", "fejer-riesz", path_str(&fixture("fixture_a.json"))]).0, 2);
}

#[test]
fn winding_command() {
    for (name, expected) in [("z_identity3.json", "3"), ("identity3.json", "0"), ("diag_blaschke_z.json", "2")] {
        let (code, stdout, _) = rif(&["winding", path_str(&fixture(name))]);
        assert_eq!(code, 0);
        assert_eq!(stdout.trim(), expected);
    }
    assert_eq!(rif(&["winding", path_str(&fixture("fixture_a.json"))]).0, 2);

    let dir = tempfile::tempdir().unwrap();
    let singular = dir.path().join("singular.json");
    std::fs::write(
        &singular,
        r#"{"m": 1, "n": 1, "entries": [[{"num": [[1, 0], [-1, 0]], "den": [[1, 0]]}]]}"#,
    )
    .unwrap();
    assert_eq!(rif(&["winding", path_str(&singular), "--grid", "64"]).0, 6);
}

#[test]
fn fixtures_round_trip_through_json() {
    for entry in std::fs::read_dir(fixture("")).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        if let Ok(w) = io::parse_rational_matrix::<f64>(&text) {
            let again = io::parse_rational_matrix::<f64>(&io::rational_matrix_to_string(&w)).unwrap();
            assert_eq!(w, again, "{}", path.display());
        } else if let Ok(q) = io::parse_trig::<f64>(&text) {
            assert_eq!(io::parse_trig::<f64>(&io::trig_to_string(&q)).unwrap(), q);
        }
    }
}

#[test]
fn commands_are_deterministic() {
    let args = ["self-test", "--seed", "11", "--cases", "4"];
    let (code, first, _) = rif(&args);
    assert_eq!(code, 0, "{first}");
    assert_eq!(rif(&args).1, first);
    let b = fixture("fixture_b.json");
    let a = ["connect", path_str(&b), "--grid", "64", "--t-samples", "5"];
    assert_eq!(rif(&a).1, rif(&a).1);
}
