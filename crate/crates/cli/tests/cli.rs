//! End-to-end runs of the binary: config parsing, artifacts, exit codes,
//! and byte-level reproducibility.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pextremal"))
}

fn write_config(dir: &Path, name: &str, contents: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn eval_grid_torus_zero_at_one_one() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "eval.json",
        r#"{
            "command": "eval-grid",
            "body": {"kind": "polytope", "vertices": [[1.0, 0.0], [0.0, 1.0]]},
            "sets": [{"kind": "circle"}, {"kind": "circle"}],
            "grid": {"axes": [
                {"x": [0.0, 2.0], "y": [0.0, 2.0], "nx": 3, "ny": 3},
                {"x": [0.0, 2.0], "y": [0.0, 2.0], "nx": 3, "ny": 3}
            ]}
        }"#,
    );
    let out = dir.path().join("grid.csv");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out)
        .args(["--format", "csv"])
        .status()
        .unwrap();
    assert!(status.success());
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# schema pextremal/1"));
    assert!(text.contains("# normalization"));
    let header = text
        .lines()
        .find(|l| !l.starts_with('#'))
        .unwrap();
    assert_eq!(header, "re_z1,im_z1,re_z2,im_z2,p_extremal,indicator_h,potential_u");
    // the row at z = (1+0i, 1+0i): both factors on their circles
    let row = text
        .lines()
        .find(|l| l.starts_with("1.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0,0.0000000000000000e0"))
        .expect("grid includes the point (1,1)");
    let fields: Vec<&str> = row.split(',').collect();
    let p_extremal: f64 = fields[4].parse().unwrap();
    let indicator: f64 = fields[5].parse().unwrap();
    assert_eq!(p_extremal, 0.0);
    assert_eq!(indicator, 0.0);
}

#[test]
fn check_product_suite_passes_and_reproduces() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "check.json",
        r#"{"command": "check", "suite": "product", "seed": 5}"#,
    );
    let out1 = dir.path().join("report1.json");
    let out2 = dir.path().join("report2.json");
    for out in [&out1, &out2] {
        let status = bin()
            .args(["--config"])
            .arg(&config)
            .args(["--out"])
            .arg(out)
            .status()
            .unwrap();
        assert_eq!(status.code(), Some(0));
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "same config and seed must be byte-identical");

    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(report["schema"], "pextremal/1");
    assert_eq!(report["suite"], "product");
    assert_eq!(report["passed"], true);
    let names: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"closed-form-consistency"));

    // a different seed changes the bytes
    let out3 = dir.path().join("report3.json");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out3)
        .args(["--seed", "6"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    assert_ne!(std::fs::read(&out3).unwrap(), a);
}

#[test]
fn check_failure_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    // an impossible tolerance forces a check failure -> exit 1
    let config = write_config(
        dir.path(),
        "strict.json",
        r#"{
            "command": "check",
            "suite": "product",
            "tolerances": {"growth-gap-bounded": 1e-30}
        }"#,
    );
    let out = dir.path().join("strict.json.out");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(1));
}

#[test]
fn malformed_config_exits_two_with_line_info() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(dir.path(), "bad.json", "{\n  \"command\": \"eval-grid\",\n  oops\n}");
    let output = bin().args(["--config"]).arg(&config).output().unwrap();
    assert_eq!(output.status.code(), Some(2));
    let err = String::from_utf8_lossy(&output.stderr);
    assert!(err.contains("line 3"), "stderr: {err}");

    // valid JSON but missing required pieces is also a config error
    let incomplete = write_config(dir.path(), "inc.json", r#"{"command": "eval-grid"}"#);
    let output = bin().args(["--config"]).arg(&incomplete).output().unwrap();
    assert_eq!(output.status.code(), Some(2));

    // unknown command override
    let ok = write_config(dir.path(), "ok.json", r#"{"command": "check", "suite": "product"}"#);
    let output = bin()
        .arg("frobnicate")
        .args(["--config"])
        .arg(&ok)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn ma_grid_circle_equilibrium_mass() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "ma.json",
        r#"{
            "command": "ma-grid",
            "sets": [{"kind": "circle"}],
            "grid": {"axes": [{"x": [-1.6, 1.6], "y": [-1.6, 1.6], "nx": 129, "ny": 129}]}
        }"#,
    );
    let out = dir.path().join("mass.json");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let total = doc["report"]["total"].as_f64().unwrap();
    let two_pi = std::f64::consts::TAU;
    assert!((total - two_pi).abs() < 0.02 * two_pi, "total {total}");
    assert!(doc["report"]["normalization"]
        .as_str()
        .unwrap()
        .contains("2*pi*delta_0"));
}

#[test]
fn explore_support_writes_refinement_levels() {
    let dir = tempfile::tempdir().unwrap();
    // deliberately coarse so the test stays quick; refinement halves the
    // step and the smoothing together
    let config = write_config(
        dir.path(),
        "explore.json",
        r#"{
            "command": "explore-support",
            "q": 2.0,
            "sets": [{"kind": "circle"}, {"kind": "circle"}],
            "grid": {"axes": [
                {"x": [-3.0, 3.0], "y": [-3.0, 3.0], "nx": 16, "ny": 16},
                {"x": [-3.0, 3.0], "y": [-3.0, 3.0], "nx": 16, "ny": 16}
            ]},
            "smoothing": 0.8,
            "refine": 2
        }"#,
    );
    let out = dir.path().join("heat.json");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    let level0 = dir.path().join("heat_level0.csv");
    let level1 = dir.path().join("heat_level1.csv");
    let summary = dir.path().join("heat_summary.json");
    assert!(level0.exists() && level1.exists() && summary.exists());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(doc["levels"].as_array().unwrap().len(), 2);
    assert!(doc["note"].as_str().unwrap().contains("exploratory"));
    // exit code mirrors the Cauchy verdict recorded in the summary
    let expected = if doc["cauchy_ok"].as_bool().unwrap() { 0 } else { 1 };
    assert_eq!(status.code(), Some(expected));
    let heat = std::fs::read_to_string(&level0).unwrap();
    assert!(heat.lines().any(|l| l == "x,y,mass"));
}

#[test]
fn approx_body_emits_vertices_and_gap_curve() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "approx.json",
        r#"{
            "command": "approx-body",
            "body": {"kind": "lq", "d": 2, "q": 2.0},
            "approx_level": 8,
            "refine": 3
        }"#,
    );
    let out = dir.path().join("approx.json.out");
    let status = bin()
        .args(["--config"])
        .arg(&config)
        .args(["--out"])
        .arg(&out)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let levels = doc["levels"].as_array().unwrap();
    assert_eq!(levels.len(), 3);
    let gaps: Vec<f64> = levels.iter().map(|l| l["sup_gap"].as_f64().unwrap()).collect();
    assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    assert!(levels[0]["vertices"].as_array().unwrap().len() >= 9);
    let curve = std::fs::read_to_string(dir.path().join("approx.json_gaps.csv")).unwrap();
    assert!(curve.lines().any(|l| l.starts_with("8,")));

    // "inf" exponent parses
    let config_inf = write_config(
        dir.path(),
        "inf.json",
        r#"{
            "command": "approx-body",
            "body": {"kind": "lq", "d": 2, "q": "inf"},
            "approx_level": 4,
            "refine": 1
        }"#,
    );
    let status = bin()
        .args(["--config"])
        .arg(&config_inf)
        .args(["--out"])
        .arg(dir.path().join("inf.out.json"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
}
