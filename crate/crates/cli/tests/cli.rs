//! Black-box behavior of the command-line interface: exit codes, file
//! formats, and fixture round-trips.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oedecomp"))
}

fn fixture(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    p.to_str().unwrap().to_string()
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = bin().args(["spectrum", "--definitely-not-a-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    let out = bin().arg("frobnicate").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_cleanly() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify-theorem1"));
}

#[test]
fn metrics_on_reference_fixture() {
    let out = bin()
        .args(["metrics", "--state", &fixture("state_4d.json"), "--cg", &fixture("coarse_2x2.json")])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["o_c"].as_f64().unwrap() - 0.45121).abs() < 5e-5);
    assert!((v["eta"].as_f64().unwrap() - 0.58174).abs() < 5e-5);
}

#[test]
fn metrics_on_bell_fixture() {
    let out = bin()
        .args(["metrics", "--state", &fixture("bell_state.json"), "--cg", &fixture("coarse_2x2.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((v["eta"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert!((v["o_c"].as_f64().unwrap() - 2.0).abs() < 1e-9);
}

#[test]
fn metrics_on_block_uniform_fixture_is_all_zero() {
    let out = bin()
        .args(["metrics", "--state", &fixture("block_uniform.json"), "--cg", &fixture("coarse_2x2.json")])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for key in ["c_rel", "d_rel", "o_c", "eta"] {
        assert!(v[key].as_f64().unwrap().abs() < 1e-9, "{key}");
    }
}

#[test]
fn metrics_rejects_invalid_state() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    // trace is 2, not 1
    std::fs::write(&bad, r#"{"dim":2,"re":[1.0,0.0,0.0,1.0],"im":[0.0,0.0,0.0,0.0]}"#).unwrap();
    let out = bin()
        .args(["metrics", "--state", bad.to_str().unwrap(), "--cg", &fixture("coarse_2x2.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn metrics_rejects_missing_file() {
    let out = bin()
        .args(["metrics", "--state", "/nonexistent.json", "--cg", &fixture("coarse_2x2.json")])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_rejects_out_of_range_epsilon() {
    let out = bin().args(["verify-theorem1", "--epsilon", "1.5"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn scan_output_is_deterministic_with_expected_shape() {
    let a = bin().args(["scan-epsilon"]).output().unwrap();
    let b = bin().args(["scan-epsilon"]).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "epsilon,c_rel,d_rel,o_c,eta,d_c_rel,d_d_rel,d_o_c,conversion_ratio"
    );
    assert_eq!(lines.count(), 101);
}

#[test]
fn scan_accepts_fixture_inputs() {
    let out = bin()
        .args([
            "scan-epsilon",
            "--points",
            "3",
            "--state",
            &fixture("bell_state.json"),
            "--cg",
            &fixture("coarse_2x2.json"),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 4);
}

#[test]
fn spectrum_rejects_oversized_chain() {
    let out = bin().args(["spectrum", "--n-qubits", "7"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn spectrum_reports_default_windows() {
    let out = bin().arg("spectrum").output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eigenvalues"].as_array().unwrap().len(), 16);
    assert_eq!(v["windows"]["low"], serde_json::json!([0, 1, 2]));
    assert_eq!(v["windows"]["high"], serde_json::json!([13, 14, 15]));
}

#[test]
fn run_vqa_flag_overrides_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"seed": 3, "total_iters": 40, "phase1_end": 10, "phase2_end": 20}"#)
        .unwrap();
    let trace = dir.path().join("t.csv");
    let summary = dir.path().join("s.json");
    let out = bin()
        .args([
            "run-vqa",
            "--config",
            cfg.to_str().unwrap(),
            "--seed",
            "7",
            "--window",
            "21:39",
            "--out",
            trace.to_str().unwrap(),
            "--summary",
            summary.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["seed"], serde_json::json!(7));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.lines().count(), 41); // header + 40 rows
}

#[test]
fn run_vqa_rejects_bad_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"phase1_end": 90, "phase2_end": 60}"#).unwrap();
    let out = bin()
        .args(["run-vqa", "--config", cfg.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn ensemble_requires_a_source() {
    let out = bin().arg("ensemble").output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn ensemble_round_trips_through_trace_files() {
    let dir = tempfile::tempdir().unwrap();
    let traces = dir.path().join("traces");
    let report1 = dir.path().join("r1.json");
    let report2 = dir.path().join("r2.json");
    let out = bin()
        .args([
            "ensemble",
            "--seeds",
            "0:3",
            "--traces-out",
            traces.to_str().unwrap(),
            "--report",
            report1.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin()
        .args([
            "ensemble",
            "--traces",
            traces.to_str().unwrap(),
            "--report",
            report2.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    // trace files carry 12 significant digits, so statistics recomputed
    // from them agree to that precision rather than byte-for-byte
    let a: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report1).unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report2).unwrap()).unwrap();
    for key in ["mean_r", "sd_r", "ci_low", "ci_high", "mean_p"] {
        let (x, y) = (a[key].as_f64().unwrap(), b[key].as_f64().unwrap());
        assert!((x - y).abs() < 1e-9, "{key}: {x} vs {y}");
    }
    assert_eq!(a["run_count"], b["run_count"]);
}
