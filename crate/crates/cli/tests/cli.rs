use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use qj_cli::FunctionSpec;
use serde_json::Value;
use tempfile::TempDir;

const SPHERE: &str = r#"{"kind": "slice_preserving_factored", "sphere_factors": [{"q": [0, 1, 0, 0], "mult": 1}]}"#;
const PQL: &str = r#"{"kind": "pql", "q": [[0, 1, 0, 0], [0, 0, 1, 0]], "m": [1, 1]}"#;

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn qj(spec: &Path, args: &[&str]) -> Output {
    qj_env(spec, args, None)
}

fn qj_env(spec: &Path, args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qj"));
    cmd.arg(args[0]).arg(spec).args(&args[1..]);
    match threads {
        Some(t) => cmd.env("QJ_THREADS", t),
        None => cmd.env_remove("QJ_THREADS"),
    };
    cmd.output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn jensen_on_a_sphere_zero_is_within_tolerance() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", SPHERE);
    let out = qj(&spec, &["jensen", "--rho", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["within_tolerance"], true);
    assert!(v["residual"].as_f64().unwrap() < 1e-4);
}

#[test]
fn output_is_deterministic_across_runs_and_thread_counts() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", PQL);
    let args = ["jensen", "--rho", "2", "--grid", "16,16,32", "--format", "json"];
    let a = qj_env(&spec, &args, Some("1"));
    let b = qj_env(&spec, &args, Some("4"));
    let c = qj(&spec, &args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn spec_echo_round_trips() {
    let dir = TempDir::new().unwrap();
    let mixed = r#"{"kind": "mixed", "parts": [
        {"kind": "pql", "a": [[1, 0, 0, 0], [0, 0, 0, 1], [2, 0, 0, 0]], "q": [[0, 0.5, 0, 0], [0.1, 0, 0.2, 0]], "m": [1, -1]},
        {"kind": "slice_preserving_factored", "monomial_power": 1, "real_factors": [{"r": 0.3, "mult": 2}], "tail": [1, 0.1]}
    ]}"#;
    for (name, text) in [("s.json", SPHERE), ("p.json", PQL), ("m.json", mixed)] {
        let spec = write(&dir, name, text);
        let out = qj(&spec, &["eval", "--at", "0.4,0.2,0,0.1", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let echoed: FunctionSpec = serde_json::from_value(json(&out)["spec"].clone()).unwrap();
        assert_eq!(echoed, FunctionSpec::parse(text).unwrap(), "{name}");
    }
}

#[test]
fn unknown_field_reports_its_line() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", "{\n  \"kind\": \"pql\",\n  \"q\": [],\n  \"bogus\": 1,\n  \"m\": []\n}\n");
    let out = qj(&spec, &["eval"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:4:") && err.contains("bogus"), "{err}");

    let out = qj(&spec, &["eval", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "schema");
    assert_eq!(v["error"]["line"], 4);
}

#[test]
fn syntax_error_reports_line_and_column() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.json", "{\n  \"kind\": \"pql\" \"q\": []\n}\n");
    let out = qj(&spec, &["eval", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["line"], 2);
    assert!(v["error"]["column"].as_u64().is_some());
}

#[test]
fn input_errors_exit_one() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", SPHERE);
    let cases: [&[&str]; 6] = [
        &["jensen"],
        &["bounds", "--r", "1"],
        &["bogus-command"],
        &["riesz", "--eps-list", "0.1,0.2"],
        &["jensen", "--rho", "2", "--grid", "4,4"],
        &["blaschke-verify"],
    ];
    for args in cases {
        assert_eq!(qj(&spec, args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(qj(&dir.path().join("missing.json"), &["eval"]).status.code(), Some(1));
    let bad = write(&dir, "b.json", r#"{"kind": "blaschke_punctual", "a": [2, 0, 0, 0], "rho": 1}"#);
    assert_eq!(qj(&bad, &["blaschke-verify"]).status.code(), Some(1));
}

#[test]
fn invalid_thread_count_exits_one() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", SPHERE);
    for t in ["0", "lots"] {
        let out = qj_env(&spec, &["jensen", "--rho", "2"], Some(t));
        assert_eq!(out.status.code(), Some(1), "QJ_THREADS={t}");
    }
}

#[test]
fn riesz_point_masses_breach_the_tolerance() {
    // the measured point constant is -8 pi^2, so the predicted pairing is off by pi^2/6 - 1
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", PQL);
    let out = qj(&spec, &["riesz", "--center", "0,1,0,0", "--radius", "0.5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let r = &json(&out)["result"]["report"];
    let pi2 = std::f64::consts::PI.powi(2);
    assert!((r["pairing"].as_f64().unwrap() - pi2 / 6.0).abs() < 1e-6);
    assert!((r["point_constant"].as_f64().unwrap() + 8.0 * pi2).abs() < 1e-4);
}

#[test]
fn riesz_mollifier_table_is_reported() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", PQL);
    let out = qj(&spec, &["riesz", "--radius", "0.5", "--eps-list", "0.2,0.1,0.05", "--format", "json"]);
    assert_ne!(out.status.code(), Some(1));
    let rows = json(&out)["result"]["mollifier"]["rows"].as_array().unwrap().clone();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let full = row["full_space"].as_f64().unwrap();
        assert!((full + 16.0 * std::f64::consts::PI.powi(2)).abs() < 1e-6, "{full}");
    }
}

#[test]
fn blaschke_verify_passes_for_both_kinds() {
    let dir = TempDir::new().unwrap();
    let cases = [
        (r#"{"kind": "blaschke_spherical", "a": [0.1, 0.3, 0, 0], "rho": 1}"#, "4"),
        (r#"{"kind": "blaschke_punctual", "a": [0.2, 0, 0.4, 0], "rho": 1.5}"#, "6"),
    ];
    for (i, (text, r)) in cases.iter().enumerate() {
        let spec = write(&dir, &format!("b{i}.json"), text);
        let out = qj(&spec, &["blaschke-verify", "--r", r, "--format", "json"]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let v = json(&out);
        assert!(v["result"]["max_boundary_defect"].as_f64().unwrap() < 1e-12);
    }
}

#[test]
fn bounds_hold_for_a_sphere_zero() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", SPHERE);
    let out = qj(&spec, &["bounds", "--r", "1.5", "--R", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["zero_count"]["holds"], true);
    assert_eq!(v["result"]["zero_free"]["consistent"], true);
}

#[test]
fn sphere_mean_matches_the_closed_form() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", PQL);
    let out = qj(&spec, &["sphere-mean", "--rho", "2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["closed_form_source"], "pql");
}

#[test]
fn eval_reports_log_modulus_at_zeros_as_null() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", PQL);
    let out = qj(&spec, &["eval", "--at", "0.5,0,0,0", "--at", "0,1,0,0", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let points = json(&out)["result"]["points"].clone();
    assert!((points[0]["log_abs"].as_f64().unwrap() - 1.25f64.sqrt().ln() * 2.0).abs() < 1e-12);
    assert!(points[1]["log_abs"].is_null());
}

#[test]
fn text_format_is_a_key_value_table() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "s.json", SPHERE);
    let out = qj(&spec, &["jensen", "--rho", "2", "--grid", "16,16,32"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("command"));
    assert!(text.lines().any(|l| l.starts_with("within_tolerance") && l.ends_with("true")));
}
