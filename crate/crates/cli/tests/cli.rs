use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    format!("{}/samples/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn scratch(name: &str, body: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resonant")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = run(&full);
    let v = serde_json::from_slice(&out.stdout).expect("json report");
    (v, out.status.code().unwrap())
}

#[test]
fn analyze_worked_example() {
    let (r, code) = json(&["analyze", &sample("xi0.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["certificate"]["delta"], 1.0);
    assert_eq!(r["certificate"]["bound_C"], 2);
    assert_eq!(r["dim_g"], 3);
    assert_eq!(r["versal"]["dim_S"], 2);
    assert_eq!(r["mode"], "exact");
}

#[test]
fn analyze_perturbed_example_has_one_parameter() {
    let (r, code) = json(&["analyze", &sample("xi0_plus_z1sq.json")]);
    assert_eq!(code, 0);
    assert_eq!(r["versal"]["dim_S"], 1);
    assert_eq!(r["versal"]["complement"][0]["terms"][0]["m"], serde_json::json!([0, 1]));
}

#[test]
fn saddle_exits_two_with_report() {
    let (r, code) = json(&["analyze", &sample("saddle.json")]);
    assert_eq!(code, 2);
    assert_eq!(r["certificate"]["in_domain"], false);
}

#[test]
fn input_errors_exit_one_and_name_the_key() {
    let p = scratch("no_lambda.json", r#"{"n": 2, "terms": []}"#);
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));

    let p = scratch("bad_j.json", r#"{"n": 2, "lambda": [1, 2], "terms": [{"j": 5, "m": [2, 0], "a": 1}]}"#);
    let out = run(&["analyze", &p]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("terms[0].j"));

    let out = run(&["analyze", "/nonexistent/field.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn versal_rejects_non_resonant_but_analyze_notes_it() {
    let p = scratch("nonres.json", r#"{"n": 2, "lambda": [1, 2], "terms": [{"j": 2, "m": [1, 1], "a": 1}]}"#);
    assert_eq!(run(&["versal", &p]).status.code(), Some(1));
    let (r, code) = json(&["analyze", &p]);
    assert_eq!(code, 0);
    assert!(r["versal"].is_null());
    assert!(!r["notes"].as_array().unwrap().is_empty());
}

#[test]
fn normal_form_removes_non_resonant_term() {
    let p = scratch("nf.json", r#"{"n": 2, "lambda": [1, 2], "terms": [{"j": 2, "m": [1, 1], "a": [1, 0]}]}"#);
    let (r, code) = json(&["normal-form", "--degree", "3", &p]);
    assert_eq!(code, 0);
    let terms = r["normal_form"]["field"]["terms"].as_array().unwrap();
    let ms: Vec<&Value> = terms.iter().map(|t| &t["m"]).collect();
    assert_eq!(ms, vec![&serde_json::json!([1, 0]), &serde_json::json!([0, 1])]);
}

#[test]
fn small_divisor_exits_three() {
    let p = scratch(
        "near.json",
        r#"{"n": 2, "lambda": [[1.0, 0.0], [2.000000001, 0.0]], "terms": [{"j": 2, "m": [2, 0], "a": [1.0, 0.0]}]}"#,
    );
    let out = run(&["--tol", "1e-12", "normal-form", &p]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("small divisor") && err.contains("(2,0)"), "{err}");
}

#[test]
fn flow_of_diagonal_field() {
    let (r, code) = json(&["flow", "--z0", "1,1", "--t", "1", &sample("xi0.json")]);
    assert_eq!(code, 0);
    let z = &r["flow"]["z_t"];
    assert_eq!(z[0][0].as_f64().unwrap(), 1f64.exp());
    assert_eq!(z[1][0].as_f64().unwrap(), 2f64.exp());
    assert_eq!(z[0][1].as_f64().unwrap(), 0.0);
}

#[test]
fn probe_verdicts_on_diagonal_field() {
    let (r, code) = json(&["probe", "--depth", "2", &sample("xi0.json")]);
    assert_eq!(code, 0);
    for k in ["sigma", "theta", "gperp"] {
        assert_eq!(r["probe"][k]["verdict"], "injective", "{k}");
    }
    assert_eq!(r["probe"]["h0"]["kernel_is_constants"], true);
    assert_eq!(r["probe"]["h0"]["constant_unreachable"], true);
}

#[test]
fn scan_is_seeded() {
    let args = ["scan", "--samples", "500", "--seed", "9", &sample("saddle.json")];
    let (a, code) = json(&args);
    let (b, _) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert_eq!(a["scan"]["violation"], true);
    assert_eq!(a["scan"]["samples"], 504);
}

#[test]
fn input_echo_round_trips() {
    let text = std::fs::read_to_string(sample("xi0_plus_z1sq.json")).unwrap();
    let original: Value = serde_json::from_str(&text).unwrap();
    let (r, _) = json(&["resonances", &sample("xi0_plus_z1sq.json")]);
    let echoed = scratch("echo.json", &r["input"].to_string());
    let (again, _) = json(&["resonances", &echoed]);
    assert_eq!(r["input"], again["input"]);
    assert_eq!(r["input"]["terms"], original["terms"]);
}

#[test]
fn float_mode_reports_near_resonances() {
    let p = scratch("floaty.json", r#"{"n": 2, "lambda": [[1.0, 0.0], [2.0000001, 0.0]]}"#);
    let (r, code) = json(&["resonances", &p]);
    assert_eq!(code, 0);
    assert_eq!(r["mode"], "float");
    assert!(!r["near_misses"].as_array().unwrap().is_empty());
}

#[test]
fn human_output_is_default() {
    let out = run(&["analyze", &sample("xi0.json")]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("dim S = 2"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}
