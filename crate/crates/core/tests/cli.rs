mod common;

use std::process::{Command, Output};

use common::fixture;
use serde_json::Value;

fn drpa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drpa")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(name: &str) -> String {
    fixture(name).display().to_string()
}

#[test]
fn gaps_report() {
    let out = drpa(&["gaps", &path("convex_pair.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tool"], "drpa");
    assert_eq!(v["command"], "gaps");
    assert_eq!(v["ok"], true);
    assert_eq!(v["grid"]["theta1_steps"], 2001);
    let r = &v["result"];
    assert!((r["z_i"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!((r["information_rent"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert!(r["adjustability_gap"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn reruns_are_byte_identical() {
    for args in
        [vec!["gaps", "convex_pair.json"], vec!["certify", "bottleneck_pair.json"], vec!["envelope", "concave1.json"]]
    {
        let a = drpa(&[args[0], &path(args[1])]);
        let b = drpa(&[args[0], &path(args[1])]);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("r.json");
    let out = drpa(&["solve-i", &path("bottleneck_pair.json"), "--out", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert!((v["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(drpa(&["solve-i", &path("bottleneck_pair.json")]).stdout, std::fs::read(&file).unwrap());
}

#[test]
fn grid_overrides_are_recorded() {
    let v = json(&drpa(&["solve-ii", &path("convex1.json"), "--grid-theta1-steps", "11", "--grid-no-breakpoints"]));
    assert_eq!(v["grid"]["theta1_steps"], 11);
    assert_eq!(v["grid"]["breakpoints"], false);
    // best grid point above 2/3 is 0.7: (1 − 0.7)·g(2) = 0.9
    assert!((v["result"]["value"].as_f64().unwrap() - 0.9).abs() < 1e-12);
}

#[test]
fn broken_assumptions_exit_two() {
    let out = drpa(&["gaps", &path("missing_outside_option.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("outside option"), "{err}");

    let out = drpa(&["solve-i", &path("negative_payment_cap.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("payment_cap"));
}

#[test]
fn validate_file_lists_violations() {
    let out = drpa(&["validate", &path("missing_outside_option.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], false);
    assert_eq!(v["result"].as_array().unwrap().len(), 1);

    let out = drpa(&["validate", &path("convex_pair.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"], Value::Array(vec![]));
}

#[test]
fn malformed_documents_name_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"types": [{"id": "A", "actions": [{"cost": "x", "output": 0}]}], "ambiguity": {"variant": "all_deltas", "members": ["A"]}}"#).unwrap();
    let out = drpa(&["solve-i", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("types[0].actions[0]"), "{err}");
}

#[test]
fn random_validation_from_seed_file() {
    let seeds: Value = serde_json::from_str(&std::fs::read_to_string(fixture("validate_seeds.json")).unwrap()).unwrap();
    let arg = |k: &str| seeds[k].to_string();
    let out = drpa(&[
        "validate",
        "--count",
        &arg("count"),
        "--seed",
        &arg("seed"),
        "--max-types",
        &arg("max_types"),
        "--max-actions",
        &arg("max_actions"),
        "--output-levels",
        &arg("output_levels"),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["seed"], seeds["seed"]);
    assert_eq!(v["result"]["passed"], seeds["count"]);
}

#[test]
fn forest_case() {
    let v = json(&drpa(&["case-forest", "--k", "2", "--h", "1", "--t", "0.5", "--a0", "1"]));
    // k²/(4h) + k·t·a0/2
    assert!((v["result"]["payoff"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    let doc = json(&drpa(&["case-forest", &path("forest.json")]));
    assert!((doc["result"]["ratio"]["ratio"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn salesforce_case_is_certified() {
    let out = drpa(&["case-salesforce", &path("salesforce.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["certificate"]["certified"], true);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(drpa(&["solve-i"]).status.code(), Some(2));
    assert_eq!(drpa(&["no-such-command"]).status.code(), Some(2));
    assert_eq!(drpa(&["gaps", "/nonexistent.json"]).status.code(), Some(2));
}
