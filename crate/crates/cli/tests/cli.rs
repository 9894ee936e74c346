use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hardybox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hardybox")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn quantum_example_reports_zero_residuals() {
    let out = hardybox(&["quantum", "example"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["command"], "quantum example");
    assert_eq!(r["results"]["classification"], serde_json::json!(["0A"]));
    let res = &r["results"]["residuals"];
    for k in ["r15", "r16", "r17"] {
        assert!(res[k].as_f64().unwrap().abs() < 1e-12);
    }
    assert!((res["p18"].as_f64().unwrap() - 0.075).abs() < 1e-12);
}

#[test]
fn case_one_always_violates_ic() {
    let r = json(&hardybox(&["case", "ic", "1", "--samples", "10000", "--seed", "7"]));
    assert_eq!(r["results"]["verdict"], "AlwaysViolated");
    assert_eq!(r["seed"], 7);
    let r = json(&hardybox(&["ic", "case", "12", "--samples", "1000"]));
    assert_eq!(r["results"]["verdict"], "Feasible");
}

#[test]
fn ic_optimize_reaches_the_bound() {
    let r = json(&hardybox(&["ic", "optimize", "--resolution", "2000"]));
    let q = r["results"]["q_star"].as_f64().unwrap();
    assert!((q - 0.20711).abs() < 1e-5);
    let r = json(&hardybox(&["ic", "optimize", "--no-ic"]));
    assert_eq!(r["results"]["q_star"].as_f64().unwrap(), 0.5);
}

#[test]
fn emitted_boxes_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("hardy.json");
    let out = hardybox(&["hardy", "build", "--c", "0.1,0,0.2,0,0.3,0.4"]);
    std::fs::write(&built, &out.stdout).unwrap();
    let r = json(&hardybox(&["hardy", "decompose", path(&built)]));
    let c: Vec<f64> = serde_json::from_value(r["results"]["c"].clone()).unwrap();
    for (a, b) in c.iter().zip([0.1, 0.0, 0.2, 0.0, 0.3, 0.4]) {
        assert!((a - b).abs() < 1e-12);
    }

    // A bare box file, as written by hand.
    let bare = dir.path().join("bare.json");
    std::fs::write(&bare, r["results"].to_string()).unwrap();
    let boxed = json(&out)["results"]["box"].to_string();
    std::fs::write(&bare, boxed).unwrap();
    let r = json(&hardybox(&["hardy", "check", path(&bare)]));
    assert_eq!(r["results"]["is_hardy"], true);
    let r = json(&hardybox(&["ic", "check", path(&bare)]));
    assert_eq!(r["results"]["satisfied"], true);
}

#[test]
fn vertex_mix_and_check() {
    let dir = tempfile::tempdir().unwrap();
    let nl = dir.path().join("nl.json");
    std::fs::write(&nl, hardybox(&["box", "vertex", "NL001"]).stdout).unwrap();
    let r = json(&hardybox(&["box", "check", path(&nl)]));
    assert_eq!(r["results"]["no_signaling"], true);
    assert_eq!(r["results"]["local"], false);
    let r = json(&hardybox(&["ic", "check", path(&nl)]));
    assert_eq!(r["results"]["satisfied"], false);

    let w = dir.path().join("w.json");
    std::fs::write(&w, r#"{"weights":[{"vertex":"L0000","weight":0.5},{"vertex":"L0101","weight":0.5}]}"#).unwrap();
    let mixed = dir.path().join("mixed.json");
    std::fs::write(&mixed, hardybox(&["box", "mix", path(&w)]).stdout).unwrap();
    let r = json(&hardybox(&["box", "check", path(&mixed)]));
    assert_eq!(r["results"]["local"], true);
    let r = json(&hardybox(&["classify", path(&mixed)]));
    assert_eq!(r["results"]["random_inputs"], serde_json::json!(["0A", "1A", "0B", "1B"]));
    assert_eq!(r["results"]["case"], 1);
}

#[test]
fn quantum_eval_reads_setup_file() {
    let dir = tempfile::tempdir().unwrap();
    let setup = dir.path().join("setup.json");
    let ex = json(&hardybox(&["quantum", "example"]));
    std::fs::write(&setup, ex["results"]["setup"].to_string()).unwrap();
    let beta = ex["results"]["state"]["beta"].to_string();
    let gamma = ex["results"]["state"]["gamma"].to_string();
    let r = json(&hardybox(&["quantum", "eval", "--beta", &beta, "--gamma", &gamma, "--setup", path(&setup)]));
    // Angles are wrapped on input, so −π comes back as π.
    for key in ["residuals", "classification", "ic", "state"] {
        assert_eq!(r["results"][key], ex["results"][key]);
    }
}

#[test]
fn exit_codes() {
    assert_eq!(hardybox(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(hardybox(&[]).status.code(), Some(64));
    assert_eq!(hardybox(&["--help"]).status.code(), Some(0));
    assert_eq!(hardybox(&["--version"]).status.code(), Some(0));
    assert_eq!(hardybox(&["hardy", "build", "--c", "0.5,0.5,0.5,0,0,0"]).status.code(), Some(2));
    assert_eq!(hardybox(&["hardy", "build", "--c", "0.5,0.5"]).status.code(), Some(2));
    assert_eq!(hardybox(&["case", "solve", "16"]).status.code(), Some(2));
    assert_eq!(hardybox(&["box", "vertex", "X9"]).status.code(), Some(2));
    assert_eq!(hardybox(&["quantum", "eval", "--beta", "3", "--gamma", "0", "--setup", "x"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"p":[[1,0,0,0],[0,0,0,1],[1,0,0,0],[1,0,0,0]]}"#).unwrap();
    let out = hardybox(&["hardy", "decompose", path(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let r = json(&hardybox(&["box", "check", path(&bad)]));
    assert_eq!(r["results"]["no_signaling"], false);
}

#[test]
fn compact_and_indented_output_agree() {
    let a = json(&hardybox(&["case", "sample", "9", "--n", "3", "--json-indent", "0"]));
    let b = json(&hardybox(&["case", "sample", "9", "--n", "3", "--json-indent", "4"]));
    assert_eq!(a, b);
    let out = hardybox(&["case", "sample", "9", "--n", "1", "--json-indent", "0"]);
    assert_eq!(out.stdout.iter().filter(|&&c| c == b'\n').count(), 1);
}

#[test]
fn reproduce_all_is_deterministic_and_catches_tampering() {
    let first = hardybox(&["reproduce-all"]);
    assert_eq!(first.status.code(), Some(0), "{}", String::from_utf8_lossy(&first.stderr));
    let second = hardybox(&["reproduce-all"]);
    assert_eq!(first.stdout, second.stdout);
    let stderr = String::from_utf8_lossy(&first.stderr);
    assert_eq!(stderr.lines().filter(|l| l.starts_with("PASS")).count(), 8);

    let tampered = hardybox(&["reproduce-all", "--perturb-example", "0.1"]);
    assert_ne!(tampered.status.code(), Some(0));
    let r = json(&tampered);
    let criteria = r["results"]["criteria"].as_array().unwrap();
    let failed: Vec<u64> =
        criteria.iter().filter(|c| c["passed"] == false).map(|c| c["id"].as_u64().unwrap()).collect();
    assert_eq!(failed, vec![5]);
}
