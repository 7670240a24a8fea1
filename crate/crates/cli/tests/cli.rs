use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lsmodel")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn character_tables() {
    let v = json(&["character", "A1", "--lambda", "2"]);
    assert_eq!(v["result"]["agreement"], true);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 2);
    assert_eq!(v["config"]["type"], "A1");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));

    let v = json(&["character", "--type", "A2", "--lambda", "1,1"]);
    let entries = v["result"]["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    let zero = entries.iter().find(|e| e["weight"] == serde_json::json!(["0", "0"])).unwrap();
    assert_eq!(zero["ls"], 2);

    let v = json(&["character", "A2", "0,0"]);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 1);
}

#[test]
fn lr_and_tensor() {
    let v = json(&["lr", "A2", "1,0", "1,0", "1,0"]);
    assert_eq!(v["result"]["count"], 1);
    assert_eq!(v["result"]["witnesses"].as_array().unwrap().len(), 1);

    let v = json(&["lr", "A2", "1,0", "1,0", "0,1"]);
    assert_eq!(v["result"]["count"], 0);
    assert_eq!(v["result"]["lattice_obstruction"], true);

    let v = json(&["tensor", "A1", "2", "2"]);
    assert_eq!(v["result"]["summands"], 3);
    assert_eq!(v["result"]["agreement"], true);
}

#[test]
fn galleries_and_ledgers() {
    let v = json(&["galleries", "A2", "1,1"]);
    let counts = v["result"]["counts"].as_array().unwrap();
    let zero = counts.iter().find(|c| c["mu"] == serde_json::json!(["0", "0"])).unwrap();
    assert_eq!(zero["count"], 2);
    let v = json(&["galleries", "A2", "1,1", "0,0"]);
    assert_eq!(v["result"]["count"], 2);
    let out = run(&["galleries", "B2", "2,1", "2,1", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("gallery,step,root,level,case,parameter"));
}

#[test]
fn hecke_check_of_g2_gap() {
    let v = json(&["hecke-check", "G2", "--base=1/2,-5/2", "--path=-2,3@1/2;2,-3@1/2"]);
    let c = &v["result"]["classes"];
    assert_eq!(c["billiard"], true);
    assert_eq!(c["positively_folded"], true);
    assert_eq!(c["hecke"], false);
}

#[test]
fn validation_errors_exit_one() {
    for args in [
        vec!["character", "Z2", "1,0"],
        vec!["character", "A2", "1,-1"],
        vec!["character", "A2", "1"],
        vec!["lr", "A2", "1,0", "1,0"],
        vec!["satscan", "A2", "--bound", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn scan_output_is_independent_of_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let mut bodies = Vec::new();
    for (jobs, fmt) in [("1", "json"), ("3", "json"), ("1", "csv"), ("3", "csv")] {
        let path = dir.path().join(format!("scan-{jobs}.{fmt}"));
        let out = run(&["satscan", "B2", "--bound", "1", "--nmax", "2", "--jobs", jobs, "--format", fmt, "--out", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        bodies.push(std::fs::read(&path).unwrap());
    }
    assert_eq!(bodies[0], bodies[1]);
    assert_eq!(bodies[2], bodies[3]);
    let csv = String::from_utf8(bodies[2].clone()).unwrap();
    assert!(csv.starts_with("# config: "));
    assert!(csv.contains("# version: "));
    let report: Value = serde_json::from_slice(&bodies[0]).unwrap();
    assert_eq!(report["result"]["theorem_violations"], 0);
}

#[test]
fn pipeline_trace() {
    let v = json(&["pipeline", "B2", "2,1", "0,2", "0,2"]);
    assert_eq!(v["config"]["n"], 2);
    assert_eq!(v["result"]["ok"], true);
    let stages: Vec<&str> = v["result"]["stages"].as_array().unwrap().iter().map(|s| s["stage"].as_str().unwrap()).collect();
    assert_eq!(stages.first(), Some(&"witness"));
    assert_eq!(stages.last(), Some(&"nonvanishing"));
}
