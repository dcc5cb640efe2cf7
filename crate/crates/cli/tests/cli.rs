use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const K4: &str = r#"{
  "r": 3,
  "classes": [{"weights": ["1"]}, {"weights": ["1"]}, {"weights": ["1"]}, {"weights": ["1"]}],
  "edges": [
    [[0,0],[1,0],[2,0]],
    [[0,0],[1,0],[3,0]],
    [[0,0],[2,0],[3,0]],
    [[1,0],[2,0],[3,0]]
  ]
}"#;

fn turan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_turan"))
        .args(args)
        .env_remove("TURAN_JOBS")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = turan(&all);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn density_of_complete_graph_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let k4 = write(dir.path(), "k4.json", K4);
    let v = json(&["density", &k4]);
    assert_eq!(v["result"]["rho"], serde_json::json!(["1", "1", "1", "1"]));
    assert_eq!(v["config"]["command"]["subcommand"], "density");

    let table = turan(&["density", &k4]);
    let text = String::from_utf8(table.stdout).unwrap();
    assert!(text.lines().any(|l| l.split_whitespace().collect::<Vec<_>>() == ["3", "1"]), "{text}");
}

#[test]
fn construct_then_count_cliques() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json").display().to_string();
    let v = json(&["construct", "--r", "3", "--rho", "9/10,9/10,9/10,9/10", "--out", &out]);
    assert_eq!(v["result"]["C"], "3/5");
    assert!(Path::new(&format!("{out}.recipe.json")).exists());
    let c = json(&["cliques", &out]);
    assert_eq!(c["result"]["C"], "3/5");
    assert_eq!(c["result"]["slack"], "0");
}

#[test]
fn exhaustive_bound_scan() {
    let v = json(&["verify-bound", "--r", "2", "--sizes", "2,2,2", "--mode", "exhaustive"]);
    assert_eq!(v["result"]["instances_checked"], 4096);
    assert_eq!(v["result"]["violations"], serde_json::json!([]));
}

#[test]
fn random_scan_is_reproducible() {
    let args = ["verify-bound", "--r", "3", "--sizes", "2,2,2,2", "--mode", "random", "--trials", "300", "--seed", "9"];
    let a = turan(&[&["--format", "json", "--jobs", "1"], &args[..]].concat());
    let b = turan(&[&["--format", "json", "--jobs", "1"], &args[..]].concat());
    assert_eq!(a.stdout, b.stdout);
    let c = json(&[&["--jobs", "4"], &args[..]].concat());
    let a: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(a["result"], c["result"]);
    assert_eq!(c["config"]["jobs"], 4);
}

#[test]
fn jobs_default_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_turan"))
        .args(["--format", "json", "pos-region", "1", "1", "1"])
        .env("TURAN_JOBS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["jobs"], 3);
}

#[test]
fn exit_codes_for_bad_input() {
    let bad_rational = turan(&["pos-region", "3/4", "3/0", "1"]);
    assert_eq!(bad_rational.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad_rational.stderr).contains("3/0"));

    let unknown = turan(&["frobnicate"]);
    assert_eq!(unknown.status.code(), Some(1));

    let missing = turan(&["density", "/definitely/not/here.json"]);
    assert_eq!(missing.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("/definitely/not/here.json"));

    let regime = turan(&["construct", "--r", "3", "--rho", "1/2,1/2,1/2,1/2"]);
    assert_eq!(regime.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&regime.stderr).contains("sum(rho) - r = -1"));

    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "broken.json", r#"{"r": 2, "classes": [{"weights": ["1/0"]}], "edges": []}"#);
    let parse = turan(&["cliques", &broken]);
    assert_eq!(parse.status.code(), Some(1));

    assert_eq!(turan(&["--help"]).status.code(), Some(0));
    assert_eq!(turan(&["--version"]).status.code(), Some(0));
}

#[test]
fn lift_blowup_balance_threshold() {
    let dir = tempfile::tempdir().unwrap();
    let edge = write(dir.path(), "edge.json", r#"{"r": 2, "n": 2, "edges": [[0, 1]]}"#);
    let lifted = dir.path().join("lift.json").display().to_string();
    let v = json(&["lift", &edge, "--out", &lifted]);
    assert_eq!(v["result"]["edges"], 6);
    assert_eq!(v["result"]["strictly_balanced"], true);

    let b = json(&["balance", &lifted, "--tuple-size", "1"]);
    assert_eq!(b["result"]["balance"]["balanced"], true);

    let blown = dir.path().join("blown.json").display().to_string();
    let v = json(&["blowup", &lifted, "--scale", "2", "--out", &blown]);
    assert_eq!(v["result"]["class_sizes"], serde_json::json!([4, 4, 4]));
    let d = json(&["density", &blown]);
    assert_eq!(d["result"]["rho"], serde_json::json!(["1/2", "1/2", "1/2"]));

    let k4 = write(dir.path(), "k4.json", K4);
    let t = json(&["threshold", &k4, "--k", "0"]);
    assert_eq!(t["result"]["margin"], "1");
    assert!(t["result"]["witness"].is_array());
    assert_eq!(t["result"]["theorem_violation"], false);
}

#[test]
fn tightness_and_region_reports() {
    let v = json(&["tightness", "--r", "2", "--rho", "3/4,3/4,3/4", "--rho", "1/2,1/2,1/2"]);
    assert_eq!(v["result"][0]["C"], "1/4");
    assert_eq!(v["result"][0]["slack"], "0");
    assert!(v["result"][1]["note"].is_string());

    let p = json(&["pos-region", "1/2", "1/2", "1/2"]);
    assert_eq!(p["result"]["in_region"], false);
    assert_eq!(p["result"]["sum_at_least_nine_quarters"], false);
}

#[test]
fn csv_and_report_file() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.csv").display().to_string();
    let out = turan(&["--format", "csv", "--decimal", "3", "pos-region", "3/4", "3/4", "3/4", "--out", &report]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&report).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: "));
    assert_eq!(lines.next().unwrap(), "key,value,value_decimal");
    assert!(text.contains("sum,9/4,2.250"));
}
