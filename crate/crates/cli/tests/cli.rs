use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cellspace(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cellspace")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(cellspace(&["--help"]).status.code(), Some(0));
    assert_eq!(cellspace(&["--version"]).status.code(), Some(0));
    assert_eq!(cellspace(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(cellspace(&["analyze", "--space", "torus"]).status.code(), Some(1));
    assert_eq!(cellspace(&["analyze", "--space", "z1"]).status.code(), Some(1));
    assert_eq!(cellspace(&["analyze", "--space", "z1", "--rule", "eca:300"]).status.code(), Some(1));
}

#[test]
fn bad_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let schema = write_config(dir.path(), "a.json", r#"{"schema": 2, "space": "z1"}"#);
    let unknown = write_config(dir.path(), "b.json", r#"{"schema": 1, "space": "z1", "params": {"widnows": "1..=3"}}"#);
    for path in [schema, unknown] {
        let o = cellspace(&["folner", "--config", &path]);
        assert_eq!(o.status.code(), Some(1));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn geometry_of_a_square() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "g.json",
        r#"{"schema": 1, "space": "z2", "params": {"set": {"cube": [0, 10]}, "e": "moore"}}"#,
    );
    let v = json(&cellspace(&["geometry", "--config", &cfg]));
    assert_eq!(v["interior"]["size"], 64);
    assert_eq!(v["closure"]["size"], 144);
    assert_eq!(v["boundary"]["size"], 80);
}

#[test]
fn folner_table_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "f.json",
        r#"{"schema": 1, "space": "z2", "params": {"folner": "10", "coset": [1, 0]}}"#,
    );
    let o = cellspace(&["folner", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<_> = stdout(&o).lines().map(str::to_owned).collect();
    assert_eq!(rows[0], "i,size,defect,boundary_ratio");
    // a unit step moves one column of 10 out; the Moore boundary has 80 cells
    assert_eq!(rows[1], "10,100,1/10,4/5");
}

#[test]
fn tiling_a_segment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "t.json", r#"{"schema": 1, "space": "z1", "params": {"region": {"cube": [0, 30]}}}"#);
    let csv = dir.path().join("density.csv");
    let o = cellspace(&["tile", "--config", &cfg, "--csv", csv.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["centers"].as_array().unwrap().len(), 10);
    assert_eq!(v["verified"]["covering"], true);
    assert_eq!(v["verified"]["disjoint"], true);
    let table = std::fs::read_to_string(csv).unwrap();
    assert!(table.starts_with("i,size,tiles,density\n"));
}

#[test]
fn entropy_rows() {
    let o = cellspace(&["entropy", "--space", "z1", "--rule", "eca:90", "--windows", "1..=3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "i,size,count,bits,status\n1,1,2,1,exact\n2,2,4,1,exact\n3,3,8,1,exact\n");

    let o = cellspace(&["entropy", "--space", "z1", "--rule", "eca:0", "--windows", "2"]);
    assert_eq!(stdout(&o), "i,size,count,bits,status\n2,2,1,0,exact\n");
}

#[test]
fn analyze_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    let o = cellspace(&["analyze", "--space", "dihedral:5", "--rule", "majority", "--out", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["surjective"], "no");
    assert_eq!(v["pre_injective"], "no");
    assert_eq!(v["status"], "consistent");
    assert_eq!(v["ca"]["space_descriptor"]["kind"], "dihedral");

    for extra in [&[][..], &["--witnesses-only"][..]] {
        let mut args = vec!["verify", report.to_str().unwrap()];
        args.extend_from_slice(extra);
        let o = cellspace(&args);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
        assert_eq!(json(&o)["passed"], true);
    }
}

#[test]
fn tampered_reports_fail_verification() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("r.json");
    cellspace(&["analyze", "--space", "z1", "--rule", "eca:110", "--out", report.to_str().unwrap()]);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    // swap in a rule whose image is everything
    v["ca"]["rule_descriptor"] = Value::from("eca:204");
    std::fs::write(&report, serde_json::to_string(&v).unwrap()).unwrap();
    let o = cellspace(&["verify", "--witnesses-only", report.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["passed"], false);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let a = cellspace(&["--threads", "1", "analyze", "--space", "z1", "--rule", "eca:30"]);
    let b = cellspace(&["--threads", "4", "analyze", "--space", "z1", "--rule", "eca:30"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn elementary_sweep() {
    let o = cellspace(&["analyze", "--space", "z1", "--rule", "eca:all"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["surjective"], 30);
    assert_eq!(v["pre_injective"], 30);
    assert_eq!(v["flagged"], 0);
    assert_eq!(v["rules"].as_array().unwrap().len(), 256);
}
