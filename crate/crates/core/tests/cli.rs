use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_umap-rips"))
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const LINE: &str = "a,b,c\n0,1,3\n1,0,2\n3,2,0\n";
const LONG_LINE: &str = "a,b,c,d\n0,1,3,4\n1,0,2,3\n3,2,0,1\n4,3,1,0\n";
const IDENTITY: &str = "a,a\nb,b\nc,c\n";

#[test]
fn cluster_line_example() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.csv"), "id,x\na,0\nb,1\nc,3\n").unwrap();
    let out = run(dir.path(), &["cluster", "--input", "p.csv", "--format", "points-csv", "--metric", "manhattan", "--k", "1", "--scheme", "ambient", "--mode", "rational", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "components at s=inf: 1");
    let d = json(&dir.path().join("o/dendrogram.json"));
    assert_eq!(d["merges"][0]["s"], "1");
    assert_eq!(d["merges"][1]["s"], "2");
    assert_eq!(d["roots"], serde_json::json!(["a"]));
    let p = json(&dir.path().join("o/partitions.json"));
    assert_eq!(p.as_array().unwrap().len(), 4);
    assert_eq!(p[3]["s"], "3");
}

#[test]
fn cluster_single_point_has_no_merges() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.csv"), "a,0,0\n").unwrap();
    let out = run(dir.path(), &["cluster", "--input", "p.csv", "--format", "points-csv", "--k", "0", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let d = json(&dir.path().join("o/dendrogram.json"));
    assert_eq!(d["merges"], serde_json::json!([]));
}

#[test]
fn cluster_rejects_infinite_coordinates() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("p.csv"), "a,0\nb,inf\n").unwrap();
    let out = run(dir.path(), &["cluster", "--input", "p.csv", "--format", "points-csv", "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("format error"));
}

#[test]
fn verify_full_neighborhood_three_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--which", "remark5", "--points", "3", "--out", "o"]);
    assert!(out.status.success());
    let v = json(&dir.path().join("o/verify.json"));
    let entry = &v["full_neighborhood"]["instances"][0];
    assert_eq!(entry["chi"], -3);
    assert_eq!(entry["betti"], serde_json::json!([1, 4, 0]));
    assert_eq!(v["verdict"], true);
}

#[test]
fn verify_full_neighborhood_refuses_eight_points() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["verify", "--which", "remark5", "--points", "8"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("resource error"));
}

#[test]
fn verify_excision_on_input_and_suite() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.csv"), LONG_LINE).unwrap();
    let out = run(dir.path(), &["verify", "--which", "excision", "--input", "d.csv", "--k", "2", "--mode", "rational", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(dir.path(), &["verify", "--which", "all", "--instances", "20", "--seed", "3", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn verify_stability_identity() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.csv"), LINE).unwrap();
    fs::write(dir.path().join("inc.csv"), IDENTITY).unwrap();
    let out = run(dir.path(), &["verify-stability", "--x", "x.csv", "--y", "x.csv", "--inclusion", "inc.csv", "--k", "1", "--mode", "rational", "--out", "o"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = json(&dir.path().join("o/certificate-0.json"));
    assert_eq!(c["m"], "1");
    assert_eq!(c["r"], "0");
    assert_eq!(c["theta"], serde_json::json!({"a": "a", "b": "b", "c": "c"}));
    assert_eq!(c["verdict"], true);
}

#[test]
fn verify_stability_nested_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("x.csv"), LINE).unwrap();
    fs::write(dir.path().join("y.csv"), LONG_LINE).unwrap();
    fs::write(dir.path().join("inc.csv"), IDENTITY).unwrap();
    let base = ["verify-stability", "--x", "x.csv", "--y", "y.csv", "--inclusion", "inc.csv", "--k", "1", "--scheme", "ambient", "--mode", "rational", "--out", "o"];
    // With k = 1 on both sides, c's nearest neighbor changes from b to d.
    let out = run(dir.path(), &base);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("(c,b)"));

    let mut args = base.to_vec();
    args.extend(["--y-k", "2"]);
    let out = run(dir.path(), &args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let c = json(&dir.path().join("o/certificate-0.json"));
    assert_eq!(c["m"], "1");
    assert_eq!(c["r"], "1");
    assert_eq!(c["theta"]["d"], "c");
}

#[test]
fn verify_stability_lists_weight_violations() {
    let dir = tempfile::tempdir().unwrap();
    let x = r#"{"points": ["a", "b"], "neighbors": {"a": ["b"], "b": ["a"]}, "weights": {"a": [1], "b": [1]}}"#;
    let y = r#"{"points": ["a", "b"], "neighbors": {"a": ["b"], "b": ["a"]}, "weights": {"a": [2], "b": [1]}}"#;
    fs::write(dir.path().join("x.json"), x).unwrap();
    fs::write(dir.path().join("y.json"), y).unwrap();
    fs::write(dir.path().join("inc.csv"), "a,a\nb,b\n").unwrap();
    let out = run(dir.path(), &["verify-stability", "--x", "x.json", "--y", "y.json", "--inclusion", "inc.csv", "--format", "neighborhood-json"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("precondition failed"), "{err}");
    assert!(err.contains("(a,b)"), "{err}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("d.csv"), LONG_LINE).unwrap();
    for out in ["o1", "o2"] {
        let status = run(dir.path(), &["cluster", "--input", "d.csv", "--k", "2", "--out", out]).status;
        assert!(status.success());
    }
    for name in ["dendrogram.json", "partitions.json"] {
        assert_eq!(
            fs::read(dir.path().join("o1").join(name)).unwrap(),
            fs::read(dir.path().join("o2").join(name)).unwrap()
        );
    }
}
