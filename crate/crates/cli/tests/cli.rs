use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn mg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mg")).args(args).env_remove("MG_CACHE_DIR").output().expect("mg runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn graph_of_the_parabolic_a2_example() {
    let out = mg(&["graph", "--type", "A2", "--parabolic", "1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 3);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 3);
}

#[test]
fn graph_of_a1() {
    let v = json(&mg(&["graph", "--type", "A1", "--format", "json"]));
    assert_eq!(v["graph"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(v["graph"]["edges"].as_array().unwrap().len(), 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mg(&["graph", "--type", "A2", "--parabolic", "9"]).status.code(), Some(2));
    assert_eq!(mg(&["graph", "--type", "Q7"]).status.code(), Some(2));
    assert_eq!(mg(&["basis", "--type", "A2", "--element", "1 1"]).status.code(), Some(2));
    assert_eq!(mg(&["bmp", "--type", "A2", "--bound", "3", "--no-cache"]).status.code(), Some(2));
    assert_eq!(mg(&["verify", "--type", "A2", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(mg(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn resource_cap_exits_3() {
    assert_eq!(mg(&["graph", "--type", "A5", "--max-order", "100"]).status.code(), Some(3));
}

#[test]
fn basis_examples() {
    let text = |args: &[&str]| String::from_utf8(mg(args).stdout).unwrap();
    assert_eq!(
        text(&["basis", "--type", "A2", "--element", "1 2 1"]),
        "C(1 2 1) = (v^3)H(e) + (v^2)H(1) + (v^2)H(2) + (v)H(1 2) + (v)H(2 1) + H(1 2 1)\n"
    );
    assert_eq!(text(&["basis", "--type", "A2", "--parabolic", "1", "--element", "2"]), "C(2) = (v)H(e) + H(2)\n");
    assert_eq!(text(&["basis", "--type", "A2", "--element", ""]), "C(e) = H(e)\n");
}

#[test]
fn verify_examples() {
    let out = mg(&["verify", "--type", "A2", "--parabolic", "1", "--suite", "bmp-vs-oracle", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], Value::Bool(true));
    assert_eq!(v["suites"][0]["notes"]["elements compared"], 3);

    assert_eq!(mg(&["verify", "--type", "A1", "--suite", "translation"]).status.code(), Some(0));

    let out = mg(&["verify", "--type", "A3", "--suite", "graph", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["suites"][0]["notes"]["lifting triples"].as_u64().unwrap() > 0);
}

#[test]
fn char_matches_oracle() {
    let out = mg(&["char", "--type", "B2", "--parabolic", "2", "--translate", "1 2 1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["matches_oracle"], Value::Bool(true));
    let out = mg(&["char", "--type", "A3", "--element", "2 1 3 2", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["matches_oracle"], Value::Bool(true));
}

fn bmp_json(dir: &Path, extra: &[&str]) -> Vec<u8> {
    let mut args =
        vec!["bmp", "--type", "B2", "--element", "2 1 2", "--format", "json", "--cache-dir", dir.to_str().unwrap()];
    args.extend(extra);
    let out = mg(&args);
    assert_eq!(out.status.code(), Some(0));
    out.stdout
}

#[test]
fn cache_round_trip_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = bmp_json(dir.path(), &["--no-cache"]);
    let first = bmp_json(dir.path(), &[]);
    let cached = bmp_json(dir.path(), &[]);
    assert_eq!(fresh, first);
    assert_eq!(first, cached);

    let list = mg(&["cache", "verify", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(list.status.code(), Some(0));

    let entry = std::fs::read_dir(dir.path()).unwrap().next().unwrap().unwrap().path();
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&entry).unwrap()).unwrap();
    v["payload"]["character_text"] = Value::String("tampered".into());
    std::fs::write(&entry, v.to_string()).unwrap();
    let bad = mg(&["cache", "verify", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(1));
    // A corrupt entry is recomputed, not reused.
    assert_eq!(bmp_json(dir.path(), &[]), fresh);
    let cleared = mg(&["cache", "clear", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(cleared.status.code(), Some(0));
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn json_output_is_deterministic() {
    let args = ["verify", "--type", "B2", "--suite", "functor-I", "--format", "json"];
    assert_eq!(mg(&args).stdout, mg(&args).stdout);
}
