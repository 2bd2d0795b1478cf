use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn qcenter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcenter"))
        .args(args)
        .output()
        .expect("run qcenter")
}

fn qcenter_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qcenter"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn qcenter");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

const WORKED: &str = "\
hamiltonian: 0,0,1,0,0,-1, 0,-1,0,1,0,0
cross: 0,0,0,0,2,0, 0,1,0,-1,0,1
single: 0,0,1,1,0,0, 0,-1,0,0,0,0
nodes: 0,1,0,-1,0,0, 0,0,1,0,0,-1
";

fn worked_file(extra: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, "{WORKED}{extra}").unwrap();
    f
}

#[test]
fn classify_single_point_center() {
    let out = qcenter(&["classify", "0,0,1,1,0,0, 0,-1,0,0,0,0"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("M17"), "{text}");
    assert!(text.contains("center_count  1"), "{text}");
    assert!(text.contains("Thm9(ii)"), "{text}");
}

#[test]
fn classify_two_centers_as_json() {
    let out = qcenter(&[
        "classify",
        "0,0,1,0,0,-1,0,-1,0,1,0,0",
        "--format",
        "json",
        "--oracle",
    ]);
    assert!(out.status.success());
    let doc = json(&out);
    assert_eq!(doc["schema_version"], 1);
    let s = &doc["systems"][0];
    assert_eq!(s["classification"]["set_index"], "M1");
    assert_eq!(s["classification"]["center_count"], 2);
    assert_eq!(s["classification"]["fired_rule"], "Thm1(iii)");
    assert_eq!(s["oracle"]["center_count"], 2);
    assert_eq!(s["coefficients"][5], "-1/1");
}

#[test]
fn classify_reads_stdin() {
    let out = qcenter_stdin(&["classify"], "0,0,1,1,0,0,0,-1,0,0,0,0\n");
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("M17"));
}

#[test]
fn zero_field_is_not_applicable() {
    let out = qcenter(&["classify", "0,0,0,0,0,0,0,0,0,0,0,0", "--format", "json"]);
    assert!(out.status.success());
    let c = &json(&out)["systems"][0]["classification"];
    assert_eq!(c["set_index"], "M19");
    assert_eq!(c["center_count"], Value::Null);
    assert!(c["diagnostics"][0].as_str().unwrap().contains("degenerate"));
}

#[test]
fn parse_error_exits_two_with_position() {
    let out = qcenter(&["classify", "0,0,1,0.5,0,0,0,0,0,0,0,0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("line 1, column 7"),
        "{}",
        stderr(&out)
    );
}

#[test]
fn invariants_dump() {
    let out = qcenter(&[
        "invariants",
        "0,0,1,0,0,-1,0,-1,0,1,0,0",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let t = json(&out);
    assert_eq!(t["c"].as_array().unwrap().len(), 12);
    assert_eq!(t["origin"]["J1"], "1/1");
    let text = stdout(&qcenter(&[
        "classify",
        "0,0,1,0,0,-1,0,-1,0,1,0,0",
        "--invariants",
    ]));
    assert!(text.contains("A26"), "{text}");
}

#[test]
fn batch_of_worked_systems_agrees_with_oracle() {
    let f = worked_file("");
    let out = qcenter(&[
        "batch",
        f.path().to_str().unwrap(),
        "--oracle",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let doc = json(&out);
    assert_eq!(doc["summary"]["disagreements"].as_array().unwrap().len(), 0);
    let counts: Vec<_> = doc["systems"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["classification"]["center_count"].as_u64().unwrap())
        .collect();
    assert_eq!(counts, [2, 1, 1, 0]);
}

#[test]
fn malformed_line_fails_batch_and_is_named() {
    let f = worked_file("0,0,1\n");
    let out = qcenter(&["batch", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 5"), "{}", stderr(&out));
}

#[test]
fn batch_output_does_not_depend_on_jobs() {
    let f = worked_file("");
    let path = f.path().to_str().unwrap();
    let one = qcenter(&["batch", path, "--oracle", "--format", "json", "--jobs", "1"]);
    let eight = qcenter(&["batch", path, "--oracle", "--format", "json", "--jobs", "8"]);
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn json_batch_with_wrong_expectation_fails() {
    let input = r#"[{"id": "h", "coefficients": ["0","0","1","0","0","-1","0","-1","0","1","0","0"],
                     "expected": {"set_index": "M1", "center_count": 1}}]"#;
    let out = qcenter_stdin(&["batch", "-", "--format", "json"], input);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["summary"]["disagreements"][0]["id"], "h");
}

#[test]
fn json_batch_syntax_error_is_an_input_error() {
    let out = qcenter_stdin(&["batch", "-"], "[{\"id\": ");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn hamiltonian_corpus_agrees() {
    let out = qcenter(&[
        "corpus",
        "--family",
        "hamiltonian",
        "--count",
        "100",
        "--format",
        "json",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let fam = &json(&out)["families"][0];
    assert_eq!(fam["systems"], 100);
    assert_eq!(fam["agreed"], 100);
}

#[test]
fn random_corpus_partition_is_total() {
    let out = qcenter(&[
        "corpus", "--seed", "7", "--count", "500", "--family", "random", "--format", "json",
    ]);
    assert!(out.status.success(), "{}", stdout(&out));
    let doc = json(&out);
    assert_eq!(doc["summary"]["systems"], 500);
    assert_eq!(doc["summary"]["errors"].as_array().unwrap().len(), 0);
}
