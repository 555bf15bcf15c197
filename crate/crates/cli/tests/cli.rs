use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn lacuna(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lacuna")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn export(dir: &TempDir, name: &str, part: &str) -> PathBuf {
    let path = dir.path().join(format!("{name}.{part}.json"));
    let o = lacuna(&["corpus", name, "--part", part, "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn certify_example_succeeds_with_ten_solutions() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let o = lacuna(&["certify", "--operator", s(&op), "--k", "10", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], 10);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 10);
}

#[test]
fn certify_fibonacci_is_inconclusive() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "fibonacci", "operator");
    let o = lacuna(&["certify", "--operator", s(&op), "--k", "1", "--budget", "100"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("\"outcome\": \"inconclusive\""));
}

#[test]
fn split_example_gives_eight_pieces_that_verify() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let seq = export(&dir, "example1_r2", "sequence");
    let cert = dir.path().join("split.json");
    let o = lacuna(&["split", "--operator", s(&op), "--sequence", s(&seq), "--window", "0:1000", "--out", s(&cert)]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert_eq!(v["solutions"].as_array().unwrap().len(), 8);
    let o = lacuna(&["verify", "--operator", s(&op), s(&cert)]);
    assert_eq!(o.status.code(), Some(0));

    let o = lacuna(&["split", "--operator", s(&op), "--sequence", s(&seq), "--window", "0:1000", "--max-pieces", "3"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["k"], 3);
}

#[test]
fn split_without_cuts_exits_two() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let seq = dir.path().join("zero.json");
    std::fs::write(&seq, r#"{"kind": "periodic", "period": 1, "values": ["0/1"], "offset": 0}"#).unwrap();
    let o = lacuna(&["split", "--operator", s(&op), "--sequence", s(&seq), "--window", "-10:10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("no_cuts"));
}

#[test]
fn kernel_output_verifies_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for name in ["example1_r1", "example1_r3", "fibonacci", "zero_r1"] {
        let op = export(&dir, name, "operator");
        let a = lacuna(&["kernel", "--operator", s(&op), "--window", "-7:20"]);
        let b = lacuna(&["kernel", "--operator", s(&op), "--window", "-7:20"]);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout);
        let k = dir.path().join(format!("{name}.kernel.json"));
        std::fs::write(&k, &a.stdout).unwrap();
        let o = lacuna(&["verify", "--operator", s(&op), s(&k)]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(stdout(&o).contains("kernel_basis"));
    }
}

#[test]
fn build_output_verifies() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let out = dir.path().join("build.json");
    let o = lacuna(&["build", "--operator", s(&op), "--gap", "20", "--budget", "200", "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(0));
    let o = lacuna(&["verify", "--operator", s(&op), s(&out), "--format", "text"]);
    assert_eq!(stdout(&o), "verified partial_lacunary_solution\n");
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let o = lacuna(&["certify", "--operator", s(&op), "--k", "3", "--budget", "50"]);
    let mut v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    // a singleton at a multiple of 3 violates the equation at its own index
    v["solutions"][0] = serde_json::json!({"anchor": 0, "values": ["1/1"]});
    let text = v.to_string();
    let cert = dir.path().join("bad.json");
    std::fs::write(&cert, text).unwrap();
    let o = lacuna(&["verify", "--operator", s(&op), s(&cert)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("VerificationFailure"));
}

#[test]
fn check_reports_first_failing_equation() {
    let dir = TempDir::new().unwrap();
    let op = export(&dir, "example1_r2", "operator");
    let seq = export(&dir, "example1_r2", "sequence");
    let o = lacuna(&["check", "--operator", s(&op), "--sequence", s(&seq), "--window", "-5:1000"]);
    assert_eq!(o.status.code(), Some(0));
    let ones = dir.path().join("ones.json");
    std::fs::write(&ones, r#"{"kind": "periodic", "period": 1, "values": ["1"], "offset": 0}"#).unwrap();
    let o = lacuna(&["check", "--operator", s(&op), "--sequence", s(&ones), "--window", "0:10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("NotASolutionOnWindow"));
}

#[test]
fn parse_errors_report_position() {
    let dir = TempDir::new().unwrap();
    let op = dir.path().join("op.json");
    std::fs::write(&op, "{\n  \"order\": 1,\n  \"coeffs\": [\n    oops\n  ]\n}\n").unwrap();
    let o = lacuna(&["kernel", "--operator", s(&op), "--window", "0:4"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("ParseError") && err.contains("line 4 column 5"), "{err}");
}

#[test]
fn bad_arguments_are_rejected() {
    assert_eq!(lacuna(&["kernel", "--operator", "x", "--window", "5:1"]).status.code(), Some(1));
    assert_eq!(lacuna(&["certify", "--operator", "x", "--k", "0"]).status.code(), Some(1));
    assert_eq!(lacuna(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(lacuna(&["--help"]).status.code(), Some(0));
    let o = lacuna(&["corpus", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corpus_manifest_and_checks() {
    let o = lacuna(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let names: Vec<&str> = v.as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["example1_r1", "example1_r2", "example1_r3", "fibonacci", "zero_r1"]);
    let o = lacuna(&["corpus", "zero_r1", "--check", "--format", "text"]);
    assert_eq!(stdout(&o), "zero_r1: 5 facts hold\n");
    assert_eq!(lacuna(&["corpus", "fibonacci", "--part", "sequence"]).status.code(), Some(1));
}
