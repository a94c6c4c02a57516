use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn qik(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qik"))
        .args(args)
        .env_remove("QIK_DEFAULT_TOL")
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p
}

const EX1: &str = r#"{"rows":2,"cols":2,"data":[[-1,0],[-1,0],[3,0],[2,0]],"exact":true}"#;
const EX2: &str = r#"{"rows":3,"cols":3,"data":[[1,0],[0,0],[1,0],[0,0],[1,0],[0,0],[0,0],[0,0],[1,0]]}"#;

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn check_exact_golden_case() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "ex1.json", EX1);
    let m = m.to_str().unwrap();

    // The 3-quasi defect equals Λ1(T) because T³ = −I, so it is not zero.
    let out = qik(&["check", "--matrix", m, "--conj", "flip", "--m", "1", "--n", "3", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["result"]["path"], "exact");
    assert_eq!(v["result"]["verdict"], false);
    let data: Vec<[f64; 2]> = serde_json::from_value(v["result"]["defect"]["data"].clone()).unwrap();
    assert_eq!(data, vec![[-6.0, 0.0], [-6.0, 0.0], [-4.0, 0.0], [-6.0, 0.0]]);

    let out = qik(&["check", "--matrix", m, "--conj", "flip", "--m", "1", "--n", "1", "--format", "json"]);
    let v = json_of(&out);
    let data: Vec<[f64; 2]> = serde_json::from_value(v["result"]["defect"]["data"].clone()).unwrap();
    assert_eq!(data, vec![[-30.0, 0.0], [-18.0, 0.0], [-16.0, 0.0], [-10.0, 0.0]]);
}

#[test]
fn check_true_verdict_exits_zero() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "ex2.json", EX2);
    let out = qik(&["check", "--matrix", m.to_str().unwrap(), "--conj", "flip", "--m", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verdict                true"));
}

#[test]
fn classify_finds_minimal_pair() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "ex2.json", EX2);
    let m = m.to_str().unwrap();
    for (conj, pair) in [("flip", [2, 0]), ("entrywise", [3, 0])] {
        let out = qik(&["classify", "--matrix", m, "--conj", conj, "--mmax", "4", "--nmax", "3", "--format", "json"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json_of(&out);
        assert_eq!(v["result"]["minimal_pairs"], serde_json::json!([pair]));
    }
}

#[test]
fn verify_th27_passes() {
    let out = qik(&["verify", "--theorem", "th27", "--trials", "200", "--seed", "7", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let s = &v["result"][0]["summary"];
    assert_eq!(s["passed"], 200);
    assert_eq!(s["trials"], 200);
}

#[test]
fn verify_list_names_every_suite() {
    let out = qik(&["verify", "--list"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for id in ["th21", "th28", "pro21", "pro25", "lem21", "lem24", "cor21", "cor23"] {
        assert!(text.contains(id), "{id} missing from --list");
    }
}

#[test]
fn reports_are_bit_identical_and_carry_policy() {
    let dir = TempDir::new().unwrap();
    let args = |out: &str| {
        vec![
            "verify".to_string(),
            "--theorem".into(),
            "th25".into(),
            "--trials".into(),
            "20".into(),
            "--seed".into(),
            "5".into(),
            "--out".into(),
            dir.path().join(out).to_str().unwrap().to_string(),
        ]
    };
    for name in ["a", "b"] {
        let a = args(name);
        let out = qik(&a.iter().map(String::as_str).collect::<Vec<_>>());
        assert_eq!(out.status.code(), Some(0));
    }
    for file in ["report.json", "report.txt"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        let b = fs::read(dir.path().join("b").join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical jobs");
    }
    let v: Value = serde_json::from_slice(&fs::read(dir.path().join("a/report.json")).unwrap()).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["tolerance"]["rel_zero"], 1e-9);
    let trials: Vec<u64> = v["result"][0]["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["trial"].as_u64().unwrap())
        .collect();
    assert_eq!(trials, (0..20).collect::<Vec<_>>());
}

#[test]
fn env_tolerance_and_flag_override() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "ex2.json", EX2);
    let m = m.to_str().unwrap();
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut c = Command::new(env!("CARGO_BIN_EXE_qik"));
        c.args(["spectrum", "--matrix", m, "--format", "json"]).args(extra);
        match env {
            Some(v) => c.env("QIK_DEFAULT_TOL", v),
            None => c.env_remove("QIK_DEFAULT_TOL"),
        };
        c.output().unwrap()
    };
    let v = json_of(&run(Some("1e-7"), &[]));
    assert_eq!(v["tolerance"]["rel_zero"], 1e-7);
    let v = json_of(&run(Some("1e-7"), &["--tol-rel", "1e-6"]));
    assert_eq!(v["tolerance"]["rel_zero"], 1e-6);
    assert_eq!(run(Some("abc"), &[]).status.code(), Some(2));
}

#[test]
fn bad_inputs_exit_two() {
    let dir = TempDir::new().unwrap();
    let ex1 = write(dir.path(), "ex1.json", EX1);
    let ex1 = ex1.to_str().unwrap();
    let short = write(dir.path(), "short.json", r#"{"rows":2,"cols":2,"data":[[1,0]]}"#);
    let garbage = write(dir.path(), "garbage.json", "not json");
    let bad_conj = write(
        dir.path(),
        "c.json",
        r#"{"kind":"custom","dim":2,"symbol":[[0,0],[1,0],[-1,0],[0,0]]}"#,
    );
    let bad_conj = format!("custom:{}", bad_conj.display());

    let out = qik(&["check", "--matrix", short.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qik(&["check", "--matrix", garbage.to_str().unwrap(), "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qik(&["check", "--matrix", ex1, "--conj", &bad_conj, "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("involution") && err.contains("2.828427"), "{err}");
    // Missing flag is caught before any file is read.
    let out = qik(&["check", "--matrix", "/nonexistent.json"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--m"));
    assert_eq!(out.status.code(), Some(2));
    let out = qik(&["verify", "--theorem", "th99"]);
    assert_eq!(out.status.code(), Some(2));
    // A flip conjugation of the wrong size cannot arise, but a custom one can.
    let c3 = write(dir.path(), "c3.json", r#"{"kind":"flip","dim":3}"#);
    let out = qik(&["check", "--matrix", ex1, "--conj", &format!("custom:{}", c3.display()), "--m", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_verifies_structure_of_constructed_instance() {
    let dir = TempDir::new().unwrap();
    let inst = dir.path().join("inst");
    let out = qik(&[
        "construct", "--kind", "assembled", "--m", "2", "--n", "2", "--dims", "3,2", "--seed", "9", "--out",
        inst.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let matrix = inst.join("matrix.json");
    let conj = format!("custom:{}", inst.join("conj.json").display());
    let out = qik(&[
        "decompose", "--matrix", matrix.to_str().unwrap(), "--conj", &conj, "--m", "2", "--n", "2", "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["result"]["rank"], 3);
    assert_eq!(v["result"]["structure"]["outcome"], "pass");

    let out = qik(&[
        "sequence", "--matrix", matrix.to_str().unwrap(), "--conj", &conj, "--m", "2", "--n", "2", "--seed", "1",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let out = qik(&["check", "--matrix", matrix.to_str().unwrap(), "--conj", &conj, "--m", "2", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn sequence_file_powers_of_two_fail_order_one() {
    let dir = TempDir::new().unwrap();
    let s = write(dir.path(), "s.json", "[[1,0],[2,0],[4,0],[8,0],[16,0],[32,0]]");
    let out = qik(&["sequence", "--sequence", s.to_str().unwrap(), "--m", "1", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(1));
    let p = write(dir.path(), "p.json", "[[1,0],[3,0],[5,0],[7,0],[9,0],[11,0]]");
    let out = qik(&["sequence", "--sequence", p.to_str().unwrap(), "--m", "2", "--horizon", "4"]);
    assert_eq!(out.status.code(), Some(0));
}
