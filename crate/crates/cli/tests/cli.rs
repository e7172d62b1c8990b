use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use lutrace::bloch::partial_trace;
use lutrace::io;
use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lutrace"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen(dir: &Path, kind: &str, dims: &str, seed: u64) -> PathBuf {
    let out = dir.join(format!("{kind}-{dims}-{seed}"));
    let o = run(&["gen", "--kind", kind, "--dims", dims, "--seed", &seed.to_string(), "--out", p(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

const BELL: &str = r#"{"dims":[2,2],"matrix":[
 [[0.5,0],[0,0],[0,0],[0.5,0]],
 [[0,0],[0,0],[0,0],[0,0]],
 [[0,0],[0,0],[0,0],[0,0]],
 [[0.5,0],[0,0],[0,0],[0.5,0]]]}"#;

fn check_json(a: &Path, b: &Path, extra: &[&str]) -> (i32, Value) {
    let mut args = vec!["check", "--a", p(a), "--b", p(b), "--json"];
    args.extend_from_slice(extra);
    let o = run(&args);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap_or(Value::Null);
    (code(&o), v)
}

#[test]
fn validate_accepts_bell_state() {
    let dir = TempDir::new().unwrap();
    let o = run(&["validate", p(&write(dir.path(), "bell.json", BELL))]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("valid"));
}

#[test]
fn validate_reports_trace_deviation() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"dims":[2],"matrix":[[[0.45,0],[0,0]],[[0,0],[0.45,0]]]}"#;
    let o = run(&["validate", p(&write(dir.path(), "t.json", text))]);
    assert_ne!(code(&o), 0);
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("trace is 0.9"), "{stdout}");
    assert!(stdout.contains("deviation 1.000e-1"), "{stdout}");
}

#[test]
fn validate_rejects_non_hermitian() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"dims":[2],"matrix":[[[0.5,0],[0.2,0]],[[0,0],[0.5,0]]]}"#;
    let o = run(&["validate", p(&write(dir.path(), "h.json", text))]);
    assert_ne!(code(&o), 0);
    assert!(String::from_utf8_lossy(&o.stdout).contains("not Hermitian"));
}

#[test]
fn malformed_input_exits_5() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"dims\": [2,");
    assert_eq!(code(&run(&["validate", p(&bad)])), 5);
    assert_eq!(code(&run(&["check", "--a", p(&bad), "--b", p(&bad)])), 5);
    assert_eq!(code(&run(&["check", "--a", "/nonexistent.json", "--b", p(&bad)])), 5);
    assert_eq!(code(&run(&["gen", "--kind", "random", "--dims", "1,2", "--out", p(dir.path())])), 5);
}

#[test]
fn extract_maximally_mixed_is_zero() {
    let dir = TempDir::new().unwrap();
    let text = r#"{"dims":[2,2],"matrix":[
      [[0.25,0],[0,0],[0,0],[0,0]],[[0,0],[0.25,0],[0,0],[0,0]],
      [[0,0],[0,0],[0.25,0],[0,0]],[[0,0],[0,0],[0,0],[0.25,0]]]}"#;
    let o = run(&["extract", p(&write(dir.path(), "mm.json", text)), "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for key in ["1", "2", "12"] {
        let data = v["tensors"][key]["data"].as_array().unwrap();
        assert!(data.iter().all(|x| x.as_f64().unwrap() == 0.0));
    }
    assert!(v["convention"]["basis"].as_str().unwrap().contains("Gell-Mann"));
}

#[test]
fn extract_bell_state_pattern() {
    let dir = TempDir::new().unwrap();
    let o = run(&["extract", p(&write(dir.path(), "bell.json", BELL)), "--json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["tensors"]["12"]["shape"], serde_json::json!([3, 3]));
    let data: Vec<f64> = v["tensors"]["12"]["data"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_f64().unwrap())
        .collect();
    let want = [2.0, 0.0, 0.0, 0.0, -2.0, 0.0, 0.0, 0.0, 2.0];
    for (g, w) in data.iter().zip(want) {
        assert!((g - w).abs() < 1e-12);
    }
}

#[test]
fn lu_pair_checks_consistent() {
    let dir = TempDir::new().unwrap();
    for dims in ["2,2", "2,3", "2,2,2"] {
        let d = gen(dir.path(), "lu-pair", dims, 7);
        assert!(d.join("unitaries.json").exists());
        let (c, v) = check_json(&d.join("a.json"), &d.join("b.json"), &[]);
        assert_eq!(c, 0, "{dims}: {v}");
        assert_eq!(v["overall"], "consistent-with-quasi-LU");
        assert_eq!(v["depth"], 4);
    }
}

#[test]
fn independent_pair_exits_2_with_witness() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "random", "2,2,2", 1).join("state.json");
    let b = gen(dir.path(), "random", "2,2,2", 2).join("state.json");
    let (c, v) = check_json(&a, &b, &[]);
    assert_eq!(c, 2);
    assert_eq!(v["overall"], "not-equivalent");
    let witnessed = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["verdict"] == "fail" && c.get("witness").is_some());
    assert!(witnessed, "{v}");
}

#[test]
fn bipartite_versus_tripartite_exits_4() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "random", "2,2", 1).join("state.json");
    let b = gen(dir.path(), "random", "2,2,2", 1).join("state.json");
    assert_eq!(code(&run(&["check", "--a", p(&a), "--b", p(&b)])), 4);
}

#[test]
fn zero_tensor_precondition_exits_3() {
    let dir = TempDir::new().unwrap();
    let bell = write(dir.path(), "bell.json", BELL);
    let (c, v) = check_json(&bell, &bell, &[]);
    assert_eq!(c, 3);
    assert_eq!(v["overall"], "inconclusive");
    assert!(!v["preconditions"].as_array().unwrap().is_empty());
}

#[test]
fn rep_files_give_identical_verdicts() {
    let dir = TempDir::new().unwrap();
    let lu = gen(dir.path(), "lu-pair", "2,2,2", 3);
    let x = gen(dir.path(), "random", "2,2,2", 4).join("state.json");
    for (a, b) in [(lu.join("a.json"), lu.join("b.json")), (lu.join("a.json"), x)] {
        let ra = dir.path().join("ra.json");
        let rb = dir.path().join("rb.json");
        assert_eq!(code(&run(&["extract", p(&a), "--out", p(&ra)])), 0);
        assert_eq!(code(&run(&["extract", p(&b), "--out", p(&rb)])), 0);
        let (c1, v1) = check_json(&a, &b, &[]);
        let (c2, v2) = check_json(&ra, &rb, &["--rep"]);
        assert_eq!(c1, c2);
        assert_eq!(v1, v2);
    }
}

#[test]
fn gen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    for kind in ["random", "lu-pair", "product"] {
        let x = gen(dir.path(), kind, "2,3", 11);
        let y = dir.path().join(format!("{kind}-again"));
        let o = run(&["gen", "--kind", kind, "--dims", "2,3", "--seed", "11", "--out", p(&y)]);
        assert_eq!(code(&o), 0);
        for entry in fs::read_dir(&x).unwrap() {
            let name = entry.unwrap().file_name();
            assert_eq!(fs::read(x.join(&name)).unwrap(), fs::read(y.join(&name)).unwrap());
        }
    }
}

#[test]
fn gen_rank_is_respected() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("r");
    let o = run(&["gen", "--kind", "random", "--dims", "2,2", "--seed", "1", "--rank", "1", "--out", p(&out)]);
    assert_eq!(code(&o), 0);
    let rho = io::read_state(&out.join("state.json")).unwrap();
    assert_eq!(rho.eigenvalues().iter().filter(|&&e| e > 1e-10).count(), 1);
}

#[test]
fn product_partial_trace_matches_factor() {
    let dir = TempDir::new().unwrap();
    let d = gen(dir.path(), "product", "2,2,2", 5);
    let rho = io::read_state(&d.join("state.json")).unwrap();
    let f2 = io::read_state(&d.join("factor2.json")).unwrap();
    assert_eq!(f2.dims(), &[2, 2]);
    assert!(partial_trace(&rho, 0).unwrap().max_abs_diff(&f2) < 1e-12);
}

#[test]
fn full_bound_is_printed_not_run() {
    let dir = TempDir::new().unwrap();
    let d = gen(dir.path(), "lu-pair", "2,2", 1);
    let (c, v) = check_json(&d.join("a.json"), &d.join("b.json"), &["--paper-bound"]);
    assert_eq!(c, 0);
    assert_eq!(v["bounds"][0]["max_word_len"], 576);
    assert_eq!(v["depth"], 4);
    let d = gen(dir.path(), "lu-pair", "2,2,2", 1);
    let o = run(&["check", "--a", p(&d.join("a.json")), "--b", p(&d.join("b.json")), "--paper-bound"]);
    assert!(String::from_utf8_lossy(&o.stdout).contains("length 4225"));
}

#[test]
fn options_are_honoured() {
    let dir = TempDir::new().unwrap();
    let d = gen(dir.path(), "lu-pair", "2,2,2", 2);
    let (a, b) = (d.join("a.json"), d.join("b.json"));
    let (c, v) = check_json(&a, &b, &["--choice", "3312", "--mode", "fallback", "--qubit-det", "off", "--max-word-len", "2"]);
    assert_eq!(c, 0);
    assert_eq!(v["depth"], 2);
    let choices: Vec<&str> = v["criteria"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|c| c["choice"].as_str())
        .collect();
    assert!(choices.iter().all(|&c| c == "(3,3,1,2)"));
    let det = v["criteria"].as_array().unwrap().iter().find(|c| c["id"] == "6").unwrap();
    assert_eq!(det["verdict"], "not-applicable");
    assert_eq!(code(&run(&["check", "--a", p(&a), "--b", p(&b), "--choice", "1234"])), 5);
}

#[test]
fn thread_override_does_not_change_output() {
    let dir = TempDir::new().unwrap();
    let a = gen(dir.path(), "random", "2,2,2", 8).join("state.json");
    let b = gen(dir.path(), "random", "2,2,2", 9).join("state.json");
    let args = ["check", "--a", p(&a), "--b", p(&b), "--json"];
    let one = bin().env("LUTRACE_THREADS", "1").args(args).output().unwrap();
    let many = bin().env("LUTRACE_THREADS", "4").args(args).output().unwrap();
    assert_eq!(one.stdout, many.stdout);
    assert_eq!(one.status.code(), many.status.code());
}
