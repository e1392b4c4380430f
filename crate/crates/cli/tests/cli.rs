use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_agconorm"))
}

fn job(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/jobs").join(name)
}

fn json(out: &std::process::Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn run_gs_job_passes_and_emits_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().arg("run").arg(job("gs-quadratic.json")).arg("--emit-matrices").arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["report"]["conorm"]["n"], 5);
    assert_eq!(v["report"]["conorm"]["k"], 4);
    assert_eq!(v["passed"], true);
    let m = std::fs::read_to_string(dir.path().join("conorm.txt")).unwrap();
    assert_eq!(m.lines().count(), 4);
    assert!(m.lines().all(|l| l.split(' ').count() == 5));
}

#[test]
fn failed_expectation_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(job("gs-quadratic.json")).unwrap().replace("\"k\": 4", "\"k\": 5");
    let path = dir.path().join("job.json");
    std::fs::write(&path, text).unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"field\": ").unwrap();
    assert_eq!(bin().arg("run").arg(&path).output().unwrap().status.code(), Some(2));
    std::fs::write(&path, r#"{"field": {"p": 4}, "extension": [], "base_code": {"D": []}}"#).unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/field"));
    assert_eq!(bin().arg("run").arg(dir.path().join("missing.json")).output().unwrap().status.code(), Some(2));
    assert_eq!(bin().args(["examples", "no-such-example"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn registry_example_passes() {
    let out = bin().args(["examples", "hermitian-q4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v[0]["name"], "hermitian-q4");
    assert_eq!(v[0]["passed"], true);
}

#[test]
fn reports_are_deterministic() {
    let run = || {
        let mut v = json(&bin().arg("run").arg(job("wulftange-tower.json")).output().unwrap());
        v["elapsed_ms"] = 0.into();
        v
    };
    assert_eq!(run(), run());
}

#[test]
fn hermitian_params_and_matrix() {
    let out = bin().args(["hermitian", "--q", "4", "--a", "48"]).output().unwrap();
    let v = json(&out);
    assert_eq!((v["n"].as_u64(), v["k"].as_u64(), v["dual_index"].as_i64()), (Some(64), Some(43), Some(26)));
    let out = bin().args(["hermitian", "--q", "3", "--a", "4", "--emit", "matrix"]).output().unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 3);
    assert_eq!(bin().args(["hermitian", "--q", "6", "--a", "1"]).output().unwrap().status.code(), Some(2));
}

#[test]
fn field_table() {
    let v = json(&bin().args(["field", "--p", "2", "--k", "2", "--table"]).output().unwrap());
    assert_eq!(v["order"], 4);
    assert_eq!(v["mul"][2][2], 3);
    assert_eq!(v["add"][1][1], 0);
}
