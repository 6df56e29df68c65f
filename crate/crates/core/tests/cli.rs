use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const N3: &str = r#"{"tau":[0,1],"n":3,"t":[[0.12,0.21],[0.55,0.47],[0.31,0.83]],"c0":[0.15,0.05],
 "c":[[0.3,0.1],[0.25,-0.05],[-0.55,-0.05]],"lambda":[0.37,0.62]}"#;

fn write_config(name: &str, text: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn rwkit(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rwkit")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, text) = rwkit(args);
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

#[test]
fn monodromy_is_a_matrix_of_canonical_strings() {
    let (code, v) = json(&["homology", "monodromy", "1", "2", "--n", "3"]);
    assert_eq!(code, 0);
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 3);
    assert_eq!(m[0][0], "x1 * x2");
    assert_eq!(m[1], serde_json::json!(["0", "1", "0"]));
}

#[test]
fn off_diagonal_psi_pair_vanishes() {
    let cfg = write_config("pair.json", N3);
    let (code, v) = json(&["cohomology", "pair", "--a", "psi:1", "--b", "psi:2", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], serde_json::json!([0.0, 0.0]));
    assert_eq!(v["passed"], true);
    let cinf = v["config"]["c_inf"].as_array().unwrap();
    assert_eq!(cinf.len(), 2);
}

#[test]
fn verify_all_passes_with_many_identities() {
    let cfg = write_config("all.json", N3);
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("all_report.json");
    let (code, text) = rwkit(&["verify", "all", "--config", cfg.to_str().unwrap(), "--json", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{text}");
    let lines: Vec<&str> = text.lines().filter(|l| l.trim_start().starts_with("PASS")).collect();
    assert!(lines.len() >= 20);
    assert!(!text.contains("FAIL"));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["criteria"].as_array().unwrap().len(), 10);
    assert_eq!(v["passed"], true);
}

#[test]
fn output_is_byte_stable() {
    let cfg = write_config("stable.json", N3);
    let args = ["cohomology", "contiguity", "2", "3", "--config", cfg.to_str().unwrap()];
    let (a, b) = (rwkit(&args), rwkit(&args));
    assert_eq!(a, b);
    // keys come out sorted
    let keys: Vec<String> = serde_json::from_str::<serde_json::Map<String, Value>>(&a.1).unwrap().keys().cloned().collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
}

#[test]
fn exit_codes() {
    let bad_sum = write_config("bad_sum.json", &N3.replace("[-0.55,-0.05]", "[-0.54,-0.05]"));
    let (code, v) = json(&["cohomology", "verify", "--config", bad_sum.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["name"], "InvariantViolation");
    assert_eq!(v["error"]["message"], "invariant violated: sum of c");

    let (code, v) = json(&["pair", "verify-contiguity", "2", "1"]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["name"], "ShiftBreaksConvergence");

    let (code, _) = rwkit(&["homology", "matrix", "--which", "nope", "--n", "3"]);
    assert_eq!(code, 3);
    let (code, _) = rwkit(&["no-such-command"]);
    assert_eq!(code, 3);

    let (code, _) = json(&["pair", "integrate", "--tol=-1"]);
    assert_eq!(code, 3);
}

#[test]
fn integrate_reports_value_residual_and_levels() {
    let cfg = write_config("int.json", N3);
    let (code, v) = json(&["pair", "integrate", "--path", "1,2", "--phi", "psi:3", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(v["value"][0].as_f64().unwrap().is_finite());
    assert!(v["residual"].as_f64().unwrap() < 1e-8);
    assert!(v["levels"].as_u64().unwrap() >= 7);

    let (code, v) = json(&["pair", "integrate", "--path", "1,2", "--phi", "dpsi:1", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code, 4);
    assert_eq!(v["error"]["name"], "DivergentEndpoint");
}

#[test]
fn theta_eval_matches_reference() {
    let (code, v) = json(&["theta", "eval", "--u", "0.25", "--tau", "0,1"]);
    assert_eq!(code, 0);
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - 0.643_589_764_038_585_9).abs() < 1e-14);
}
