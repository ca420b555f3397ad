use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_schmidt-norms"));
    c.env_remove("SCHMIDT_NORMS_SEED");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn fixture(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let mut full = vec!["fixtures", "emit", name];
    full.extend_from_slice(args);
    let out = run(&full);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn example_minorder_value() {
    let dir = TempDir::new().unwrap();
    let ex = fixture(dir.path(), "example51", &[]);
    let out = run(&["norm", "minorder", s(&ex), "--k", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["command"], "norm minorder");
    assert!((r["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(r["parameters"]["k"], 2);
    assert_eq!(r["inputs"]["operator"]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn swap_refutation_reproduces() {
    let dir = TempDir::new().unwrap();
    let sw = fixture(dir.path(), "swap", &[]);
    let out = run(&["cone", "blockpos", s(&sw), "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert_eq!(r["result"]["status"], "refuted");
    let rep = dir.path().join("blockpos.json");
    std::fs::write(&rep, &out.stdout).unwrap();

    let out = run(&["oracle", "expect", s(&sw), "--vector", s(&rep)]);
    assert_eq!(out.status.code(), Some(0));
    let e = report(&out);
    assert!((e["result"]["re"].as_f64().unwrap() + 1.0).abs() < 1e-6);

    let out = run(&["cone", "blockpos", s(&sw), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["status"], "heuristically-positive");
}

#[test]
fn identity_sk_norm() {
    let dir = TempDir::new().unwrap();
    let id = fixture(dir.path(), "identity", &[]);
    let out = run(&["norm", "sk", s(&id), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((report(&out)["result"]["value"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn norm_witness_reevaluates() {
    let dir = TempDir::new().unwrap();
    let ex = fixture(dir.path(), "example51", &[]);
    let out = run(&["norm", "sk", s(&ex), "--k", "1"]);
    let value = report(&out)["result"]["value"].as_f64().unwrap();
    let rep = dir.path().join("sk.json");
    std::fs::write(&rep, &out.stdout).unwrap();
    let e = report(&run(&["oracle", "expect", s(&ex), "--vector", s(&rep)]));
    assert!((e["result"]["abs"].as_f64().unwrap() - value).abs() < 1e-9);
}

#[test]
fn same_seed_same_result() {
    let dir = TempDir::new().unwrap();
    let ex = fixture(dir.path(), "example51", &[]);
    let a = report(&run(&["norm", "omin", s(&ex), "--k", "2", "--seed", "7"]));
    let b = report(&bin().args(["norm", "omin", s(&ex), "--k", "2"]).env("SCHMIDT_NORMS_SEED", "7").output().unwrap());
    assert_eq!(a["result"], b["result"]);
    assert_eq!(a["parameters"]["seed"], 7);
    let c = report(&run(&["--threads", "1", "norm", "omin", s(&ex), "--k", "2", "--seed", "7"]));
    assert_eq!(a["result"], c["result"]);
}

#[test]
fn isotropic_pipeline() {
    let dir = TempDir::new().unwrap();
    let rho = fixture(dir.path(), "isotropic", &["--f", "0.9"]);
    let w = fixture(dir.path(), "reduction-witness", &["--k", "1"]);
    let red = fixture(dir.path(), "reduction-map", &["--p", "1"]);

    let out = run(&["cone", "witness", "--witness", s(&w), "--state", s(&rho), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["result"]["valid"], true);

    let out = run(&["map", "detect", "--state", s(&rho), "--map", s(&red), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let r = report(&out);
    assert!(r["result"]["trace_norm"].as_f64().unwrap() > 1.0);
    let rep = dir.path().join("detect.json");
    std::fs::write(&rep, &out.stdout).unwrap();
    // the embedded witness sees the negative eigenvalue of (id ⊗ Φ)(ρ)
    let e = report(&run(&["oracle", "expect", s(&rho), "--vector", s(&rep), "--map", s(&rep)]));
    let min = r["result"]["min_eigenvalue"].as_f64().unwrap();
    assert!((e["result"]["re"].as_f64().unwrap() - min).abs() < 1e-9);

    let low = fixture(dir.path(), "isotropic", &["--f", "0.2"]);
    let out = run(&["cone", "witness", "--witness", s(&w), "--state", s(&low), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn ensemble_verification() {
    let dir = TempDir::new().unwrap();
    let ens = fixture(dir.path(), "basis-ensemble", &["--n", "2"]);
    // isotropic at F = 1/n² is the maximally mixed state
    let mixed = fixture(dir.path(), "isotropic", &["--n", "2", "--f", "0.25"]);
    let out = run(&["cone", "verify-sn", "--state", s(&mixed), "--ensemble", s(&ens)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["result"]["verified"], true);

    let rho = dir.path().join("rho.json");
    std::fs::write(&rho, run(&["fixtures", "emit", "isotropic", "--n", "2"]).stdout).unwrap();
    let out = run(&["cone", "verify-sn", "--state", s(&rho), "--ensemble", s(&ens)]);
    assert_eq!(report(&out)["result"]["verified"], false);

    let id = fixture(dir.path(), "identity", &["--n", "2"]);
    let out = run(&["cone", "verify-sn", "--state", s(&id), "--ensemble", s(&ens)]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn map_commands() {
    let dir = TempDir::new().unwrap();
    let t = fixture(dir.path(), "transpose-map", &[]);
    let r = report(&run(&["map", "idk-norm", s(&t), "--k", "2"]));
    assert!((r["result"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-6);
    let out = run(&["map", "kpos", s(&t), "--k", "1"]);
    assert_eq!(out.status.code(), Some(0));
    // not completely positive
    assert_eq!(run(&["map", "kpeb", s(&t), "--k", "1"]).status.code(), Some(1));
    let id = fixture(dir.path(), "identity-map", &[]);
    let out = run(&["map", "kpeb", s(&id), "--k", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["result"]["valid"], true);
    let dep = fixture(dir.path(), "depolarizing-map", &[]);
    assert_eq!(run(&["map", "kpeb", s(&dep), "--k", "1"]).status.code(), Some(0));
    let out = run(&["oracle", "idk-norm", s(&t), "--k", "2", "--samples", "200"]);
    assert!((report(&out)["result"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-3);
}

#[test]
fn malformed_input_exits_one() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"rows": 2, "cols": 2, "re": [[1, 0], [0, 1]], "im": [[0, 0], [0, "x"]]}"#).unwrap();
    let out = run(&["norm", "sk", s(&bad)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("im[1][1]"));

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["norm", "sk", s(&bad)]).status.code(), Some(1));
    assert_eq!(run(&["norm", "sk", "/nonexistent.json"]).status.code(), Some(1));
    assert_eq!(run(&["norm", "frobnicate"]).status.code(), Some(1));

    let ex = fixture(dir.path(), "example51", &[]);
    let out = run(&["norm", "sk", s(&ex), "--k", "4"]);
    assert_eq!(out.status.code(), Some(1));
}
