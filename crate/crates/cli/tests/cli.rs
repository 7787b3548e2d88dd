use std::path::PathBuf;
use std::process::{Command, Output};

fn sptc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sptc")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sptc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn field_show_gf4_matrices() {
    let out = sptc(&["field", "show", "--s", "2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for block in ["0 0\n  0 0", "1 0\n  0 1", "0 1\n  1 1", "1 1\n  1 0"] {
        assert!(text.contains(block), "missing {block:?} in {text}");
    }
}

#[test]
fn build_verify_round_trip() {
    let code = scratch("ers.json");
    let family = scratch("ers-sptc.json");
    let code_s = code.to_str().unwrap();
    let family_s = family.to_str().unwrap();
    assert!(sptc(&["code", "build", "--family", "ers", "--s", "3", "--r", "2", "--out", code_s]).status.success());
    let md = sptc(&["code", "mindist", "--in", code_s]);
    assert!(md.status.success());
    let report: serde_json::Value = serde_json::from_slice(&md.stdout).unwrap();
    assert_eq!(report["d"], 6);
    assert!(sptc(&["sptc", "build", "--code", code_s, "--out", family_s]).status.success());
    let a = sptc(&["sptc", "verify", "--in", family_s, "--exhaustive", "--workers", "1"]);
    let b = sptc(&["sptc", "verify", "--in", family_s, "--workers", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["max_fraction"], "1/3");
    assert_eq!(report["bound"], "1/3");
    assert_eq!(report["identification"], "self_dual");
}

#[test]
fn appendix_c_verify_and_budget() {
    let family = scratch("ac.json");
    let family_s = family.to_str().unwrap();
    assert!(sptc(&["sptc", "build", "--code", "appendix-c", "--out", family_s]).status.success());
    let ok = sptc(&["sptc", "verify", "--in", family_s, "--exhaustive"]);
    assert_eq!(ok.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(report["max_fraction"], "3/5");
    assert_eq!(report["holds"], true);
    let over = sptc(&["sptc", "verify", "--in", family_s, "--budget", "100"]);
    assert_eq!(over.status.code(), Some(3));
    let sampled = sptc(&["sptc", "verify", "--in", family_s, "--samples", "500", "--seed", "4"]);
    assert_eq!(sampled.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&sampled.stdout).unwrap();
    assert_eq!(report["approximate"], true);
    assert_eq!(report["seed"], 4);
}

#[test]
fn tampered_document_is_rejected() {
    let family = scratch("tampered.json");
    let family_s = family.to_str().unwrap();
    assert!(sptc(&["sptc", "build", "--code", "appendix-c", "--out", family_s]).status.success());
    let text = std::fs::read_to_string(&family).unwrap().replace("\"3/5\"", "\"1/5\"");
    std::fs::write(&family, text).unwrap();
    assert_eq!(sptc(&["sptc", "verify", "--in", family_s]).status.code(), Some(1));
}

#[test]
fn simulations_are_seeded() {
    let family = scratch("sim.json");
    let family_s = family.to_str().unwrap();
    assert!(sptc(&["sptc", "build", "--code", "appendix-c", "--out", family_s]).status.success());
    let run = |seed: &str| {
        sptc(&["qas", "simulate", "--sptc", family_s, "--error-spec", "Z1", "--seed", seed, "--sessions", "5000"])
    };
    let a = run("9");
    assert!(a.status.success());
    assert_eq!(a.stdout, run("9").stdout);
    let report: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(report["scope"], "pauli-adversary");
    assert_eq!(report["results"][0]["error"], "0:8");
    let exact = sptc(&["ptp", "simulate", "--sptc", family_s, "--error", "0:8,XIII", "--exact"]);
    assert!(exact.status.success());
    let report: serde_json::Value = serde_json::from_slice(&exact.stdout).unwrap();
    assert_eq!(report["mode"], "exact");
    assert_eq!(report["results"][1]["forgery"], "2/5");
}

#[test]
fn planner_commands() {
    let out = sptc(&["qas", "plan", "--family", "ovoid", "--s", "15", "--qubits", "100000", "--format", "json"]);
    assert!(out.status.success());
    let plan: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(plan["key_bits_total"], 506_616);
    let table = stdout(&sptc(&["qas", "table", "--preset", "table1"]));
    assert_eq!(table.lines().count(), 13);
    assert!(table.contains("99900"));
    let fig = stdout(&sptc(&["gepp", "fig1", "--s-max", "40"]));
    assert_eq!(fig.lines().count(), 81);
    let params = sptc(&["gepp", "params", "--family", "ers", "--s", "3", "--r", "2", "--eps-in", "1/10", "--dcs"]);
    let v: serde_json::Value = serde_json::from_slice(&params.stdout).unwrap();
    assert_eq!(v["K"], "2^7");
    assert_eq!(v["delta"], "10/27");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(sptc(&["nonsense"]).status.code(), Some(1));
    assert_eq!(sptc(&["qas", "table", "--preset", "table9"]).status.code(), Some(1));
    assert_eq!(sptc(&["code", "build", "--family", "ers", "--s", "2"]).status.code(), Some(1));
    assert_eq!(sptc(&["gepp", "params", "--family", "ers", "--s", "3", "--r", "2", "--eps-in", "1"]).status.code(), Some(1));
    assert_eq!(sptc(&["--help"]).status.code(), Some(0));
}
