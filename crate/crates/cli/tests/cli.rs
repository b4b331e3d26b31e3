use std::process::{Command, Output};

use serde_json::Value;

fn ssg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ssg")).args(args).output().expect("run ssg")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

#[test]
fn table_prints_exponent_rows() {
    let out = ssg(&["table", "--gmax", "6"]);
    assert!(out.status.success());
    let rows = json(&out);
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[1]["alg1_classical"], 1.0);
    assert_eq!(rows[5]["grover_bjs"], 4.25);
}

#[test]
fn hunt_finds_a_product() {
    let out = ssg(&["hunt", "--p", "127", "--seed", "1", "--workers", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!(v["steps_done"].as_u64().unwrap() > 0);
    assert!(v["product_node"].as_str().unwrap().starts_with("P:"));
    // deterministic
    assert_eq!(v, json(&ssg(&["hunt", "--p", "127", "--seed", "1", "--workers", "1"])));
}

#[test]
fn census_small_prime() {
    let v = json(&ssg(&["census", "--p", "11"]));
    assert_eq!(v["vertices"], 5);
    assert_eq!(v["mass"], "61/288");
    assert_eq!(v["mass"], v["mass_formula"]);
}

#[test]
fn attack_then_verify_and_tamper() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let out = ssg(&["attack", "--p", "127", "--seed-a", "x", "--seed-b", "y", "--out", cert_s]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let ok = ssg(&["verify", "--cert", cert_s]);
    assert!(ok.status.success());
    assert_eq!(json(&ok)["valid"], true);

    let mut c: Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let steps = c["steps"].as_array_mut().unwrap();
    let i = steps.iter().position(|s| s["kind"] == "richelot").unwrap();
    let k = &mut steps[i]["kernel"];
    *k = if *k == serde_json::json!([[0, 1], [2, 3], [4, 5]]) {
        serde_json::json!([[0, 2], [1, 3], [4, 5]])
    } else {
        serde_json::json!([[0, 1], [2, 3], [4, 5]])
    };
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&c).unwrap()).unwrap();
    let out = ssg(&["verify", "--cert", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains(&format!("step {i}")));
}

#[test]
fn exit_codes() {
    assert_eq!(ssg(&["census", "--p", "12"]).status.code(), Some(2));
    assert_eq!(ssg(&["census", "--p", "127"]).status.code(), Some(4));
    assert_eq!(ssg(&["hash", "cgl", "--p", "127", "--msg", "xyz"]).status.code(), Some(2));
    assert_eq!(ssg(&["verify", "--cert", "/nonexistent/cert.json"]).status.code(), Some(2));
    let budget = ssg(&["hunt", "--p", "8191", "--seed", "1", "--max-steps", "5"]);
    assert_eq!(budget.status.code(), Some(4));
    let env_budget = Command::new(env!("CARGO_BIN_EXE_ssg"))
        .args(["hunt", "--p", "8191", "--seed", "1"])
        .env("SSG_MAX_STEPS", "5")
        .output()
        .unwrap();
    assert_eq!(env_budget.status.code(), Some(4));
}

#[test]
fn bottom_exit_code_without_parity_retries() {
    // some seed pair has mismatched parities; without retries that is bottom
    let code = (0..20)
        .map(|t| {
            ssg(&[
                "attack",
                "--p",
                "127",
                "--seed-a",
                &format!("a{t}"),
                "--seed-b",
                &format!("b{t}"),
                "--parity-retries",
                "0",
            ])
            .status
            .code()
        })
        .find(|c| *c != Some(0));
    assert_eq!(code, Some(Some(3)));
}

#[test]
fn hashes_are_deterministic() {
    for kind in ["cgl", "cds"] {
        let a = json(&ssg(&["hash", kind, "--p", "127", "--msg", "deadbeef"]));
        let b = json(&ssg(&["hash", kind, "--p", "127", "--msg", "deadbeef"]));
        assert_eq!(a, b);
    }
}

#[test]
fn cycles_and_mix() {
    let v = json(&ssg(&["cycles", "--p", "127"]));
    assert!(v["counts"]["4"].as_u64().unwrap() > 0);
    let out = ssg(&["mix", "--p", "11", "--len", "20", "--trials", "2000"]);
    assert!(out.status.success());
    assert_eq!(json(&out)["vertices"], 5);
}
