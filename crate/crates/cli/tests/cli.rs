//! End-to-end checks of the installed binary: exit codes, certificate
//! round-trips, deterministic output, and rejection of tampered certificates.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_coxcert"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("coxcert-test-{}-{}", std::process::id(), name));
    p
}

#[test]
fn sigma_verify_round_trip() {
    let path = tmp("a2.json");
    let gen = run(&["sigma", "A2", "--i0", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0), "generation: {gen:?}");

    let ver = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(ver.status.code(), Some(0), "verification: {ver:?}");
    let out = String::from_utf8(ver.stdout).unwrap();
    assert!(out.contains("OK"), "report ends with OK: {out}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn perturbed_coefficient_is_rejected() {
    let path = tmp("a2-bad.json");
    let gen = run(&["sigma", "A2", "--i0", "2", "--out", path.to_str().unwrap()]);
    assert_eq!(gen.status.code(), Some(0));

    // Bump one m-coefficient by 1; the verifier must name the basis element.
    let text = std::fs::read_to_string(&path).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let m = doc["mcoeffs"].as_array_mut().unwrap();
    let old: i64 = m[0][2].as_str().unwrap().parse().unwrap();
    let source = m[0][0].as_str().unwrap().to_string();
    m[0][2] = serde_json::Value::String((old + 1).to_string());
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();

    let ver = run(&["verify", path.to_str().unwrap()]);
    assert_eq!(ver.status.code(), Some(1), "tampered cert must fail: {ver:?}");
    let err = String::from_utf8(ver.stderr).unwrap();
    assert!(err.contains("FAIL"), "failure banner: {err}");
    assert!(err.contains(&source), "names the failing basis element: {err}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn equivalence_certificates_round_trip() {
    for (name, args) in [
        ("h17", vec!["hecke-thm17", "A2", "--i0", "1"]),
        ("t20", vec!["bn-thm20", "GL2(2)"]),
        ("t9", vec!["bn-thm9", "SL2(3)"]),
    ] {
        let path = tmp(&format!("{name}.json"));
        let mut full = args.clone();
        full.extend(["--out", path.to_str().unwrap()]);
        let gen = run(&full);
        assert_eq!(gen.status.code(), Some(0), "{name} generation: {gen:?}");
        let ver = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(ver.status.code(), Some(0), "{name} verification: {ver:?}");
        std::fs::remove_file(&path).ok();
    }
}

#[test]
fn identical_configs_give_identical_bytes() {
    let (p1, p2) = (tmp("det1.json"), tmp("det2.json"));
    for p in [&p1, &p2] {
        let gen = run(&["sigma", "A3", "--i0", "1,3", "--out", p.to_str().unwrap()]);
        assert_eq!(gen.status.code(), Some(0));
    }
    let (b1, b2) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert_eq!(b1, b2, "same RunConfig must serialize identically");
    std::fs::remove_file(&p1).ok();
    std::fs::remove_file(&p2).ok();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["sigma", "Z9"]).status.code(), Some(2), "unknown group");
    assert_eq!(run(&["sigma", "A2", "--i0", "7"]).status.code(), Some(2), "i0 out of range");
    assert_eq!(run(&["sigma", "A2", "--i0", "1,2"]).status.code(), Some(2), "i0 = S rejected");
    assert_eq!(run(&["sigma", "A2", "--order", "1,1"]).status.code(), Some(2), "bad permutation");
    assert_eq!(run(&["verify", "/no/such/file.json"]).status.code(), Some(2), "missing file");
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2), "unknown subcommand");
    assert_eq!(run(&["bn-thm20", "GL9(2)"]).status.code(), Some(2), "group out of guard");
}

#[test]
fn truncated_certificate_is_malformed_not_failed() {
    let path = tmp("trunc.json");
    std::fs::write(&path, "{\"kind\": \"contraction\"").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&path, "{\"kind\": \"contraction\"}").unwrap();
    assert_eq!(run(&["verify", path.to_str().unwrap()]).status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn homology_dispatches_on_target_kind() {
    let cox = run(&["homology", "B2"]);
    assert_eq!(cox.status.code(), Some(0));
    let out = String::from_utf8(cox.stdout).unwrap();
    assert!(out.contains("degree 0: Z"), "Coxeter complex homology: {out}");

    let grp = run(&["homology", "SL2(3)"]);
    assert_eq!(grp.status.code(), Some(0));
    let out = String::from_utf8(grp.stdout).unwrap();
    assert!(out.contains("Z^3"), "Steinberg homology rank |U| = 3: {out}");
}
