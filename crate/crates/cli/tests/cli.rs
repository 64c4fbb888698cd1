use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "data", name].iter().collect();
    p.display().to_string()
}

fn ffp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ffp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn carlitz_table_ends_in_zero() {
    let o = ffp(&["carlitz", "--q", "2", "--max-degree", "2", "--depth", "2", "--format", "table"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("total: 0·log q"), "{out}");
    assert!(out.contains("t^2 + t + 1"));
}

#[test]
fn carlitz_rejects_non_prime_power() {
    let o = ffp(&["carlitz", "--q", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prime power"));
}

#[test]
fn carlitz_json_fields() {
    let o = ffp(&["carlitz", "--q", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total"], "0");
    assert_eq!(v["schema"], "1");
    assert_eq!(v["infty"]["log_abs"], "3/2");
    assert!(v["regularization"].is_object());
    let places = v["places"].as_array().unwrap();
    // Three places of degree 1 and three of degree 2 over F_3.
    assert_eq!(places.len(), 6);
    assert!(places.iter().all(|p| p["matches_local_factor"] == true && p["hat_order"] == 1));
}

#[test]
fn carlitz_output_is_deterministic() {
    let a = ffp(&["carlitz", "--q", "4", "--max-degree", "1", "--format", "json"]);
    let b = ffp(&["carlitz", "--q", "4", "--max-degree", "1", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn omega_ramified_pair() {
    let o = ffp(&["omega", "--cm", &data("tame_e2.json"), "--phi", "(0,0,0)", "--psi", "(0,0,0)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["valuation"]["series"], "-1/4");
    assert_eq!(v["valuation"]["closed"], "-1/4");
    assert_eq!(v["valuation"]["l_function"], "-1/4");
    assert_eq!(v["hat_order"]["series"], 1);
    assert_eq!(v["agree"], true);
}

#[test]
fn omega_carlitz() {
    let o = ffp(&["omega", "--cm", &data("carlitz_q5.json"), "--phi", "(0,0,0)", "--psi", "(0,0,0)"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("v (series):         1/4"), "{out}");
    assert!(out.contains("agree: true"));
}

#[test]
fn omega_wild_without_tables() {
    let o = ffp(&["omega", "--cm", &data("wild_no_tables.json"), "--phi", "(0,0,0)", "--psi", "(0,0,1)"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("diff_valuation") && err.contains("pairwise"), "{err}");
}

#[test]
fn omega_bad_embedding() {
    let o = ffp(&["omega", "--cm", &data("tame_e2.json"), "--phi", "(0,0,5)", "--psi", "(0,0,0)"]);
    assert_eq!(o.status.code(), Some(2));
    let o = ffp(&["omega", "--cm", &data("missing.json"), "--phi", "(0,0,0)", "--psi", "(0,0,0)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn zv_trivial_character() {
    let o = ffp(&["zv", "--galois", &data("trivial_q2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("Z = x/(1 − x)"), "{out}");
    assert!(out.contains("Z(1) = 1\n"));
}

#[test]
fn zv_unramified_induced() {
    let o = ffp(&["zv", "--cm", &data("unramified_f2.json"), "--phi", "(0,0,0)", "--psi", "(0,1,0)", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["z"], "x/(1 − x^2)");
    assert_eq!(v["z_at_1"], "2/3");
    assert_eq!(v["mu_art"], "0");
}

#[test]
fn regularize_carlitz() {
    let o = ffp(&["regularize", "--config", &data("regularize_carlitz_q2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["total"], "0");
    assert_eq!(v["z_infty"], "-2");
}
