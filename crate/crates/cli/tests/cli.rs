use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::{json, Value};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn zg(args: &[&str]) -> (i32, Value, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_zg")).args(args).output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), value, stdout)
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn schur_klein_four() {
    let (code, v, raw) = zg(&["schur", path(&fixture("klein4.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"invariant_factors": [2]}));
    assert_eq!(raw, "{\"invariant_factors\":[2]}\n");
}

#[test]
fn bogomolov_cache_and_soft_pair() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g64.json");
    std::fs::copy(fixture("g64.json"), &g).unwrap();
    let (code, v, _) = zg(&["bogomolov", path(&g)]);
    assert_eq!(code, 0);
    assert_eq!(v, json!({"invariant_factors": [2]}));
    assert!(dir.path().join("g64.bogomolov.json").exists());

    let (code, v, _) = zg(&["centre", "soft", path(&g), "--phi", "id", "--gamma", "bog:0"]);
    assert_eq!(code, 0);
    assert_eq!(v["soft"], json!(true));
    assert_eq!(v["gamma_is_coboundary"], json!(false));

    let (code, v, _) = zg(&["centre", "minv", path(&fixture("g64.json")), "--phi", "id", "--gamma", path(&fixture("g64_bog_rep.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["soft"], json!(true));
    assert_eq!(v["identity"], json!(true));
    let m = v["matrix"].as_array().unwrap();
    assert_eq!(m.len(), 232);
    for (i, row) in m.iter().enumerate() {
        for (j, x) in row.as_array().unwrap().iter().enumerate() {
            assert_eq!(x.as_u64().unwrap(), u64::from(i == j));
        }
    }

    let (code, _, _) = zg(&["centre", "soft", path(&g), "--phi", "id", "--gamma", "bog:1"]);
    assert_eq!(code, 3);
}

#[test]
fn output_is_stable_and_text_matches() {
    let s3 = fixture("s3.json");
    let (_, a, raw_a) = zg(&["centre", "simples", path(&s3)]);
    let (_, _, raw_b) = zg(&["centre", "simples", path(&s3)]);
    assert_eq!(raw_a, raw_b);
    assert_eq!(a["num_simples"], json!(8));
    assert_eq!(a["sum_qdim_squared"], json!(36));
    let (code, _, text) = zg(&["--format", "text", "centre", "simples", path(&s3)]);
    assert_eq!(code, 0);
    assert!(text.contains("num_simples: 8"));
    assert!(text.contains("sum_qdim_squared: 36"));
    assert_eq!(text.lines().filter(|l| l.contains("qdim=")).count(), 8);

    let (_, _, grid) = zg(&["--format", "text", "centre", "minv", path(&s3), "--phi", "id", "--gamma", "zero"]);
    assert!(grid.contains("  1 0 0 0 0 0 0 0\n"));
}

#[test]
fn group_commands() {
    let (code, v, _) = zg(&["group", "info", path(&fixture("g64.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["order"], json!(64));
    assert_eq!(v["nilpotency_class"], json!(3));
    let (_, v, _) = zg(&["classes", path(&fixture("q8.json"))]);
    assert_eq!(v["num_classes"], json!(5));
    let (_, v, _) = zg(&["pairs", path(&fixture("s3.json"))]);
    assert_eq!(v["num_orbits"], json!(8));
    let (_, v, _) = zg(&["--modulus", "2", "h2", path(&fixture("klein4.json"))]);
    assert_eq!(v, json!({"invariant_factors": [2, 2, 2]}));
}

#[test]
fn automorphism_checks() {
    let (code, v, _) = zg(&["aut", "check", path(&fixture("d4.json")), "--map", path(&fixture("d4_outer.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["inner"], json!(false));
    assert_eq!(v["class_preserving"], json!(false));
    let (code, v, _) = zg(&["aut", "check", path(&fixture("s3.json")), "--map", path(&fixture("s3_inner.json"))]);
    assert_eq!(code, 0);
    assert_eq!(v["inner"], json!(true));
    assert_eq!(v["doubly_class_preserving"], json!(true));
    let (code, v, _) = zg(&["aut", "check", path(&fixture("s3.json")), "--map", path(&fixture("s3_not_hom.json"))]);
    assert_eq!(code, 1);
    assert_eq!(v["error"]["code"], json!("not_homomorphism"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\n  \"kind\": \"permutation\",\n  \"generators\": [\"(0 1\"]\n}").unwrap();
    let (code, v, _) = zg(&["schur", path(&bad)]);
    assert_eq!(code, 3);
    assert_eq!(v["error"]["code"], json!("parse_error"));

    let syntax = dir.path().join("syntax.json");
    std::fs::write(&syntax, "{\"kind\": ").unwrap();
    let (code, v, _) = zg(&["schur", path(&syntax)]);
    assert_eq!(code, 3);
    assert!(v["error"]["pos"].as_u64().unwrap() <= 9);

    let (code, v, _) = zg(&["--budget", "10", "group", "info", path(&fixture("g64.json"))]);
    assert_eq!(code, 2);
    assert_eq!(v["error"]["code"], json!("budget_exceeded"));

    let (code, _, _) = zg(&["no-such-command"]);
    assert_eq!(code, 3);
}
