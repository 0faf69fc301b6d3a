use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn singmod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_singmod"))
        .args(args)
        .arg("--no-cache")
        .env_remove("SINGMOD_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = singmod(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../schemas").join(format!("{name}.schema.json"))
}

fn assert_schema(name: &str, instance: &Value) {
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let msgs: Vec<String> = match compiled.validate(instance) {
        Ok(()) => Vec::new(),
        Err(errors) => errors.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    assert!(msgs.is_empty(), "{name}: {msgs:?}\n{instance:#}");
}

fn json(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&all)).expect("valid json")
}

#[test]
fn gross_163_invariants() {
    let v = json(&["gross", "--prime", "163", "--emit", "invariants"]);
    assert_schema("gross-invariants", &v);
    assert_eq!(v["det"], 32 * 163 * 163);
    assert_eq!(v["level"], 4 * 163);
}

#[test]
fn reduce_row_for_minus_three() {
    let out = stdout(&["reduce", "--delta", "-3", "--p", "101", "--format", "tsv"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 2);
    let header: Vec<&str> = lines[0].split('\t').collect();
    let row: Vec<&str> = lines[1].split('\t').collect();
    let col = header.iter().position(|h| *h == "distinct_roots").unwrap();
    assert_eq!(row[col], "1");
    assert_schema("reduce", &json(&["reduce", "--delta", "-3", "--p", "101"]));
}

#[test]
fn tqf_bound_report() {
    let out = stdout(&["tqf", "bound", "--hessian", "2,2,2,0,0,0", "--n", "5"]);
    assert!(out.starts_with("r=24 bound="), "{out}");
    assert!(out.trim_end().ends_with("holds=true"), "{out}");
    assert_schema("tqf-bound", &json(&["tqf", "bound", "--hessian", "2,2,2,0,0,0", "--n", "5"]));
}

#[test]
fn sweep_tsv_and_json_lines() {
    let args = ["sweep", "--max-abs-delta", "60", "--primes", "11,13", "--supersingular-only"];
    let tsv = stdout(&args);
    let mut lines = tsv.lines();
    assert_eq!(lines.next().unwrap().split('\t').count(), 8);
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    let mut jl = args.to_vec();
    jl.extend(["--format", "json"]);
    let json_lines = stdout(&jl);
    assert_eq!(json_lines.lines().count(), rows.len());
    for line in json_lines.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert_schema("sweep-row", &v);
        assert!(v["distinct_roots"].as_u64() <= v["ss_count"].as_u64());
    }
    let empty = stdout(&["sweep", "--min-abs-delta", "10", "--max-abs-delta", "9", "--primes", "5"]);
    assert_eq!(empty.lines().count(), 1, "header only");
}

#[test]
fn hcp_theta_genus_schemas() {
    let h = json(&["hcp", "--delta", "-23"]);
    assert_schema("hcp", &h);
    assert_eq!(h["coefficients"][0], "12771880859375");
    let t = json(&["theta", "--prime", "2", "--terms", "4"]);
    assert_schema("theta", &t);
    assert_eq!(t["coefficients"], serde_json::json!([1, 0, 0, 8, 6]));
    let t = json(&["theta", "--hessian", "2,2,2,0,0,0", "--terms", "16", "--u", "4"]);
    assert_schema("theta", &t);
    assert_eq!(t["coefficients"], serde_json::json!([1, 6, 12, 8, 6]));
    let g = json(&["genus-check", "--p", "2", "--delta", "-3"]);
    assert_schema("genus-check", &g);
    assert_eq!(g["lhs"], 8);
    assert_eq!(g["equal"], true);
}

#[test]
fn verify_subset_json() {
    let v = json(&["verify", "--criterion", "1,2,7"]);
    assert_schema("verify", &v);
    assert!(v.as_array().unwrap().iter().all(|r| r["passed"] == true));
}

#[test]
fn deterministic_output() {
    let args = ["sweep", "--max-abs-delta", "100", "--primes", "7", "--format", "json", "--jobs", "1"];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn exit_codes_and_error_codes() {
    let usage = singmod(&["no-such-command"]);
    assert_eq!(usage.status.code(), Some(2));
    let usage = singmod(&["verify", "--criterion", "11"]);
    assert_eq!(usage.status.code(), Some(2));
    let bad = singmod(&["reduce", "--delta", "-5", "--p", "7"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("E_DISCRIMINANT"));
    let bad = singmod(&["tqf", "count", "--hessian", "1,2,2,0,0,0", "--n", "3"]);
    assert_eq!(bad.status.code(), Some(1));
    let bad = singmod(&["genus-check", "--p", "11", "--delta", "-3"]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("E_UNSUPPORTED_PRIME"));
    let failing = singmod(&["verify", "--criterion", "4"]);
    assert_eq!(failing.status.code(), Some(3));
}
