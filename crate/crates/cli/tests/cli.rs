use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(dir: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_weylinv"));
    cmd.env_remove("WEYLINV_CACHE_DIR").args(args);
    if let Some(d) = dir {
        cmd.arg("--cache-dir").arg(d);
    }
    cmd.output().unwrap()
}

fn run(args: &[&str]) -> Output {
    run_in(None, args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let o = run(&a);
    serde_json::from_slice(&o.stdout).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn schema() -> jsonschema::JSONSchema {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/schema/report.schema.json")).unwrap();
    jsonschema::JSONSchema::compile(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn roots_listing() {
    let o = run(&["roots", "E8"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("E8: 240 roots\n"));
    assert_eq!(text.lines().count(), 241);
    assert!(stdout(&run(&["roots", "A", "1"])).starts_with("A1: 2 roots"));
    assert!(stdout(&run(&["roots", "F4"])).starts_with("F4: 48 roots"));
    assert_eq!(json(&["roots", "E7"])["roots"].as_array().unwrap().len(), 126);
}

#[test]
fn orders() {
    assert!(stdout(&run(&["order", "E8"])).starts_with("E8: order 696729600 (coset index 17280 x 40320)"));
    assert_eq!(json(&["order", "F4"])["order"], 1152);
    assert_eq!(json(&["order", "B", "4"])["order"], 384);
    assert_eq!(json(&["order", "I2", "5"])["order"], 10);
}

#[test]
fn omega_counts() {
    for (t, k) in [("F4", 3), ("B6", 4), ("E8", 1), ("D5", 1), ("I2(4)", 2)] {
        assert_eq!(json(&["omega", t])["classes"], k, "{t}");
    }
    assert!(stdout(&run(&["omega", "B4"])).starts_with("B4: 3 classes"));
}

#[test]
fn cosets_and_fullcheck() {
    let c = json(&["cosets", "E7"]);
    assert_eq!((c["cosets"].as_u64(), c["u_order"].as_u64(), c["order"].as_u64()), (Some(2016), Some(1440), Some(2903040)));
    let o = run(&["fullcheck", "E7"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("E7: 2016 cosets; 77 orbits; min fold 3; 28 fold-3 orbits"));
    let d4 = json(&["fullcheck", "D4"]);
    assert_eq!((d4["orbits"].as_u64(), d4["min_fold"].as_u64()), (Some(2), Some(2)));
    assert_eq!(d4["passed"], true);
    assert!(d4.get("cached").is_none());
    assert_eq!(code(&run(&["fullcheck", "E6"])), 2);
}

#[test]
fn restrict_with_catalog_sites() {
    let v = json(&["restrict", "B2", "--invariant", "v1"]);
    let sites = v["sites"].as_array().unwrap();
    assert_eq!(sites.len(), 2);
    assert_eq!(sites[1]["restrictions"][0]["value"], "0");
    let w2 = json(&["restrict", "I2(4)", "--invariant", "w2"]);
    assert_eq!(w2["sites"][1]["restrictions"][0]["value"], "{2}{a1} + {2}{b1} + {a1}{b1}");
}

#[test]
fn restrict_with_explicit_frame() {
    let v = json(&["restrict", "B2", "--root", "2,-2", "--root", "2,2", "--invariant", "u1", "--invariant", "v1"]);
    let r = &v["sites"][0]["restrictions"];
    assert_eq!(r[0]["value"], "{r1} + {r2}");
    assert_eq!(r[1]["value"], "0");
    let o = run(&["restrict", "B2", "--root", "2,0", "--root", "2,2"]);
    assert_eq!(code(&o), 2);
    assert_eq!(code(&run(&["restrict", "B2", "--root", "2,x"])), 2);
    assert_eq!(code(&run(&["restrict", "B2", "--invariant", "nope"])), 2);
}

#[test]
fn verify_single_types() {
    let o = run(&["verify", "B", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("B4: PASS (9 basis elements"));
    let r = json(&["verify", "E8"]);
    assert_eq!(r["basis"].as_array().unwrap().len(), 10);
    assert!(schema().is_valid(&r));
}

#[test]
fn verify_all_validates_against_schema() {
    let o = run(&["--json", "--jobs", "3", "verify", "--all"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["passed"], true);
    let types: Vec<&str> = v["reports"].as_array().unwrap().iter().map(|r| r["type"].as_str().unwrap()).collect();
    assert_eq!(types.len(), 20);
    assert_eq!((types[0], types[14], types[19]), ("A1", "F4", "I2(4)"));
    let s = schema();
    assert!(s.is_valid(&v));
    let mut broken = v.clone();
    broken["reports"][0]["checks"][0]["status"] = Value::from("maybe");
    assert!(!s.is_valid(&broken));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&run(&["roots", "G2"])), 2);
    assert_eq!(code(&run(&["verify", "E9"])), 2);
    assert_eq!(code(&run(&["verify", "I2(8)"])), 2);
    assert_eq!(code(&run(&["--max-elements", "0", "order", "B3"])), 2);
    assert_eq!(code(&run(&["verify"])), 2);
    assert_eq!(code(&run(&["cache", "inspect"])), 2);
    assert_eq!(code(&run(&["--max-elements", "100", "cosets", "E8"])), 3);
    let err = json(&["--max-elements", "100", "cosets", "E8"]);
    assert_eq!(err["exit_code"], 3);
}

#[test]
fn cache_lifecycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = Some(dir.path());
    let cold = run_in(d, &["--json", "fullcheck", "D6"]);
    let warm = run_in(d, &["--json", "fullcheck", "D6"]);
    assert_eq!(cold.stdout, warm.stdout);
    assert!(stdout(&run_in(d, &["cosets", "D6"])).contains("(cached)"));
    let listed: Value = serde_json::from_slice(&run_in(d, &["--json", "cache", "inspect"]).stdout).unwrap();
    assert_eq!(listed["files"].as_array().unwrap().len(), 1);
    assert_eq!(stdout(&run_in(d, &["cache", "clear"])), format!("removed 1 files from {}\n", dir.path().display()));
    let env = Command::new(env!("CARGO_BIN_EXE_weylinv"))
        .env("WEYLINV_CACHE_DIR", dir.path())
        .args(["cache", "inspect"])
        .output()
        .unwrap();
    assert!(stdout(&env).contains(": 0 files"));
}
