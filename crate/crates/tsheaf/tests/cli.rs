use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn sample(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("samples")
        .join(name)
        .display()
        .to_string()
}

fn tsheaf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tsheaf"))
        .args(args)
        .env_remove("TSHEAF_ENUM_LIMIT")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = tsheaf(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn flow_from_file() {
    let v = json(&[
        "flow",
        "--spec",
        &sample("path3_powerset.json"),
        "--from",
        &sample("path3_start.json"),
    ]);
    let flow = &v["flow"];
    assert_eq!(v["format"], 1);
    assert_eq!(flow["steps"], 2);
    assert_eq!(flow["evaluations"], 3);
    assert_eq!(flow["is_section"], true);
    assert_eq!(flow["final"]["values"]["v"], "{}");
}

#[test]
fn path_compare_finds_hodge_witness() {
    let v = json(&["compare", "--spec", &sample("path3_powerset.json")]);
    let d0 = &v["degrees"][0];
    assert_eq!(v["kind"], "lattice");
    assert_eq!(d0["tarski"]["size"], 4);
    assert_eq!(d0["tarski_in_hodge_upper"], true);
    assert_eq!(d0["tarski_strictly_in_hodge_upper"], true);
    assert!(d0["hodge_upper_witness"].is_object());
}

#[test]
fn twisted_circle_compare() {
    let v = json(&["compare", "--spec", &sample("twisted_circle_gf3.json")]);
    let d0 = &v["degrees"][0];
    assert_eq!(v["kind"], "vector");
    assert_eq!(d0["tarski"]["size"], 2);
    assert_eq!(d0["grandis"]["trivial"], true);
    assert_eq!(d0["grandis_in_tarski"], true);
    assert_eq!(d0["grandis_strictly_in_tarski"], true);
}

#[test]
fn untwisted_circle_has_one_class() {
    let v = json(&["cohomology", "--spec", &sample("circle_gf3.json")]);
    assert_eq!(v["vector"]["betti"], 1);
    assert_eq!(v["grandis"]["height"], 1);
}

#[test]
fn transfer_output_loads_back() {
    let v = json(&["transfer", "--spec", &sample("twisted_circle_gf3.json")]);
    assert_eq!(v["betti"], serde_json::json!([0, 0]));
    let dir = std::env::temp_dir().join(format!("tsheaf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gr.json");
    std::fs::write(&path, v["sheaf"].to_string()).unwrap();
    let s = json(&["sections", "--spec", path.to_str().unwrap()]);
    assert_eq!(s["sections"]["size"], 2);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn simulate_async_is_reproducible() {
    let args = [
        "simulate",
        "--spec",
        &sample("triangle_chain.json"),
        "--schedule",
        "async",
        "--seed",
        "7",
    ];
    let a = json(&args);
    assert_eq!(a, json(&args));
    assert_eq!(a["status"], "converged");
    assert_eq!(a["final_post_fixed"], true);
    assert_eq!(a["experimental"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(tsheaf(&["sections", "--spec", "/nonexistent.json"]).status.code(), Some(2));
    let big = Command::new(env!("CARGO_BIN_EXE_tsheaf"))
        .args(["sections", "--spec", &sample("path3_powerset.json")])
        .env("TSHEAF_ENUM_LIMIT", "10")
        .output()
        .unwrap();
    assert_eq!(big.status.code(), Some(4));
    assert_eq!(tsheaf(&["sections"]).status.code(), Some(2));
}
