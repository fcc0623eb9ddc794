use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclodyn")).args(args).env_remove("CYCLODYN_PRECISION_BITS").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclodyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn envelope_shape() {
    let v = json(&["special", "--map", "X^3 - 3*X"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "special");
    assert_eq!(v["config"]["map"], "X^3 - 3*X");
    assert_eq!(v["config"]["precision_bits"], 128);
    assert_eq!(v["result"]["kind"], "ChebyshevConjugate");
    // Möbius entries are exact literals
    assert!(v["result"]["witness"]["mobius"]["a"].is_string());
}

#[test]
fn growth_values_are_rational_strings() {
    let v = json(&["growth", "--map", "X^2 + 1", "--start", "1/2", "--place", "2", "--steps", "3"]);
    let vals: Vec<&str> = v["result"]["values"].as_array().unwrap().iter().map(|x| x.as_str().unwrap()).collect();
    assert_eq!(vals, ["2", "4", "16", "256"]);
    assert_eq!(v["result"]["strictly_increasing"], true);
}

#[test]
fn bounds_example() {
    let v = json(&["bounds", "--map", "(X^3+2)/1", "--A", "1", "--B", "10", "--n", "13"]);
    assert_eq!(v["result"]["L_h"]["exact"], "3");
    assert_eq!(v["result"]["M"], 24);
    let v = json(&["bounds", "--map", "X^2", "--B", "10"]);
    assert_eq!(v["result"]["M"], 37);
}

#[test]
fn empty_search_is_valid() {
    let v = json(&["search", "--map", "X^2 + 3", "--start-set", "roots:2", "--depth", "2"]);
    assert_eq!(v["result"]["report"]["hits"].as_array().unwrap().len(), 0);
    assert_eq!(v["result"]["report"]["counts"]["starts"], 2);
}

#[test]
fn search_csv_and_out() {
    let csv = scratch("hits.csv");
    let out = scratch("report.json");
    let o = run(&["search", "--map", "X^2", "--start-set", "roots:6", "--depth", "2", "--csv", csv.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stdout).contains("12 hits"));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("start,k,value,evidence"));
    assert_eq!(lines.count(), 12);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["result"]["summary"]["hit_rate"], 1.0);
}

#[test]
fn config_files() {
    let toml = scratch("run.toml");
    std::fs::write(&toml, "command = \"orbit\"\nmap = \"1/X\"\nstart = \"0\"\ndepth = 3\n").unwrap();
    let v = json(&["--config", toml.to_str().unwrap()]);
    assert_eq!(v["command"], "orbit");
    assert_eq!(v["result"]["verdict"]["PoleAtStep"], 1);
    let js = scratch("run.json");
    std::fs::write(&js, r#"{"command": "hypothesis", "map": "X^2"}"#).unwrap();
    let v = json(&["--config", js.to_str().unwrap(), "--precision-bits", "256"]);
    assert_eq!(v["result"]["verdict"]["kind"], "hypothesis_fails");
    assert_eq!(v["config"]["precision_bits"], 256);
    // the echoed config reproduces the run
    let echo = scratch("echo.json");
    std::fs::write(&echo, v["config"].to_string()).unwrap();
    assert_eq!(json(&["--config", echo.to_str().unwrap()]), v);
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclodyn"))
        .args(["special", "--map", "X^2"])
        .env("CYCLODYN_PRECISION_BITS", "200")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["precision_bits"], 200);
}

#[test]
fn exit_statuses() {
    assert_eq!(run(&["orbit", "--map", "X^^2", "--start", "0"]).status.code(), Some(2));
    assert_eq!(run(&["orbit", "--map", "X^2"]).status.code(), Some(2));
    assert_eq!(run(&["search", "--map", "X^2", "--start-set", "box:60:5"]).status.code(), Some(3));
    let o = run(&["--config", "/nonexistent/run.toml"]);
    assert_eq!(o.status.code(), Some(5));
    let dir = scratch("");
    let o = run(&["demo", "--out", dir.join("no/such/dir/x.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn deterministic_reports() {
    let args = ["search", "--map", "X^2 - 1", "--start-set", "box:4:1", "--depth", "3", "--target", "house:1"];
    let a = run(&args);
    let b = run(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn demo_replays_examples() {
    let v = json(&["demo"]);
    let items = v["result"].as_array().unwrap();
    assert_eq!(items[0]["verdict"]["PoleAtStep"], 1);
    assert_eq!(items[1]["iterate"], "X");
    let classes: Vec<&str> = items.iter().filter(|i| i["name"] == "degenerate").map(|i| i["report"]["class"].as_str().unwrap()).collect();
    assert_eq!(classes, ["ConstantOne", "ConstantAbs", "LeadingRatio"]);
}

#[test]
fn field_arithmetic() {
    let v = json(&["field", "--cyclotomic", "12", "--value", "1/(1 + z3)", "--value", "1 + z4", "--value", "12", "--prime", "2"]);
    assert_eq!(v["result"]["cyclotomic"], "X^4 - X^2 + 1");
    let rows = v["result"]["values"].as_array().unwrap();
    assert_eq!(rows[0]["expr"], "-z3");
    assert_eq!(rows[0]["root_of_unity_order"], 6);
    assert!(rows[1]["root_of_unity_order"].is_null());
    assert_eq!(rows[2]["padic_abs"], "1/4");
    assert_eq!(run(&["field", "--value", "1", "--prime", "4"]).status.code(), Some(2));
}

#[test]
fn conjugation_monic_and_backstop_flags() {
    let v = json(&["special", "--map", "X^3 - 3*X", "--conjugate-by", "(2*X + 1)/(X - 1)"]);
    assert_eq!(v["result"]["kind"], "ChebyshevConjugate");
    assert_ne!(v["result"]["map"], "X^3 - 3*X");
    let v = json(&["special", "--map", "(X^2 + 1)/X"]);
    assert_eq!(v["result"]["kind"], "NotSpecial");
    assert_eq!(v["result"]["portrait"]["totally_ramified"].as_array().unwrap().len(), 2);
    let v = json(&["iterate", "--map", "2*X^3/(X + 1)", "--n", "1", "--monic"]);
    assert_eq!(v["result"]["monic"]["map"], "X^3/(X + 2)");
    assert_eq!(v["result"]["monic"]["mu_expr"], "2");
    let v = json(&["orbit", "--map", "X^3", "--start", "z5", "--depth", "1", "--target", "house:1", "--backstop", "1"]);
    assert!(v["result"]["backstop"]["Pass"].is_object());
    assert_eq!(run(&["special", "--map", "X^2", "--conjugate-by", "X^2"]).status.code(), Some(2));
}
