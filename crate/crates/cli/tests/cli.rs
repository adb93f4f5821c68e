use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn workbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_workbench"))
        .args(args)
        .current_dir(root())
        .output()
        .expect("run workbench")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn scratch(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("workbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eval_worked_example() {
    let out = workbench(&["eval", "--engine", "lambda-cbv", "--budget", "1000", "corpus/lambda/ex1.lam"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["runs"][0]["steps"], 2);
    assert_eq!(v["runs"][0]["result"], "\\z. z");
    assert!(v["timing"].is_object());
}

#[test]
fn compare_worked_example() {
    let out = workbench(&["compare", "--budget", "1000", "corpus/lambda/ex1.lam"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    let steps = |e: &str| {
        v["runs"].as_array().unwrap().iter().find(|r| r["engine"] == e).unwrap()["steps"]
            .as_u64()
            .unwrap()
    };
    assert_eq!(steps("lambda-cbv"), 2);
    assert_eq!(steps("phi-crs"), 2);
    assert_eq!(steps("phi-graph"), 2);
    let (n, m) = (steps("lambda-cbn"), steps("psi-crs"));
    assert!(n <= m && m <= 2 * n);
    assert!(v["theorems"].as_array().unwrap().iter().all(|t| t["holds"] == true));
}

#[test]
fn encode_emits_parsable_systems() {
    for to in ["crs", "crs-cbn"] {
        let out = workbench(&["encode", "--to", to, "corpus/lambda/ex1.lam"]);
        assert_eq!(out.status.code(), Some(0));
        let text = String::from_utf8(out.stdout).unwrap();
        let doc = wcbv::crs::parse_system(&text).expect("emitted system parses");
        assert_eq!(doc.terms.len(), 1);
    }
    let out = workbench(&["encode", "--to", "lambda", "corpus/crs/add.trs"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let first = text.lines().nth(1).unwrap();
    assert!(wcbv::lambda::parse_term(first).unwrap().is_closed());
}

#[test]
fn graph_engine_and_dot() {
    let dot = scratch("add.dot", "");
    let out = workbench(&["eval", "--engine", "graph", "--emit-dot", s(&dot), "corpus/crs/add.trs"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["runs"][0]["result"], "succ(succ(zero))");
    assert_eq!(v["runs"][0]["size_series"].as_array().unwrap().len(), 3);
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));
    let out = workbench(&["graph-dot", "corpus/lambda/ex1.lam"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("label=\"app\""));
}

#[test]
fn roundtrip_reports_agreement() {
    let out = workbench(&["roundtrip", "corpus/crs/stuck.trs"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["theorems"]
        .as_array()
        .unwrap()
        .iter()
        .any(|t| t["name"] == "scott_simulation" && t["holds"] == true));
}

#[test]
fn random_policy_gives_the_same_steps() {
    let out = workbench(&["eval", "--policy", "random", "--seed", "9", "corpus/lambda/church_add.lam"]);
    let left = workbench(&["eval", "corpus/lambda/church_add.lam"]);
    assert_eq!(json(&out)["runs"][0]["steps"], json(&left)["runs"][0]["steps"]);
}

#[test]
fn budget_exhaustion_is_not_an_error() {
    let p = scratch("omega.lam", "(\\x. x x) (\\x. x x)");
    let out = workbench(&["eval", "--budget", "50", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["runs"][0]["outcome"], "budget_exhausted");
    let out = workbench(&["compare", "--budget", "50", s(&p)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["theorems"].as_array().unwrap().is_empty());
}

#[test]
fn exit_codes() {
    let bad = scratch("bad.lam", "(\\x. x");
    assert_eq!(workbench(&["eval", s(&bad)]).status.code(), Some(1));
    let open = scratch("open.lam", "\\x. y");
    assert_eq!(workbench(&["eval", s(&open)]).status.code(), Some(2));
    let overlap = scratch(
        "overlap.trs",
        "constructor z/0; function f/1; rule f(x) -> z; rule f(z) -> z; term f(z);",
    );
    assert_eq!(workbench(&["eval", s(&overlap)]).status.code(), Some(2));
    let syntax = scratch("syntax.trs", "constructor z/0 rule");
    assert_eq!(workbench(&["eval", s(&syntax)]).status.code(), Some(1));

    let lam = scratch("stale.lam", "(\\x. x) (\\y. y)");
    let sidecar = lam.with_extension("expect.json");
    std::fs::write(&sidecar, "{}\n").unwrap();
    assert_eq!(workbench(&["compare", s(&lam)]).status.code(), Some(3));
    assert_eq!(workbench(&["expect", "--check", s(&lam)]).status.code(), Some(3));
    assert_eq!(workbench(&["expect", s(&lam)]).status.code(), Some(0));
    assert_eq!(workbench(&["compare", s(&lam)]).status.code(), Some(0));
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let strip = |o: &Output| {
        let mut v = json(o);
        v.as_object_mut().unwrap().remove("timing");
        v.to_string()
    };
    let a = workbench(&["compare", "corpus/lambda/church_mul.lam"]);
    let b = workbench(&["compare", "corpus/lambda/church_mul.lam"]);
    assert_eq!(strip(&a), strip(&b));
}
