//! End-to-end runs of the `sat2xor` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sat2xor"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("sat2xor-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn verify_chancellor() {
    let o = bin(&["verify", "chancellor", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("(3,5)-gadget, ΔE=4"));
    assert!(!stderr(&o).contains("warning"));
}

#[test]
fn verify_nusslein_warns() {
    let o = bin(&["verify", "nusslein"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("(3,9/2)-gadget"));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn verify_json_is_parseable() {
    let o = bin(&["verify", "tree", "5", "--json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"]["alpha"], "4");
    assert_eq!(v["certified"]["beta"], "6");
}

#[test]
fn compile_worked_example_to_qubo() {
    let input = scratch(
        "worked.json",
        r#"{"num_vars":2,"constraints":[[1,0,1],[1,2,0,1]]}"#,
    );
    let o = bin(&["compile", input.to_str().unwrap(), "--format", "qubo"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("p qubo 0 2 2 1\n"));
    for line in ["0 0 2\n", "1 1 1\n", "0 1 -2\n"] {
        assert!(text.contains(line), "{text}");
    }
}

#[test]
fn compile_empty_formula() {
    let input = scratch("empty.cnf", "p cnf 0 0\n");
    let o = bin(&["compile", input.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["num_vars"], 0);
    assert_eq!(v["constraints"].as_array().unwrap().len(), 0);
}

#[test]
fn compile_rejects_bad_dimacs() {
    let input = scratch("bad.cnf", "p cnf 2 1\n1 x 0\n");
    let o = bin(&["compile", input.to_str().unwrap()]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("error"));
}

#[test]
fn solve_contradiction() {
    let cnf = scratch("contra.cnf", "p cnf 1 2\n1 0\n-1 0\n");
    let model = cnf.with_extension("json");
    let o = bin(&[
        "compile",
        cnf.to_str().unwrap(),
        "-o",
        model.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = bin(&["solve", model.to_str().unwrap()]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["value"], "1");
    assert_eq!(v["num_optimal"], 2);
}

#[test]
fn anneal_is_deterministic() {
    let cnf = scratch(
        "det.cnf",
        "p cnf 4 4\n1 2 3 0\n-1 2 -4 0\n3 -2 0\n-3 4 1 0\n",
    );
    let model = cnf.with_extension("qubo");
    let o = bin(&[
        "compile",
        cnf.to_str().unwrap(),
        "--format",
        "qubo",
        "-o",
        model.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let run = || {
        stdout(&bin(&[
            "solve",
            model.to_str().unwrap(),
            "--method",
            "anneal",
            "--seed",
            "11",
        ]))
    };
    let first = run();
    assert_eq!(first, run());
    let exact: Value =
        serde_json::from_str(&stdout(&bin(&["solve", model.to_str().unwrap()]))).unwrap();
    let annealed: Value = serde_json::from_str(&first).unwrap();
    assert_eq!(annealed["value"], exact["value"]);
}

#[test]
fn search_small_table_row() {
    let o = bin(&["search", "--k", "3", "--aux", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("(2,3)-gadget, ΔE=4 (optimal)"));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["search"]["optimal"], true);
}

#[test]
fn search_infeasible_exits_non_zero() {
    let o = bin(&["search", "--k", "5", "--aux", "1"]);
    assert!(!o.status.success());
}

#[test]
fn catalog_table_lists_gadgets() {
    let o = bin(&["catalog", "--table"]);
    assert!(o.status.success());
    let text = stdout(&o);
    for name in ["chancellor", "bian-equivalence", "clique"] {
        assert!(text.contains(name), "{name} missing");
    }
}
