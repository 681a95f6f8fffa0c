//! Compiles a DIMACS formula with tree gadgets and decides satisfiability
//! from the minimum falsified weight of the compiled problem.
//!
//! `cargo run --example compile_cnf [file.cnf]`

use sat2xor::formula::parse_dimacs;
use sat2xor::gadgets::{compile_cnf, GadgetKind, Strategy};

const PIGEONS: &str = "c two pigeons, one hole
p cnf 2 3
1 0
2 0
-1 -2 0
";

fn main() {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read_to_string(path).expect("readable input"),
        None => PIGEONS.to_string(),
    };
    let (formula, warnings) = parse_dimacs(&text).expect("valid DIMACS");
    if !warnings.is_clean() {
        eprintln!("parser warnings: {warnings:?}");
    }
    let strategy = Strategy::uniform(GadgetKind::TreeComb);
    let compiled = compile_cnf(&formula, &strategy).expect("compilable formula");
    for app in &compiled.applications {
        println!(
            "{:?} -> {} ({} constraints)",
            app.clause_vars,
            app.params.summary(),
            app.constraints.len()
        );
    }
    let t = &compiled.totals;
    println!("strategy {strategy}");
    println!(
        "Σ(α−1) = {}, Σ(β−α) = {}, {} auxiliaries",
        t.sum_alpha_minus_one, t.sum_beta_minus_alpha, t.num_aux
    );

    let best = compiled
        .raw
        .exhaustive_opt()
        .expect("small enough to enumerate");
    let verdict = if best.cost >= t.unsat_threshold {
        "UNSAT"
    } else {
        "SAT"
    };
    println!(
        "Cost(P') = {}, threshold {} -> {verdict}",
        best.cost, t.unsat_threshold
    );
    println!(
        "brute force says {}",
        if formula.is_satisfiable_bruteforce() {
            "SAT"
        } else {
            "UNSAT"
        }
    );
}
