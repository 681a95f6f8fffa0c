//! Places a Chancellor gadget on a 3×3 grid and routes the couplings that
//! do not fit through chains of equality constraints.

use std::collections::BTreeMap;

use sat2xor::convert::{chain_rewrite, CouplingGraph};
use sat2xor::formula::Clause;
use sat2xor::gadgets::chancellor_template;
use sat2xor::Rational;

fn main() {
    let app = chancellor_template()
        .instantiate(&Clause::positive(3), 4)
        .unwrap();
    let p = app.constraints.simplify();
    let grid = CouplingGraph::grid(3, 3);
    // Auxiliary in the centre, inputs on three of its neighbours.
    let placement = BTreeMap::from([(1, 1), (2, 3), (3, 7), (4, 4)]);
    let chain_weight = Rational::from_integer(2);
    let (embedded, report) = chain_rewrite(&p, &placement, &grid, &chain_weight).expect("routable");

    println!("logical problem:\n{p}");
    println!(
        "embedded on {} qubits, {} chain constraints",
        embedded.num_vars, report.added_constraints
    );
    for (c, path) in &report.chains {
        println!("  {c}: qubits {path:?}");
    }
    if !report.weak_chains.is_empty() {
        println!(
            "chain weight below constraint weight for {:?}",
            report.weak_chains
        );
    }
    let before = p.exhaustive_opt().unwrap();
    let after = embedded.exhaustive_opt().unwrap();
    println!(
        "min falsified weight: logical {}, embedded {}",
        before.cost, after.cost
    );
}
