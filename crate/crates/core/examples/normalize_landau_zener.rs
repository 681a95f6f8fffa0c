//! Scales gadget Ising models into the unit coefficient range and compares
//! single-crossing success estimates driven by the resulting gap.

use sat2xor::convert::{
    energy_gap_ising, landau_zener_success, max2xor_to_ising, normalize_to_ranges, unit_ranges,
};
use sat2xor::gadgets::{
    bian_tseitin_template, chancellor_template, clique_template, direct_template, tree_template,
    TreeShape,
};

fn main() {
    let templates = [
        direct_template(),
        chancellor_template(),
        tree_template(&TreeShape::comb(3)).unwrap(),
        tree_template(&TreeShape::comb(6)).unwrap(),
        bian_tseitin_template(),
        clique_template(5).unwrap(),
    ];
    for t in templates {
        let m = max2xor_to_ising(&t.problem().simplify());
        let (h, j) = unit_ranges();
        let (_, scale) = normalize_to_ranges(&m, h, j).unwrap();
        // The satisfied/falsified gap of the scaled model.
        let gap = energy_gap_ising(&m).unwrap();
        let delta = gap.to_f64();
        let p: Vec<String> = [2.0, 8.0, 32.0]
            .iter()
            .map(|&c| format!("{:.3}", landau_zener_success(delta, c).unwrap()))
            .collect();
        println!(
            "{:<13} k={} scale {scale:<4} ΔE {gap:<5} p(c=2,8,32) = {}",
            t.params.name,
            t.k,
            p.join(" ")
        );
    }
}
