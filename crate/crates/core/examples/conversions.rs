//! The Max2XOR, QUBO and Ising views of one small problem, with the energy
//! of every assignment in each view.

use sat2xor::convert::{max2xor_to_ising, max2xor_to_qubo, qubo_to_ising, write_qubo};
use sat2xor::max2xor::{Assignment, Max2XorProblem, XorConstraint};
use sat2xor::Rational;

fn main() {
    let one = Rational::one;
    let p = Max2XorProblem::from_constraints(
        2,
        vec![
            XorConstraint::unary(1, false, one()),
            XorConstraint::pair(1, 2, false, one()),
        ],
    );
    println!("Max2XOR:\n{p}");

    let q = max2xor_to_qubo(&p);
    print!("QUBO file:\n{}", write_qubo(&q, &["worked example"]));

    let m = qubo_to_ising(&q);
    assert_eq!(m, max2xor_to_ising(&p));
    println!("Ising:\n{}", m.to_json_string());

    println!("x1 x2 | falsified  qubo  ising");
    for bits in 0..4u64 {
        let e = p.evaluate(&Assignment::from_bits(2, bits)).unwrap();
        println!(
            " {}  {}  | {:>9}  {:>4}  {:>5}",
            bits & 1,
            bits >> 1,
            e.falsified,
            q.value_bits(bits),
            m.energy_bits(bits)
        );
    }
}
