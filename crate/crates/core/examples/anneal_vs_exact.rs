//! Simulated annealing against exhaustive enumeration on random 3-SAT
//! instances compiled with tree gadgets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sat2xor::formula::{Clause, CnfFormula};
use sat2xor::gadgets::{compile_cnf, GadgetKind, Strategy};
use sat2xor::verify::{anneal_solve, Schedule};

fn random_3sat(rng: &mut ChaCha8Rng, n: u32, m: usize) -> CnfFormula {
    let clauses = (0..m)
        .map(|_| {
            let mut vars: Vec<i64> = (1..=n as i64).collect();
            let lits: Vec<i64> = (0..3)
                .map(|_| {
                    let v = vars.swap_remove(rng.gen_range(0..vars.len()));
                    if rng.gen_bool(0.5) {
                        -v
                    } else {
                        v
                    }
                })
                .collect();
            Clause::from_dimacs(&lits)
        })
        .collect();
    CnfFormula::new(n, clauses)
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let strategy = Strategy::uniform(GadgetKind::TreeComb);
    let schedule = Schedule {
        sweeps: 500,
        ..Schedule::default()
    };
    for case in 0..8 {
        let f = random_3sat(&mut rng, 4, 9 + case);
        let p = compile_cnf(&f, &strategy).unwrap().raw;
        let exact = p.exhaustive_opt().unwrap();
        let hits = (0..10)
            .filter(|&seed| anneal_solve(&p, &schedule, seed).best_value == exact.cost)
            .count();
        println!(
            "{} clauses, {} vars: exact cost {}, annealing optimal in {hits}/10 runs, {} falsified clauses",
            f.clauses.len(),
            p.num_vars,
            exact.cost,
            f.min_falsified()
        );
    }
}
