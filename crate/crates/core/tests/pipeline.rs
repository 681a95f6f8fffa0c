//! Property tests over the whole compile → convert → solve pipeline.

mod common;

use common::*;
use proptest::prelude::*;
use sat2xor::convert::{max2xor_to_ising, max2xor_to_qubo, read_qubo, write_qubo, IsingModel};
use sat2xor::formula::{parse_dimacs, Clause, CnfFormula};
use sat2xor::gadgets::{compile_cnf, GadgetKind, ReferenceKind, Strategy as GadgetStrategy};

fn arb_formula() -> impl Strategy<Value = CnfFormula> {
    let lit = (1i64..=5, any::<bool>()).prop_map(|(v, neg)| if neg { -v } else { v });
    let clause = prop::collection::vec(lit, 1..=5).prop_map(|lits| Clause::from_dimacs(&lits));
    prop::collection::vec(clause, 0..=4).prop_map(|cs| CnfFormula::new(5, cs))
}

fn arb_kind() -> impl Strategy<Value = GadgetKind> {
    prop_oneof![
        Just(GadgetKind::TreeComb),
        Just(GadgetKind::TreeBalanced),
        Just(GadgetKind::Chain(Box::new(GadgetKind::Reference(
            ReferenceKind::Chancellor
        )))),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn compiled_cost_tracks_falsified_clauses((f, kind) in (arb_formula(), arb_kind())) {
        let compiled = compile_cnf(&f, &GadgetStrategy::uniform(kind)).unwrap();
        prop_assume!(compiled.raw.num_vars <= 18);
        let (_, cost) = opt_cost(&xors(&compiled.raw), compiled.raw.num_vars);
        let threshold = to_q(&compiled.totals.unsat_threshold);
        let (norm, _) = f.normalized();
        prop_assert_eq!(cost >= threshold, min_falsified(&norm) > 0);
        if compiled.totals.all_strict {
            let expected = to_q(&compiled.totals.sum_beta_minus_alpha) + q(min_falsified(&norm) as i64, 1);
            prop_assert_eq!(cost, expected);
        }
        let simplified = &compiled.problem;
        prop_assert_eq!(
            cost,
            min_falsified_weight(&xors(simplified), simplified.num_vars) + to_q(&simplified.offset)
        );
    }

    #[test]
    fn dimacs_and_qubo_text_round_trip(f in arb_formula()) {
        let (back, _) = parse_dimacs(&f.to_dimacs()).unwrap();
        prop_assert_eq!(back.normalized().0, f.normalized().0);
        let compiled = compile_cnf(&f, &GadgetStrategy::uniform(GadgetKind::TreeComb)).unwrap();
        let q = max2xor_to_qubo(&compiled.problem);
        prop_assert_eq!(read_qubo(&write_qubo(&q, &["round trip"])).unwrap(), q);
        let m = max2xor_to_ising(&compiled.problem);
        prop_assert_eq!(IsingModel::from_json_str(&m.to_json_string()).unwrap(), m);
    }
}
