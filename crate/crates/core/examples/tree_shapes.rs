//! Tree gadgets for several shapes: the lemma counts and the certified
//! parameters are the same whatever the shape.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sat2xor::formula::Clause;
use sat2xor::gadgets::{gadget_tree, TreeShape};
use sat2xor::verify::{certify_gadget, check_tree_lemma};

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in [3, 5, 8] {
        let shapes = [
            TreeShape::comb(k),
            TreeShape::balanced(k),
            TreeShape::random(k, &mut rng),
        ];
        for shape in shapes {
            let lemma = check_tree_lemma(&shape).expect("small tree");
            let clause = Clause::positive(k as u32);
            let app = gadget_tree(&clause, &shape, k as u32 + 1).unwrap();
            let cert = certify_gadget(&app, &clause).unwrap();
            println!(
                "k={k} height {} {shape}\n    {} constraints, max {} satisfied, root-true falsified {}; {}",
                shape.height(),
                lemma.num_constraints,
                lemma.max_satisfied,
                lemma.falsified_root_true_max,
                cert.summary()
            );
        }
    }
}
