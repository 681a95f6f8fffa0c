//! Certifies every built-in gadget by enumeration and flags the ones whose
//! literature parameters disagree with the certificate.

use sat2xor::formula::Clause;
use sat2xor::gadgets::{GadgetKind, ReferenceKind};
use sat2xor::verify::certify_gadget;

fn main() {
    let mut entries: Vec<(GadgetKind, u32)> = vec![(GadgetKind::Unit, 1), (GadgetKind::Direct, 2)];
    for r in [
        ReferenceKind::Trevisan,
        ReferenceKind::Nusslein,
        ReferenceKind::Chancellor,
        ReferenceKind::BianTseitin,
    ] {
        entries.push((GadgetKind::Reference(r), 3));
    }
    entries.extend((3..=7).map(|k| (GadgetKind::TreeComb, k)));
    entries.extend([(GadgetKind::Clique, 4), (GadgetKind::Clique, 5)]);

    for (kind, k) in entries {
        let clause = Clause::positive(k);
        let app = kind.apply(&clause, k + 1).expect("supported width");
        let cert = certify_gadget(&app, &clause).expect("certifiable");
        let mark = if cert.matches(&app.params) {
            "ok"
        } else {
            "MISMATCH"
        };
        println!("{:<14} k={k}  {:<32} {mark}", kind.name(), cert.summary());
        if let Some(claimed) = &cert.paper_claimed {
            println!("{:<20} literature: {}", "", claimed.summary());
        }
    }
}
