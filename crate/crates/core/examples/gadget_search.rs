//! Exact search over every (k, aux) pair of the reference table.

use std::time::Instant;

use sat2xor::search::{search_gadget, SearchError, SearchProblem};

fn main() {
    let pairs = std::env::args()
        .nth(1)
        .map(|s| {
            s.split(',')
                .map(|p| {
                    let (k, a) = p.split_once(':').expect("k:aux");
                    (k.parse().unwrap(), a.parse().unwrap())
                })
                .collect::<Vec<(usize, usize)>>()
        })
        .unwrap_or_else(|| vec![(3, 1), (4, 1), (4, 2), (5, 1), (5, 2), (5, 3)]);
    for (k, aux) in pairs {
        let start = Instant::now();
        match search_gadget(&SearchProblem::new(k, aux)) {
            Ok(r) => println!(
                "k={k} aux={aux}: {}  nodes={} pivots={}  {:.1?}",
                r.certificate.summary(),
                r.stats.nodes,
                r.stats.lp_pivots,
                start.elapsed()
            ),
            Err(SearchError::Infeasible { .. }) => {
                println!("k={k} aux={aux}: no gadget  {:.1?}", start.elapsed())
            }
            Err(e) => println!("k={k} aux={aux}: error {e}"),
        }
    }
}
