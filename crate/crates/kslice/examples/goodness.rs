//! Component-structure goodness checks and the random-superset experiment:
//! how often does a uniform superset of a sparse seed set induce a graph
//! with a too-large component or too few components?
//!
//! ```bash
//! cargo run --release -p kslice --example goodness
//! ```

use kslice::graph::{random_subset_goodness_experiment, Graph};
use num_rational::Ratio;

fn main() {
    let coeff = Ratio::new(1u64, 16u64);
    println!("graph\tn\tgood\tmax_comp\tcomponents\tfloor");
    for (name, g) in [
        ("empty100/d3", Graph::empty(100).with_delta(3).unwrap()),
        ("50 edges", {
            let mut acc = Graph::empty(0);
            for _ in 0..50 {
                acc = acc.disjoint_union(&Graph::path(2));
            }
            acc
        }),
        ("path 100000", Graph::path(100_000)),
        ("25 x C4", {
            let mut acc = Graph::empty(0);
            for _ in 0..25 {
                acc = acc.disjoint_union(&Graph::cycle(4));
            }
            acc
        }),
    ] {
        let r = g.is_delta_good(coeff).unwrap();
        println!(
            "{name}\t{}\t{}\t{}\t{}\t{}",
            g.n(),
            r.is_good,
            r.max_component_size,
            r.component_count,
            r.count_floor
        );
    }

    eprintln!("\n== random-superset goodness experiment ==");
    println!("host\tell\ttrials\tfailure_rate");
    for (name, g, ell) in [
        ("empty50", Graph::empty(50).with_delta(3).unwrap(), 10usize),
        ("k3+47 isolated", {
            Graph::complete(3).disjoint_union(&Graph::empty(47)).with_delta(3).unwrap()
        }, 20),
        ("random50/d3", Graph::random_max_degree(50, 3, 5), 12),
    ] {
        let rep = random_subset_goodness_experiment(&g, &[], ell, 500, 11, coeff).unwrap();
        println!("{name}\t{ell}\t{}\t{:.4}", rep.trials, rep.failure_rate);
    }
    eprintln!("\nsparse random subsets of bounded-degree hosts are overwhelmingly good");
}
