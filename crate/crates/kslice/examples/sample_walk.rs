//! Simulate the three down-up walk variants and compare visit frequencies
//! against the uniform slice law; estimate the Metropolis acceptance rate.
//!
//! ```bash
//! cargo run --release -p kslice --example sample_walk
//! ```

use kslice::count::enumerate_slice;
use kslice::graph::Graph;
use kslice::walks::{acceptance_rate, rejection_sample, simulate, ChainConfig, RejectionOptions, Variant};

fn main() {
    let g = Graph::random_max_degree(12, 3, 7);
    let k = 3;
    let space = enumerate_slice(&g, k).unwrap();
    eprintln!("random graph: n = {}, k = {k}, slice size = {}", g.n(), space.len());

    println!("variant\tsteps\tmoves\tdistinct\tmax_rel_freq_dev");
    for variant in [Variant::Metropolis, Variant::Hdx] {
        let cfg = ChainConfig::new(variant, 400_000, 11);
        let s = simulate(&g, k, &cfg).unwrap();
        let total: u64 = s.visits.iter().map(|(_, c)| c).sum();
        let want = 1.0 / space.len() as f64;
        let max_dev = s
            .visits
            .iter()
            .map(|&(_, c)| ((c as f64 / total as f64) - want).abs() / want)
            .fold(0.0f64, f64::max);
        println!(
            "{variant:?}\t{}\t{}\t{}\t{max_dev:.4}",
            s.steps,
            s.moves,
            s.visits.len()
        );
    }

    let rep = acceptance_rate(&g, k, &ChainConfig::new(Variant::Metropolis, 100_000, 3)).unwrap();
    println!(
        "\nmetropolis move rate: {:.4} +- {:.4} (density precondition satisfied: {})",
        rep.rate, rep.stderr, rep.threshold_satisfied
    );

    eprintln!("\n== rejection sampling from the hard-core model ==");
    let trials = 2_000;
    let mut attempts = 0u64;
    for t in 0..trials {
        let (mask, a) = rejection_sample(&g, 0.5, k, 900 + t, &RejectionOptions::default()).unwrap();
        assert_eq!(mask.count_ones() as usize, k);
        attempts += a;
    }
    println!(
        "rejection sampler: mean attempts per size-{k} draw over {trials} trials = {:.3}",
        attempts as f64 / trials as f64
    );
}
