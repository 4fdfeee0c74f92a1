//! Acceptance suite: every release-gating property at its pinned tolerance,
//! one `criterion NN` pass line per check.
//!
//! ```bash
//! cargo test -p kslice --test acceptance -- --nocapture
//! ```
//!
//! Frozen regression constants live in `tests/fixtures/frozen_bounds.json`
//! and are regenerated by `cargo run --release -p kslice --example
//! freeze_bounds` (see that example for the margins applied).

use kslice::cli::si_sweep;
use kslice::count::{
    enumerate_slice, size_counts, size_counts_brute, size_counts_structured, PinSet,
};
use kslice::graph::Graph;
use kslice::hardcore::{
    cumulant_stability, cumulants, edgeworth_estimate, slice_probability, slice_probability_f64,
    solve_activity, HardCoreModel,
};
use kslice::count::big_ratio;
use kslice::numeric::rat_to_f64;
use kslice::spectral::{
    lsi_constant, mixing_profile, mk_identity_check, random_nonneg_function, solve_poisson,
    spectrum, stein_difference_check, worst_start_tau, LsiOptions,
};
use kslice::walks::{
    acceptance_rate, build_kernel_capped, greedy_initial, rejection_sample, ChainConfig,
    RejectionOptions, Variant,
};
use num_bigint::BigUint;
use num_traits::Zero;

const VARIANTS: [Variant; 3] = [Variant::Metropolis, Variant::Hdx, Variant::Modified];
const KERNEL_CAP: usize = 600;

fn workspace_root() -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").canonicalize().unwrap()
}

fn corpus() -> Vec<(String, Graph)> {
    let dir = workspace_root().join("corpus/graphs");
    let mut out: Vec<(String, Graph)> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("corpus at {}: {e}", dir.display()))
        .filter_map(|e| e.ok())
        .filter(|e| e.path().extension().is_some_and(|x| x == "txt"))
        .map(|e| {
            let name = e.path().file_stem().unwrap().to_string_lossy().to_string();
            let text = std::fs::read_to_string(e.path()).unwrap();
            (name, Graph::parse(&text).unwrap())
        })
        .collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    assert!(!out.is_empty());
    out
}

#[derive(serde::Deserialize)]
struct Frozen {
    edgeworth_err_n32_bound: f64,
    lclt_sqrt_n_lo: f64,
    lclt_sqrt_n_hi: f64,
    stability_scaling_bound: f64,
    linf_sweep_bound: f64,
    gamma_k_floor: f64,
    tau_mix_coefficient: f64,
    decomposition_ratio_bound: f64,
    occupancy_modulus_bound: f64,
    induced_stationary_ratio_bound: f64,
    induced_transition_dev_bound: f64,
}

fn frozen() -> Frozen {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/frozen_bounds.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Every slice kernel of a corpus graph, capped at KERNEL_CAP states.
fn corpus_kernels(
    g: &Graph,
    variants: &[Variant],
) -> Vec<(usize, Variant, kslice::walks::Kernel)> {
    let counts = size_counts(g, &PinSet::none()).unwrap();
    let mut out = Vec::new();
    for k in 1..=counts.independence_number() {
        let space = enumerate_slice(g, k).unwrap();
        if space.is_empty() || space.len() > KERNEL_CAP {
            continue;
        }
        for &variant in variants {
            out.push((k, variant, build_kernel_capped(&space, variant, KERNEL_CAP).unwrap()));
        }
    }
    out
}

#[test]
fn c01_exactness_core() {
    let mut kernels = 0usize;
    for (name, g) in corpus() {
        assert!(g.n() <= 14 && g.delta() <= 4, "corpus contract: {name}");
        for (k, variant, kern) in corpus_kernels(&g, &VARIANTS) {
            // exact invariants: rows, reversibility, stationarity
            kern.verify().unwrap_or_else(|e| panic!("{name} k={k} {variant:?}: {e}"));
            // stationary law is the uniform slice law, exactly
            let m = kern.n_states();
            let uniform = kslice::numeric::Rat::new(1.into(), (m as i64).into());
            assert!(kern.pi().iter().all(|p| *p == uniform), "{name} k={k} {variant:?}: pi");
            // f64 materialization meets the 1e-14 contract
            let rows = kern.sparse_f64();
            for (x, row) in rows.iter().enumerate() {
                let sum: f64 = row.iter().map(|(_, p)| p).sum();
                assert!((sum - 1.0).abs() <= 1e-14, "{name} k={k} {variant:?} row {x}");
                for &(y, p) in row {
                    let back = rows[y].iter().find(|(j, _)| *j == x).map(|(_, q)| *q).unwrap_or(0.0);
                    assert!((p - back).abs() <= 1e-14, "{name} k={k} {variant:?} balance");
                }
            }
            kernels += 1;
        }
    }
    println!("criterion 01 (exactness core): PASS: {kernels} kernels exact");
}

fn random_forest(n: usize, seed: u64) -> Graph {
    // random attachment forest: each vertex picks an earlier parent or none
    let mut edges = Vec::new();
    let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15) | 1;
    let mut next = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        state
    };
    for v in 1..n {
        if next() % 3 != 0 {
            edges.push(((next() as usize) % v, v));
        }
    }
    Graph::new(n, &edges).unwrap()
}

#[test]
fn c02_counting_oracle_agreement() {
    let mut instances = 0usize;
    let mut graphs: Vec<Graph> = Vec::new();
    for n in 1..=22 {
        graphs.push(Graph::path(n));
        if n >= 3 {
            graphs.push(Graph::cycle(n));
        }
    }
    for seed in 0..10 {
        graphs.push(random_forest(22, seed));
    }
    // star, caterpillar, and a two-component forest
    graphs.push(Graph::new(7, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (0, 6)]).unwrap());
    graphs.push(
        Graph::new(
            12,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 5), (1, 6), (2, 7), (3, 8), (4, 9), (2, 10), (3, 11)],
        )
        .unwrap(),
    );
    graphs.push(Graph::path(9).disjoint_union(&Graph::new(8, &[(0, 1), (0, 2), (2, 3), (2, 4), (4, 5), (4, 6), (6, 7)]).unwrap()));
    for g in &graphs {
        let brute = size_counts_brute(g, &PinSet::none()).unwrap();
        let structured = size_counts_structured(g, &PinSet::none()).unwrap();
        assert_eq!(brute, structured, "route disagreement at n = {}", g.n());
        // pinned additivity, exact
        for u in [0, g.n() / 2] {
            if u >= g.n() {
                continue;
            }
            let vin = size_counts(g, &PinSet::pin_in(u)).unwrap();
            let vout = size_counts(g, &PinSet::pin_out(u)).unwrap();
            for j in 0..=g.n() {
                assert_eq!(vin.get(j) + vout.get(j), brute.get(j));
            }
        }
        instances += 1;
    }
    println!("criterion 02 (counting oracle agreement): PASS: {instances} instances, exact equality");
}

fn cycle_sweep() -> Vec<(usize, usize, HardCoreModel)> {
    [50usize, 100, 200, 400]
        .into_iter()
        .map(|n| {
            let k = (0.2 * n as f64).round() as usize;
            let counts = size_counts_structured(&Graph::cycle(n), &PinSet::none()).unwrap();
            let lambda = solve_activity(&counts, k, 1e-9).unwrap();
            (n, k, HardCoreModel::new(counts, lambda).unwrap())
        })
        .collect()
}

#[test]
fn c03_lclt_scaling() {
    let fr = frozen();
    let sweep = cycle_sweep();
    let scaled: Vec<(usize, f64)> = sweep
        .iter()
        .map(|(n, k, model)| (*n, slice_probability_f64(model, *k) * (*n as f64).sqrt()))
        .collect();
    let reference = scaled.last().unwrap().1;
    for &(n, v) in &scaled {
        assert!(v >= fr.lclt_sqrt_n_lo && v <= fr.lclt_sqrt_n_hi, "n={n}: {v}");
        if n >= 100 {
            assert!(
                (v - reference).abs() <= 0.10 * reference,
                "n={n}: {v} vs reference {reference}"
            );
        }
    }
    println!(
        "criterion 03 (LCLT scaling): PASS: p*sqrt(n) in [{:.4}, {:.4}], within 10% of n=400 for n>=100",
        scaled.iter().map(|t| t.1).fold(f64::INFINITY, f64::min),
        scaled.iter().map(|t| t.1).fold(0.0f64, f64::max),
    );
}

#[test]
fn c04_edgeworth_accuracy() {
    let fr = frozen();
    let mut vals = Vec::new();
    for (n, k, model) in cycle_sweep() {
        let report = cumulants(&model, 8).unwrap();
        let a = k as f64 - report.mean;
        let exact = slice_probability_f64(&model, k);
        let est = edgeworth_estimate(&report, a, 2).unwrap();
        let v = (exact - est).abs() * (n as f64).powf(1.5);
        assert!(v <= fr.edgeworth_err_n32_bound, "n={n}: {v} > {}", fr.edgeworth_err_n32_bound);
        vals.push((n, v));
    }
    // no growth trend: the scaled error at n = 400 does not exceed n = 50
    assert!(vals.last().unwrap().1 <= vals.first().unwrap().1, "scaled error grew: {vals:?}");
    println!(
        "criterion 04 (Edgeworth accuracy): PASS: err*n^1.5 = {:?} <= {:.5}, decaying",
        vals.iter().map(|t| format!("{:.5}", t.1)).collect::<Vec<_>>(),
        fr.edgeworth_err_n32_bound
    );
}

#[test]
fn c05_cumulant_stability() {
    let lambda = 0.5;
    let mut series = Vec::new();
    for n in [50usize, 100, 200, 400] {
        let diffs = cumulant_stability(&Graph::path(n), n / 2, lambda, 4).unwrap();
        let max = diffs.iter().map(rat_to_f64).fold(0.0f64, f64::max);
        series.push((n, max));
    }
    let first = series.first().unwrap().1;
    let last = series.last().unwrap().1;
    assert!(last <= 1.25 * first, "stability grew: {series:?}");
    println!(
        "criterion 05 (cumulant stability): PASS: max_j<=4 diff at n=400 is {:.6} <= 1.25 * {:.6}",
        last, first
    );
}

#[test]
fn c06_linf_independence_sweep() {
    let fr = frozen();
    let mut max_linf: f64 = 0.0;
    let mut instances = 0usize;
    for (g, ks) in si_sweep() {
        for k in ks {
            let m = kslice::spectral::influence_matrix(&g, k).unwrap();
            let (lmax, linf) = kslice::spectral::independence_norms(&m).unwrap();
            assert!(lmax <= linf + 1e-8, "n={} k={k}: lambda_max {lmax} > linf {linf}", g.n());
            max_linf = max_linf.max(linf);
            instances += 1;
        }
    }
    assert!(max_linf <= fr.linf_sweep_bound, "{max_linf} > {}", fr.linf_sweep_bound);
    println!(
        "criterion 06 (linf independence sweep): PASS: {instances} instances, max linf {max_linf:.6} <= {:.4}",
        fr.linf_sweep_bound
    );
}

#[test]
fn c07_spectral_gap_scaling() {
    let fr = frozen();
    let mut min_gk = f64::INFINITY;
    for (g, ks) in si_sweep() {
        for k in ks {
            let space = enumerate_slice(&g, k).unwrap();
            let kern = build_kernel_capped(&space, Variant::Metropolis, KERNEL_CAP).unwrap();
            let gamma = kslice::spectral::spectral_gap(&kern).unwrap();
            min_gk = min_gk.min(gamma * k as f64);
        }
    }
    assert!(min_gk >= fr.gamma_k_floor, "{min_gk} < {}", fr.gamma_k_floor);
    println!(
        "criterion 07 (spectral gap scaling): PASS: min gamma*k = {min_gk:.6} >= {:.6}",
        fr.gamma_k_floor
    );
}

#[test]
fn c08_lsi_consistency() {
    let opts = LsiOptions { restarts: 4, ..Default::default() };
    let mut kernels = 0usize;
    let mut degenerate = 0usize;
    for (name, g) in corpus() {
        for (k, variant, kern) in corpus_kernels(&g, &VARIANTS) {
            if kern.n_states() < 2 {
                degenerate += 1;
                continue;
            }
            let rep = lsi_constant(&kern, &opts)
                .unwrap_or_else(|e| panic!("{name} k={k} {variant:?}: {e}"));
            assert!(
                rep.rho <= rep.gamma / 2.0 + 1e-6,
                "{name} k={k} {variant:?}: rho {} > gamma/2 {}",
                rep.rho,
                rep.gamma / 2.0
            );
            // certificate: rho Ent(f*) <= E(sqrt f*, sqrt f*) (1 + 1e-9)
            let pi = kern.pi_f64();
            let f = &rep.certificate;
            let mean: f64 = pi.iter().zip(f).map(|(p, v)| p * v).sum();
            let ent: f64 = pi
                .iter()
                .zip(f)
                .map(|(p, v)| if *v > 0.0 { p * v * v.ln() } else { 0.0 })
                .sum::<f64>()
                - mean * mean.ln();
            let sq: Vec<f64> = f.iter().map(|v| v.sqrt()).collect();
            let mut energy = 0.0;
            for (x, row) in kern.sparse_f64().iter().enumerate() {
                for &(y, p) in row {
                    if y != x {
                        energy += pi[x] * p * (sq[x] - sq[y]).powi(2);
                    }
                }
            }
            energy *= 0.5;
            assert!(rep.rho * ent <= energy * (1.0 + 1e-9) + 1e-300, "{name} k={k} {variant:?}");
            kernels += 1;
        }
    }
    println!(
        "criterion 08 (LSI consistency): PASS: {kernels} kernels (rho <= gamma/2 + 1e-6), {degenerate} single-state slices skipped"
    );
}

#[test]
fn c09_induced_chain_exactness() {
    let mut instances = 0usize;
    let mut pairs = 0usize;
    for (name, g) in corpus() {
        let decomp = g.components();
        if decomp.components.len() < 2 {
            continue;
        }
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        for k in 1..=counts.independence_number().min(4) {
            if counts.get(k).is_zero() {
                continue;
            }
            let slice = enumerate_slice(&g, k).unwrap();
            for comp in &decomp.components {
                let chain = kslice::spectral::induced_kernel(&g, comp, k)
                    .unwrap_or_else(|e| panic!("{name} k={k}: {e}"));
                chain.kernel.verify().unwrap();
                // stationary law equals the slice marginal, by direct
                // enumeration of projections (independent oracle route)
                let comp_mask = kslice::count::vertices_mask(comp);
                let a_k = BigUint::from(slice.len());
                for (i, &state) in chain.kernel.states().iter().enumerate() {
                    let matching = slice
                        .states()
                        .iter()
                        .filter(|&&s| project(s, comp_mask, comp) == state)
                        .count();
                    let marginal = big_ratio(&BigUint::from(matching), &a_k);
                    assert_eq!(chain.kernel.pi()[i], marginal, "{name} k={k} state {i}");
                }
                pairs += mk_identity_check(&chain).unwrap();
                instances += 1;
            }
        }
    }
    assert!(instances > 0 && pairs > 0);
    println!(
        "criterion 09 (induced-chain exactness): PASS: {instances} chains, marginals exact, ratio identity on {pairs} pairs"
    );
}

/// Project a global slice state onto component-local bit coordinates.
fn project(state: u64, comp_mask: u64, comp: &[usize]) -> u64 {
    let inside = state & comp_mask;
    let mut local = 0u64;
    for (b, &v) in comp.iter().enumerate() {
        if inside >> v & 1 == 1 {
            local |= 1 << b;
        }
    }
    local
}

#[test]
fn c10_stein_poisson_identities() {
    // Poisson reconstruction on a spread of corpus kernels
    let mut poisson_checked = 0usize;
    for (name, g) in corpus() {
        for (k, variant, kern) in corpus_kernels(&g, &[Variant::Hdx]) {
            if kern.n_states() < 2 || kern.n_states() > 200 {
                continue;
            }
            // skip reducible chains (frozen slices): poisson needs ergodicity
            let gamma = kslice::spectral::spectral_gap(&kern).unwrap();
            if gamma < 1e-9 {
                continue;
            }
            for seed in 0..3 {
                let f = random_nonneg_function(kern.n_states(), seed);
                let h = solve_poisson(&kern, &f)
                    .unwrap_or_else(|e| panic!("{name} k={k} {variant:?}: {e}"));
                let pi = kern.pi_f64();
                let mean: f64 = pi.iter().zip(&f).map(|(p, v)| p * v).sum();
                for (x, row) in kern.sparse_f64().iter().enumerate() {
                    let ph: f64 = row.iter().map(|&(y, p)| p * h[y]).sum();
                    assert!(
                        (mean + h[x] - ph - f[x]).abs() <= 1e-10,
                        "{name} k={k}: reconstruction residual"
                    );
                }
                poisson_checked += 1;
            }
        }
    }
    // Stein difference identity on multi-component instances
    let mut stein_checked = 0usize;
    let mut worst: f64 = 0.0;
    for (name, g) in corpus() {
        let decomp = g.components();
        if decomp.components.len() < 2 {
            continue;
        }
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        let k = 2.min(counts.independence_number());
        if k == 0 || counts.get(k).is_zero() {
            continue;
        }
        let slice = enumerate_slice(&g, k).unwrap();
        let y0 = match greedy_initial(&g, k) {
            Ok(y) => y,
            Err(_) => continue,
        };
        for comp in &decomp.components {
            let i_g: Vec<usize> = kslice::count::mask_vertices(y0)
                .into_iter()
                .filter(|v| comp.contains(v))
                .collect();
            if i_g.is_empty() {
                continue;
            }
            let u = i_g[0];
            for seed in 0..3 {
                let f = random_nonneg_function(slice.len(), 40 + seed);
                match stein_difference_check(&g, comp, k, &i_g, u, &f) {
                    Ok(residual) => {
                        assert!(residual <= 1e-9, "{name}: stein residual {residual}");
                        worst = worst.max(residual);
                        stein_checked += 1;
                    }
                    Err(kslice::spectral::SpectralError::NonErgodic { .. }) => {
                        // frozen constrained chain: identity not testable here
                    }
                    Err(e) => panic!("{name}: {e}"),
                }
            }
        }
    }
    assert!(poisson_checked > 0 && stein_checked > 0);
    println!(
        "criterion 10 (Stein/Poisson): PASS: {poisson_checked} reconstructions <= 1e-10, {stein_checked} Stein residuals <= 1e-9 (worst {worst:.2e})"
    );
}

#[test]
fn c11_sampler_statistics() {
    // rejection sampling on P3: expected attempts 5/3
    let g = Graph::path(3);
    let trials = 10_000u64;
    let mut attempts = 0u64;
    for t in 0..trials {
        let (mask, a) =
            rejection_sample(&g, 1.0, 1, 100_000 + t, &RejectionOptions::default()).unwrap();
        assert_eq!(mask.count_ones(), 1);
        attempts += a;
    }
    let mean = attempts as f64 / trials as f64;
    let p: f64 = 3.0 / 5.0;
    let sd = (1.0 - p).sqrt() / p;
    let tol = 3.0 * sd / (trials as f64).sqrt();
    assert!((mean - 5.0 / 3.0).abs() <= tol, "P3: mean {mean} vs 5/3 +- {tol}");

    // two random n = 12 instances at lambda = 0.5, k = 3
    let mut instance_summary = Vec::new();
    for seed in [7u64, 13] {
        let g = Graph::random_max_degree(12, 3, seed);
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        let model = HardCoreModel::new(counts, 0.5).unwrap();
        let p: f64 = rat_to_f64(&slice_probability(&model, 3));
        let expected = 1.0 / p;
        let mut attempts = 0u64;
        for t in 0..trials {
            let (_, a) = rejection_sample(
                &g,
                0.5,
                3,
                200_000 + seed * 31 + t,
                &RejectionOptions::default(),
            )
            .unwrap();
            attempts += a;
        }
        let mean = attempts as f64 / trials as f64;
        let sd = (1.0 - p).sqrt() / p;
        let tol = 3.0 * sd / (trials as f64).sqrt();
        assert!(
            (mean - expected).abs() <= tol,
            "n=12 seed {seed}: mean {mean} vs {expected} +- {tol}"
        );
        instance_summary.push(format!("seed {seed}: {mean:.3} vs {expected:.3}"));
    }

    // metropolis acceptance against the density threshold
    let mut rate_checked = 0usize;
    for (name, g) in corpus() {
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        for k in 1..=counts.independence_number() {
            if 17 * (g.delta() + 1) * k > 16 * g.n() {
                continue;
            }
            let cfg = ChainConfig::new(Variant::Metropolis, 20_000, 500 + k as u64);
            let rep = acceptance_rate(&g, k, &cfg).unwrap();
            assert!(rep.threshold_satisfied);
            assert!(
                rep.rate >= 1.0 / 17.0 - 3.0 * rep.stderr,
                "{name} k={k}: rate {} below 1/17 - 3se",
                rep.rate
            );
            rate_checked += 1;
        }
    }
    assert!(rate_checked > 0);
    println!(
        "criterion 11 (sampler statistics): PASS: P3 attempts {mean:.3} vs 1.667; n=12 {}; {rate_checked} acceptance-rate instances >= 1/17 - 3se",
        instance_summary.join("; ")
    );
}

#[test]
fn c12_mixing_envelope() {
    let fr = frozen();
    // exact TV envelope on every corpus kernel, spectral certificate for the tail
    let mut kernels = 0usize;
    for (name, g) in corpus() {
        for (k, variant, kern) in corpus_kernels(&g, &VARIANTS) {
            let m = kern.n_states();
            let vals = spectrum(&kern).unwrap();
            let gamma = if m == 1 { 1.0 } else { 1.0 - vals[1] };
            let min_pi = kern.pi_f64().into_iter().fold(f64::INFINITY, f64::min);
            let amp = (1.0 / min_pi).sqrt();
            let base = (1.0 - gamma).max(0.0);
            // tail certificate: the slowest mode is no faster than the bound's base
            let lambda_min = *vals.last().unwrap();
            let certified = m == 1 || lambda_min >= -(base + 1e-12);
            let horizon = if certified { 300 } else { 4_000 };
            for start in 0..m {
                let profile = mixing_profile(&kern, start, horizon).unwrap();
                let mut envelope = amp;
                for (t, &tv) in profile.tv.iter().enumerate() {
                    assert!(
                        tv <= envelope + 1e-12,
                        "{name} k={k} {variant:?} start {start} t={t}: tv {tv} > envelope {envelope}"
                    );
                    // data-processing monotonicity while we are at it
                    if t + 1 < profile.tv.len() {
                        assert!(profile.tv[t + 1] <= tv + 1e-12);
                    }
                    envelope *= base;
                    if tv < 1e-13 && certified {
                        break;
                    }
                }
            }
            assert!(certified, "{name} k={k} {variant:?}: slow negative mode, extend horizon");
            kernels += 1;
        }
    }
    // empirical mixing-time scaling over the random sweep
    let mut max_coeff: f64 = 0.0;
    for (g, ks) in si_sweep() {
        for k in ks {
            let space = enumerate_slice(&g, k).unwrap();
            let kern = build_kernel_capped(&space, Variant::Metropolis, KERNEL_CAP).unwrap();
            if kern.n_states() < 2 {
                continue;
            }
            let tau = worst_start_tau(&kern, 0.25, 4_000).unwrap().expect("mixes in horizon");
            let coeff = tau as f64 / (k as f64 * (4.0 * g.n() as f64).ln());
            max_coeff = max_coeff.max(coeff);
        }
    }
    assert!(max_coeff <= fr.tau_mix_coefficient, "{max_coeff} > {}", fr.tau_mix_coefficient);
    println!(
        "criterion 12 (mixing envelope): PASS: {kernels} kernels within (1-gamma)^t sqrt(1/min pi); tau(1/4) <= {:.3} k log(4n) on the sweep",
        fr.tau_mix_coefficient
    );
}

/// Supporting frozen-bound checks that accompany the numbered criteria:
/// recorded corpus-level maxima stay under their frozen ceilings.
#[test]
fn frozen_corpus_records_hold() {
    let fr = frozen();

    // LCLT bracket and conditioning stability on the cycle sweep
    for (n, k, model) in cycle_sweep() {
        let v = slice_probability_f64(&model, k) * (n as f64).sqrt();
        assert!(v >= fr.lclt_sqrt_n_lo && v <= fr.lclt_sqrt_n_hi);
        let g = Graph::cycle(n);
        let surgered = g.delete_closed_neighborhood(0).unwrap().graph;
        let cond_counts = size_counts_structured(&surgered, &PinSet::none()).unwrap();
        let cond = HardCoreModel::new(cond_counts, model.lambda()).unwrap();
        let p_cond = slice_probability_f64(&cond, k - 1);
        let p = slice_probability_f64(&model, k);
        let stab = (p_cond - p).abs() * (n as f64).powf(1.5);
        assert!(stab <= fr.stability_scaling_bound, "n={n}: {stab}");
    }

    // occupancy-ratio modulus over the probe region
    let mut occ_max: f64 = 0.0;
    for (_, g) in corpus() {
        let lambda =
            0.9 * kslice::hardcore::critical_activity_f64(g.delta().max(3)).unwrap();
        for u in 0..g.n() {
            for s in 0..8 {
                let th = 2.0 * std::f64::consts::PI * s as f64 / 8.0;
                let t = num_complex::Complex64::new(0.05 * th.cos(), 0.05 * th.sin());
                occ_max = occ_max.max(kslice::count::occupancy_ratio(&g, u, lambda, t).unwrap().norm());
            }
        }
    }
    assert!(occ_max <= fr.occupancy_modulus_bound);

    // decomposition ratios and induced-vs-hardcore ranges
    let mut decomp_max: f64 = 0.0;
    let mut stat_max: f64 = 0.0;
    let mut tr_max: f64 = 0.0;
    for (_, g) in corpus() {
        let decomp = g.components();
        if decomp.components.len() < 2 {
            continue;
        }
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        let k = 2.min(counts.independence_number());
        if k == 0 || counts.get(k).is_zero() {
            continue;
        }
        let slice = enumerate_slice(&g, k).unwrap();
        let y0 = match greedy_initial(&g, k) {
            Ok(y) => y,
            Err(_) => continue,
        };
        for comp in decomp.components.iter().take(2) {
            if let Ok(cmp) = kslice::spectral::induced_vs_hardcore(&g, comp, k) {
                stat_max = stat_max.max(cmp.stationary_ratio_max).max(1.0 / cmp.stationary_ratio_min);
                tr_max = tr_max.max(cmp.transition_ratio_max).max(1.0 / cmp.transition_ratio_min);
            }
            let i_g: Vec<usize> = kslice::count::mask_vertices(y0)
                .into_iter()
                .filter(|v| comp.contains(v))
                .collect();
            if i_g.is_empty() {
                continue;
            }
            for seed in 0..10 {
                let f = random_nonneg_function(slice.len(), 7_000 + seed);
                if let Ok(rep) =
                    kslice::spectral::decomposition_ratio(&g, comp, k, &i_g, i_g[0], &f)
                {
                    if rep.ratio.is_finite() {
                        decomp_max = decomp_max.max(rep.ratio);
                    }
                }
            }
        }
    }
    assert!(decomp_max <= fr.decomposition_ratio_bound);
    assert!(stat_max <= fr.induced_stationary_ratio_bound);
    assert!(tr_max <= fr.induced_transition_dev_bound);
    println!(
        "frozen corpus records: PASS: occupancy {occ_max:.3}, decomposition {decomp_max:.3}, induced ({stat_max:.3}, {tr_max:.3}) under frozen ceilings"
    );
}

/// Cross-composition invariant: solve_activity followed by the exact mean
/// lands on k within tolerance, for every corpus (graph, k) pair with k
/// below the independence number.
#[test]
fn solved_activity_hits_every_corpus_mean() {
    let tol = 1e-9;
    let mut pairs = 0usize;
    for (name, g) in corpus() {
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        let independence = counts.independence_number();
        for k in 1..independence {
            let lambda = solve_activity(&counts, k, tol)
                .unwrap_or_else(|e| panic!("{name} k={k}: {e}"));
            let model = HardCoreModel::new(counts.clone(), lambda).unwrap();
            let mean = rat_to_f64(&model.mean());
            assert!((mean - k as f64).abs() <= tol * 1.01, "{name} k={k}: mean {mean}");
            pairs += 1;
        }
    }
    assert!(pairs > 0);
    println!("solved activities: PASS: {pairs} (graph, k) pairs hit the mean within 1e-9");
}

/// The down-up visit law matches the uniform slice law: chi-square test at
/// significance 1e-3 on every corpus instance with a small slice.
#[test]
fn long_run_frequencies_match_pi() {
    let mut tested = 0usize;
    for (name, g) in corpus() {
        let counts = size_counts(&g, &PinSet::none()).unwrap();
        for k in 1..=counts.independence_number() {
            let space = enumerate_slice(&g, k).unwrap();
            let m = space.len();
            if m < 2 || m > 50 {
                continue;
            }
            // frequencies can only converge on irreducible chains; slices at
            // the independence number can split into unreachable pieces
            // (e.g. the two maximum independent sets of C6), and modified
            // walks freeze on single-component graphs
            for variant in [Variant::Metropolis, Variant::Hdx] {
                let space_kern = build_kernel_capped(&space, variant, KERNEL_CAP).unwrap();
                let gamma = kslice::spectral::spectral_gap(&space_kern).unwrap();
                if gamma < 1e-9 {
                    continue;
                }
                // thin by several relaxation times so the chi-square null
                // (independent multinomial samples) applies: correlation
                // after `thinning` steps is at most (1 - gamma)^thinning ~ 1%
                let thinning = ((4.6 / gamma).ceil() as u64).clamp(1, 300);
                let recorded = 20_000u64;
                let cfg = ChainConfig {
                    thinning,
                    steps: thinning * recorded,
                    init: kslice::walks::InitRule::Fixed(space.state(0)),
                    ..ChainConfig::new(variant, 0, 31 + k as u64)
                };
                let s = kslice::walks::simulate(&g, k, &cfg).unwrap();
                let total: u64 = s.visits.iter().map(|(_, c)| c).sum();
                let expected = total as f64 / m as f64;
                let mut chi2 = (m - s.visits.len()) as f64 * expected; // unvisited states
                for &(_, c) in &s.visits {
                    chi2 += (c as f64 - expected).powi(2) / expected;
                }
                let cap = kslice::numeric::chi_square_quantile(0.999, m - 1);
                assert!(
                    chi2 <= cap,
                    "{name} k={k} {variant:?}: chi2 {chi2:.2} > {cap:.2} (m={m})"
                );
                tested += 1;
            }
        }
    }
    assert!(tested > 0);
    println!("long-run frequencies: PASS: {tested} chains pass chi-square at 1e-3");
}
