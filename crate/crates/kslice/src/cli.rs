//! Command-line surface: configuration, corpus management, and deterministic
//! report emission tying the library together.
//!
//! Exit codes: 0 success, 1 invariant failure, 2 configuration error.
//! Identical invocations produce byte-identical output: serialized structs
//! have fixed field order and all floating numerics are emitted as decimal
//! strings with fixed precision.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::Zero;
use serde::Serialize;

use crate::count::{self, enumerate_slice, PinSet};
use crate::graph::Graph;
use crate::hardcore;
use crate::numeric::{decimal, rat_string, rat_to_f64};
use crate::spectral::{self, LsiOptions};
use crate::walks::{self, ChainConfig, InitRule, Variant};

const CORPUS_ENV: &str = "KSLICE_CORPUS";

#[derive(Debug, Parser)]
#[command(
    name = "kslice",
    about = "down-up walks on fixed-size independent sets, with an exact verification engine",
    version
)]
pub struct Cli {
    /// master RNG seed
    #[arg(long, global = true, default_value_t = 20_240_101)]
    pub seed: u64,
    /// numeric tolerance where one applies
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    /// output format for commands that support both
    #[arg(long, global = true, default_value = "json")]
    pub format: String,
    /// write output to a file instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the critical activity and critical density for a degree bound.
    Thresholds {
        #[arg(long)]
        delta: usize,
    },
    /// Run a down-up walk and report visit statistics.
    Sample {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "metropolis")]
        variant: Variant,
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long, default_value_t = 1)]
        thinning: u64,
        /// dump thinned samples as newline-delimited hex bitmasks
        #[arg(long)]
        traj_dump: Option<PathBuf>,
    },
    /// Exact spectral report for a slice kernel.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "metropolis")]
        variant: Variant,
        #[arg(long, default_value_t = 8)]
        lsi_restarts: usize,
    },
    /// Exact cumulant report of the hard-core size law.
    Cumulants {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 6)]
        d: usize,
    },
    /// Edgeworth estimates against exact slice probabilities.
    Edgeworth {
        #[arg(long)]
        graph: PathBuf,
        /// activity; if omitted, solved so the mean hits --target-k
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        target_k: Option<usize>,
        #[arg(long, default_value_t = 2)]
        d: usize,
        /// how many lattice points on each side of the mean to tabulate
        #[arg(long, default_value_t = 3)]
        window: usize,
    },
    /// Induced component chain: stationary law, ratio identity, gap.
    Induced {
        #[arg(long)]
        graph: PathBuf,
        /// component index in minimum-vertex order
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long)]
        k: usize,
    },
    /// Decomposition-ratio experiment over random non-negative functions.
    Decompose {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 0)]
        component: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 20)]
        trials: u64,
    },
    /// Exact TV mixing profile and envelope check.
    Mixing {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value = "metropolis")]
        variant: Variant,
        #[arg(long, default_value_t = 400)]
        horizon: usize,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
    },
    /// Sweep a graph family, emitting one CSV row per (n, k) instance.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Run the full invariant suite over a corpus directory.
    Verify {
        /// corpus root; defaults to $KSLICE_CORPUS, then ./corpus
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
}

impl CliError {
    fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }
}

pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(output) => {
            match &cli.out {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, output) {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => println!("{output}"),
            }
            ExitCode::SUCCESS
        }
        Err(CliError::Invariant(msg)) => {
            eprintln!("invariant failure: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    Graph::parse(&text).map_err(CliError::config)
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable report")
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Thresholds { delta } => cmd_thresholds(*delta),
        Command::Sample { graph, k, variant, steps, thinning, traj_dump } => {
            cmd_sample(graph, *k, *variant, *steps, *thinning, cli.seed, traj_dump.as_deref())
        }
        Command::Spectrum { graph, k, variant, lsi_restarts } => {
            cmd_spectrum(graph, *k, *variant, *lsi_restarts, cli.seed, cli.tol)
        }
        Command::Cumulants { graph, lambda, d } => cmd_cumulants(graph, *lambda, *d),
        Command::Edgeworth { graph, lambda, target_k, d, window } => {
            cmd_edgeworth(graph, *lambda, *target_k, *d, *window, cli.tol)
        }
        Command::Induced { graph, component, k } => cmd_induced(graph, *component, *k),
        Command::Decompose { graph, component, k, trials } => {
            cmd_decompose(graph, *component, *k, *trials, cli.seed)
        }
        Command::Mixing { graph, k, variant, horizon, eps } => {
            cmd_mixing(graph, *k, *variant, *horizon, *eps)
        }
        Command::Sweep { spec } => cmd_sweep(spec, &cli.format),
        Command::Verify { corpus } => cmd_verify(corpus.as_deref()),
    }
}

#[derive(Serialize)]
struct ThresholdsReport {
    schema: &'static str,
    delta: usize,
    lambda_c: String,
    lambda_c_decimal: String,
    alpha_c: String,
    alpha_c_decimal: String,
}

fn cmd_thresholds(delta: usize) -> Result<String, CliError> {
    let lc = hardcore::critical_activity(delta).map_err(CliError::config)?;
    let ac = hardcore::critical_density(delta).map_err(CliError::config)?;
    Ok(to_json(&ThresholdsReport {
        schema: "kslice/thresholds/v1",
        delta,
        lambda_c: rat_string(&lc),
        lambda_c_decimal: decimal(rat_to_f64(&lc)),
        alpha_c: rat_string(&ac),
        alpha_c_decimal: decimal(rat_to_f64(&ac)),
    }))
}

#[derive(Serialize)]
struct SampleReport {
    schema: &'static str,
    graph: String,
    n: usize,
    k: usize,
    variant: Variant,
    steps: u64,
    seed: u64,
    thinning: u64,
    initial: String,
    final_state: String,
    moves: u64,
    recorded: u64,
    visits: Vec<VisitRow>,
}

#[derive(Serialize)]
struct VisitRow {
    state: String,
    count: u64,
}

fn cmd_sample(
    path: &Path,
    k: usize,
    variant: Variant,
    steps: u64,
    thinning: u64,
    seed: u64,
    traj_dump: Option<&Path>,
) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let cfg = ChainConfig { variant, steps, seed, thinning, init: InitRule::Greedy };
    let (summary, samples) =
        walks::simulate_trajectory(&g, k, &cfg, traj_dump.is_some()).map_err(CliError::config)?;
    if let Some(dump) = traj_dump {
        let text: String = samples.iter().map(|m| format!("{m:x}\n")).collect();
        std::fs::write(dump, text)
            .map_err(|e| CliError::Config(format!("cannot write {}: {e}", dump.display())))?;
    }
    Ok(to_json(&SampleReport {
        schema: "kslice/sample/v1",
        graph: path.display().to_string(),
        n: g.n(),
        k,
        variant,
        steps,
        seed,
        thinning,
        initial: format!("{:x}", summary.initial),
        final_state: format!("{:x}", summary.final_state),
        moves: summary.moves,
        recorded: summary.recorded,
        visits: summary
            .visits
            .iter()
            .map(|&(s, c)| VisitRow { state: format!("{s:x}"), count: c })
            .collect(),
    }))
}

#[derive(Serialize)]
struct SpectrumReport {
    schema: &'static str,
    graph: String,
    n: usize,
    k: usize,
    variant: Variant,
    states: usize,
    gamma: String,
    lsi_estimate: String,
    linf_norm: String,
    lambda_max: String,
    flagged_rows: Vec<usize>,
}

fn cmd_spectrum(
    path: &Path,
    k: usize,
    variant: Variant,
    lsi_restarts: usize,
    seed: u64,
    tol: f64,
) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let space = enumerate_slice(&g, k).map_err(CliError::config)?;
    let kern = walks::build_kernel(&space, variant).map_err(CliError::config)?;
    let gamma = spectral::spectral_gap(&kern).map_err(CliError::config)?;
    let lsi = if kern.n_states() >= 2 {
        let opts =
            LsiOptions { restarts: lsi_restarts, seed, tol: tol.min(1e-10), ..Default::default() };
        spectral::lsi_constant(&kern, &opts).map_err(CliError::config)?.rho
    } else {
        0.0
    };
    let infl = spectral::influence_matrix(&g, k).map_err(CliError::config)?;
    let (lambda_max, linf) = spectral::independence_norms(&infl).map_err(CliError::config)?;
    Ok(to_json(&SpectrumReport {
        schema: "kslice/spectrum/v1",
        graph: path.display().to_string(),
        n: g.n(),
        k,
        variant,
        states: kern.n_states(),
        gamma: decimal(gamma),
        lsi_estimate: decimal(lsi),
        linf_norm: decimal(linf),
        lambda_max: decimal(lambda_max),
        flagged_rows: infl.flagged().to_vec(),
    }))
}

#[derive(Serialize)]
struct CumulantJson {
    schema: &'static str,
    graph: String,
    lambda: String,
    d: usize,
    mean: String,
    variance: String,
    kappa: Vec<String>,
    beta: Vec<String>,
}

fn cmd_cumulants(path: &Path, lambda: f64, d: usize) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let counts = count::size_counts(&g, &PinSet::none()).map_err(CliError::config)?;
    let model = hardcore::HardCoreModel::new(counts, lambda).map_err(CliError::config)?;
    let report = hardcore::cumulants(&model, d).map_err(CliError::config)?;
    Ok(to_json(&CumulantJson {
        schema: "kslice/cumulants/v1",
        graph: path.display().to_string(),
        lambda: decimal(lambda),
        d,
        mean: decimal(report.mean),
        variance: decimal(report.variance),
        kappa: report.kappa.iter().map(|&v| decimal(v)).collect(),
        beta: report.beta.iter().map(|&v| decimal(v)).collect(),
    }))
}

#[derive(Serialize)]
struct EdgeworthJson {
    schema: &'static str,
    graph: String,
    lambda: String,
    d: usize,
    mean: String,
    sigma: String,
    rows: Vec<EdgeworthRow>,
}

#[derive(Serialize)]
struct EdgeworthRow {
    k: usize,
    a: String,
    exact: String,
    estimate: String,
    abs_error: String,
}

fn cmd_edgeworth(
    path: &Path,
    lambda: Option<f64>,
    target_k: Option<usize>,
    d: usize,
    window: usize,
    tol: f64,
) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let counts = count::size_counts(&g, &PinSet::none()).map_err(CliError::config)?;
    let lambda = match (lambda, target_k) {
        (Some(l), _) => l,
        (None, Some(k)) => hardcore::solve_activity(&counts, k, tol).map_err(CliError::config)?,
        (None, None) => {
            return Err(CliError::Config("provide --lambda or --target-k".into()));
        }
    };
    let model = hardcore::HardCoreModel::new(counts, lambda).map_err(CliError::config)?;
    let report = hardcore::cumulants(&model, d + 2).map_err(CliError::config)?;
    let mean = report.mean;
    let center = mean.round() as i64;
    let mut rows = Vec::new();
    for offset in -(window as i64)..=(window as i64) {
        let k = center + offset;
        if k < 0 {
            continue;
        }
        let k = k as usize;
        let a = k as f64 - mean;
        let exact = hardcore::slice_probability_f64(&model, k);
        let estimate = hardcore::edgeworth_estimate(&report, a, d).map_err(CliError::config)?;
        rows.push(EdgeworthRow {
            k,
            a: decimal(a),
            exact: decimal(exact),
            estimate: decimal(estimate),
            abs_error: decimal((exact - estimate).abs()),
        });
    }
    Ok(to_json(&EdgeworthJson {
        schema: "kslice/edgeworth/v1",
        graph: path.display().to_string(),
        lambda: decimal(lambda),
        d,
        mean: decimal(mean),
        sigma: decimal(report.sigma()),
        rows,
    }))
}

#[derive(Serialize)]
struct InducedJson {
    schema: &'static str,
    graph: String,
    component: Vec<usize>,
    k: usize,
    states: usize,
    gamma: String,
    mk_pairs_checked: usize,
    stationary: Vec<InducedStateRow>,
}

#[derive(Serialize)]
struct InducedStateRow {
    state: String,
    pi: String,
    extensions: String,
}

fn cmd_induced(path: &Path, component: usize, k: usize) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let decomp = g.components();
    let comp = decomp
        .components
        .get(component)
        .ok_or_else(|| CliError::Config(format!("component index {component} out of range")))?;
    let chain = spectral::induced_kernel(&g, comp, k).map_err(CliError::config)?;
    let mk_pairs_checked =
        spectral::mk_identity_check(&chain).map_err(|e| CliError::Invariant(e.to_string()))?;
    let gamma = spectral::spectral_gap(&chain.kernel).map_err(CliError::config)?;
    let stationary = chain
        .kernel
        .states()
        .iter()
        .enumerate()
        .map(|(i, &s)| InducedStateRow {
            state: format!("{s:x}"),
            pi: rat_string(&chain.kernel.pi()[i]),
            extensions: chain.ext_counts[i].to_string(),
        })
        .collect();
    Ok(to_json(&InducedJson {
        schema: "kslice/induced/v1",
        graph: path.display().to_string(),
        component: comp.clone(),
        k,
        states: chain.kernel.n_states(),
        gamma: decimal(gamma),
        mk_pairs_checked,
        stationary,
    }))
}

#[derive(Serialize)]
struct DecomposeJson {
    schema: &'static str,
    graph: String,
    component: Vec<usize>,
    k: usize,
    i_g: Vec<usize>,
    u: usize,
    rows: Vec<DecomposeRow>,
    max_finite_ratio: String,
}

#[derive(Serialize)]
struct DecomposeRow {
    trial: u64,
    lhs: String,
    rhs: String,
    ratio: String,
}

fn cmd_decompose(
    path: &Path,
    component: usize,
    k: usize,
    trials: u64,
    seed: u64,
) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let decomp = g.components();
    let comp = decomp
        .components
        .get(component)
        .ok_or_else(|| CliError::Config(format!("component index {component} out of range")))?;
    // choose I_G: occupied part of the greedy slice state inside the component
    let y0 = walks::greedy_initial(&g, k).map_err(CliError::config)?;
    let i_g: Vec<usize> =
        count::mask_vertices(y0).into_iter().filter(|v| comp.contains(v)).collect();
    let u = *i_g
        .first()
        .ok_or_else(|| CliError::Config("greedy state puts no vertex in this component".into()))?;
    let slice = enumerate_slice(&g, k).map_err(CliError::config)?;
    let mut rows = Vec::new();
    let mut max_ratio: f64 = 0.0;
    for trial in 0..trials {
        let f = spectral::random_nonneg_function(slice.len(), seed ^ trial);
        let rep =
            spectral::decomposition_ratio(&g, comp, k, &i_g, u, &f).map_err(CliError::config)?;
        if rep.ratio.is_finite() {
            max_ratio = max_ratio.max(rep.ratio);
        }
        rows.push(DecomposeRow {
            trial,
            lhs: decimal(rep.lhs),
            rhs: decimal(rep.rhs),
            ratio: decimal(rep.ratio),
        });
    }
    Ok(to_json(&DecomposeJson {
        schema: "kslice/decompose/v1",
        graph: path.display().to_string(),
        component: comp.clone(),
        k,
        i_g,
        u,
        rows,
        max_finite_ratio: decimal(max_ratio),
    }))
}

#[derive(Serialize)]
struct MixingJson {
    schema: &'static str,
    graph: String,
    k: usize,
    variant: Variant,
    states: usize,
    gamma: String,
    horizon: usize,
    eps: String,
    tau_mix: Option<usize>,
    worst_start_tau: Option<usize>,
    envelope_ok: bool,
    tv: Vec<String>,
}

fn cmd_mixing(
    path: &Path,
    k: usize,
    variant: Variant,
    horizon: usize,
    eps: f64,
) -> Result<String, CliError> {
    let g = load_graph(path)?;
    let space = enumerate_slice(&g, k).map_err(CliError::config)?;
    let kern = walks::build_kernel(&space, variant).map_err(CliError::config)?;
    let gamma = spectral::spectral_gap(&kern).map_err(CliError::config)?;
    let profile = spectral::mixing_profile(&kern, 0, horizon).map_err(CliError::config)?;
    let tau = spectral::tau_from_profile(&profile, eps);
    let worst = spectral::worst_start_tau(&kern, eps, horizon).map_err(CliError::config)?;
    let min_pi = kern.pi_f64().into_iter().fold(f64::INFINITY, f64::min);
    let envelope_ok = envelope_holds(&kern, gamma, min_pi, horizon).map_err(CliError::config)?;
    Ok(to_json(&MixingJson {
        schema: "kslice/mixing/v1",
        graph: path.display().to_string(),
        k,
        variant,
        states: kern.n_states(),
        gamma: decimal(gamma),
        horizon,
        eps: decimal(eps),
        tau_mix: tau,
        worst_start_tau: worst,
        envelope_ok,
        tv: profile.tv.iter().map(|&v| decimal(v)).collect(),
    }))
}

/// TV(t) <= (1 - gamma)^t sqrt(1 / min pi) from every start, for all t up to
/// the horizon.
pub fn envelope_holds(
    kern: &walks::Kernel,
    gamma: f64,
    min_pi: f64,
    horizon: usize,
) -> Result<bool, spectral::SpectralError> {
    let base = (1.0 - gamma).max(0.0);
    let amp = (1.0 / min_pi).sqrt();
    for start in 0..kern.n_states() {
        let profile = spectral::mixing_profile(kern, start, horizon)?;
        let mut envelope = amp;
        for &tv in &profile.tv {
            if tv > envelope + 1e-12 {
                return Ok(false);
            }
            envelope *= base;
            if envelope < 1e-16 && tv < 1e-12 {
                break;
            }
        }
    }
    Ok(true)
}

#[derive(Debug, serde::Deserialize)]
struct SweepSpec {
    family: String,
    sizes: Vec<usize>,
    /// k per size: either fixed or a density fraction of n
    #[serde(default)]
    k_fixed: Option<usize>,
    #[serde(default)]
    k_fraction: Option<f64>,
    #[serde(default = "default_variant")]
    variant: String,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_one")]
    graphs_per_size: usize,
}

fn default_variant() -> String {
    "hdx".into()
}

fn default_one() -> usize {
    1
}

fn sweep_graph(family: &str, n: usize, seed: u64) -> Result<Graph, CliError> {
    match family {
        "empty" => Ok(Graph::empty(n)),
        "path" => Ok(Graph::path(n)),
        "cycle" => Ok(Graph::cycle(n)),
        "random3" => Ok(Graph::random_max_degree(n, 3, seed)),
        other => Err(CliError::Config(format!("unknown family {other:?}"))),
    }
}

fn cmd_sweep(spec_path: &Path, format: &str) -> Result<String, CliError> {
    let text = std::fs::read_to_string(spec_path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", spec_path.display())))?;
    let spec: SweepSpec = serde_json::from_str(&text)
        .map_err(|e| CliError::Config(format!("bad sweep spec: {e}")))?;
    let variant: Variant = spec.variant.parse().map_err(CliError::Config)?;
    if format != "csv" && format != "json" {
        return Err(CliError::Config(format!("unknown format {format:?}")));
    }
    let mut lines = vec![
        "family,n,k,graph_seed,states,gamma,gamma_k,linf_norm,lambda_max,lsi_estimate,tau_mix,error"
            .to_string(),
    ];
    for &n in &spec.sizes {
        for gi in 0..spec.graphs_per_size {
            let gseed = spec.seed.wrapping_add(gi as u64).wrapping_add(n as u64 * 1000);
            let k = match (spec.k_fixed, spec.k_fraction) {
                (Some(k), _) => k,
                (None, Some(frac)) => ((n as f64 * frac).round() as usize).max(1),
                (None, None) => (n / 3).max(1),
            };
            let row_prefix = format!("{},{},{},{}", spec.family, n, k, gseed);
            match sweep_row(&spec.family, n, k, gseed, variant) {
                Ok(r) => lines.push(format!(
                    "{row_prefix},{},{},{},{},{},{},{},",
                    r.states,
                    decimal(r.gamma),
                    decimal(r.gamma * k as f64),
                    decimal(r.linf),
                    decimal(r.lambda_max),
                    decimal(r.lsi),
                    r.tau_mix.map(|t| t.to_string()).unwrap_or_default(),
                )),
                Err(e) => lines.push(format!("{row_prefix},,,,,,,,{e}")),
            }
        }
    }
    Ok(lines.join("\n"))
}

/// Deterministic scaling sweep shared by the examples and the acceptance
/// suite: 50 random graphs with max degree 3 across n in {10, 12, 14}, each
/// paired with every k up to 0.9 alpha_c(3) n.
pub fn si_sweep() -> Vec<(Graph, Vec<usize>)> {
    let alpha_c = 4.0 / 17.0;
    let plan = [(10usize, 17u64), (12, 17), (14, 16)];
    let mut out = Vec::new();
    let mut idx = 0u64;
    for (n, count) in plan {
        let k_max = ((0.9 * alpha_c * n as f64).floor() as usize).max(1);
        for _ in 0..count {
            let g = Graph::random_max_degree(n, 3, 0x5357_0000 + idx);
            idx += 1;
            out.push((g, (1..=k_max).collect()));
        }
    }
    out
}

struct SweepRowOut {
    states: usize,
    gamma: f64,
    linf: f64,
    lambda_max: f64,
    lsi: f64,
    tau_mix: Option<usize>,
}

fn sweep_row(
    family: &str,
    n: usize,
    k: usize,
    seed: u64,
    variant: Variant,
) -> Result<SweepRowOut, CliError> {
    if k > n {
        return Err(CliError::Config(format!("k = {k} exceeds n = {n}")));
    }
    let g = sweep_graph(family, n, seed)?;
    let space = enumerate_slice(&g, k).map_err(CliError::config)?;
    if space.is_empty() {
        return Err(CliError::Config("empty slice".into()));
    }
    let kern = walks::build_kernel(&space, variant).map_err(CliError::config)?;
    let gamma = spectral::spectral_gap(&kern).map_err(CliError::config)?;
    let lsi = if kern.n_states() >= 2 {
        let opts = LsiOptions { restarts: 6, seed, ..Default::default() };
        spectral::lsi_constant(&kern, &opts).map_err(CliError::config)?.rho
    } else {
        0.0
    };
    let infl = spectral::influence_matrix(&g, k).map_err(CliError::config)?;
    let (lambda_max, linf) = spectral::independence_norms(&infl).map_err(CliError::config)?;
    let tau = spectral::worst_start_tau(&kern, 0.25, 4_000).map_err(CliError::config)?;
    Ok(SweepRowOut { states: kern.n_states(), gamma, linf, lambda_max, lsi, tau_mix: tau })
}

#[derive(Serialize)]
pub struct VerifySummary {
    pub schema: &'static str,
    pub corpus_root: String,
    pub graphs: usize,
    pub checks: Vec<CheckResult>,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Serialize)]
pub struct CheckResult {
    pub graph: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

fn cmd_verify(corpus: Option<&Path>) -> Result<String, CliError> {
    let root = corpus
        .map(|p| p.to_path_buf())
        .or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("corpus"));
    let summary = run_corpus_checks(&root)?;
    let text = to_json(&summary);
    if summary.failed > 0 {
        // print the report before signalling failure through the exit code
        println!("{text}");
        return Err(CliError::Invariant(format!("{} corpus check(s) failed", summary.failed)));
    }
    Ok(text)
}

/// Run the invariant suite over every graph in `<root>/graphs/*.txt`,
/// checking count fixtures from `<root>/counts/*.json` when present.
pub fn run_corpus_checks(root: &Path) -> Result<VerifySummary, CliError> {
    let graphs_dir = root.join("graphs");
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&graphs_dir)
        .map_err(|e| CliError::Config(format!("cannot read corpus {}: {e}", graphs_dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "txt"))
        .collect();
    entries.sort();
    if entries.is_empty() {
        return Err(CliError::Config(format!("corpus {} has no graphs", graphs_dir.display())));
    }
    let mut checks = Vec::new();
    for path in &entries {
        let name = path.file_stem().unwrap().to_string_lossy().to_string();
        let g = load_graph(path)?;
        corpus_graph_checks(root, &name, &g, &mut checks);
    }
    let passed = checks.iter().filter(|c| c.passed).count();
    let failed = checks.len() - passed;
    Ok(VerifySummary {
        schema: "kslice/verify/v1",
        corpus_root: root.display().to_string(),
        graphs: entries.len(),
        checks,
        passed,
        failed,
    })
}

fn push(checks: &mut Vec<CheckResult>, graph: &str, check: &str, result: Result<String, String>) {
    match result {
        Ok(detail) => {
            checks.push(CheckResult { graph: graph.into(), check: check.into(), passed: true, detail })
        }
        Err(detail) => {
            checks.push(CheckResult { graph: graph.into(), check: check.into(), passed: false, detail })
        }
    }
}

fn corpus_graph_checks(root: &Path, name: &str, g: &Graph, checks: &mut Vec<CheckResult>) {
    // canonical roundtrip
    push(checks, name, "parse-serialize-roundtrip", {
        let text = g.to_edge_list();
        match Graph::parse(&text) {
            Ok(g2) if g2.to_edge_list() == text => Ok("identity on canonical form".into()),
            Ok(_) => Err("roundtrip changed the canonical form".into()),
            Err(e) => Err(e.to_string()),
        }
    });

    // counting routes agree; pinned additivity
    let counts = match count::size_counts(g, &PinSet::none()) {
        Ok(c) => c,
        Err(e) => {
            push(checks, name, "size-counts", Err(e.to_string()));
            return;
        }
    };
    push(checks, name, "count-invariants", {
        counts.validate_unpinned(g.n()).map(|()| "a_0 = 1, a_1 = n".into())
    });
    if g.n() <= 22 {
        push(checks, name, "brute-vs-auto-counts", {
            match count::size_counts_brute(g, &PinSet::none()) {
                Ok(b) if b == counts => Ok("exact agreement".into()),
                Ok(_) => Err("brute-force and auto counts differ".into()),
                Err(e) => Err(e.to_string()),
            }
        });
    }
    push(checks, name, "pin-additivity", {
        let mut ok = true;
        'outer: for u in 0..g.n().min(4) {
            let vin = count::size_counts(g, &PinSet::pin_in(u));
            let vout = count::size_counts(g, &PinSet::pin_out(u));
            match (vin, vout) {
                (Ok(vin), Ok(vout)) => {
                    for j in 0..=g.n() {
                        if vin.get(j) + vout.get(j) != counts.get(j) {
                            ok = false;
                            break 'outer;
                        }
                    }
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            Ok("pinned counts sum to the unpinned vector".into())
        } else {
            Err("pin additivity violated".into())
        }
    });

    // expected-count fixture, when present
    let fixture = root.join("counts").join(format!("{name}.json"));
    if fixture.exists() {
        push(checks, name, "count-fixture", {
            match std::fs::read_to_string(&fixture) {
                Ok(text) => match count::SizeCountVector::from_json(&text) {
                    Ok(expected) if expected == counts => Ok("fixture matches".into()),
                    Ok(_) => Err("size-count vector differs from fixture".into()),
                    Err(e) => Err(format!("bad fixture: {e}")),
                },
                Err(e) => Err(format!("cannot read fixture: {e}")),
            }
        });
    }

    // kernel exactness for every non-empty slice of tractable size
    for k in 1..=counts.independence_number() {
        let space = match enumerate_slice(g, k) {
            Ok(s) => s,
            Err(e) => {
                push(checks, name, &format!("slice-k{k}"), Err(e.to_string()));
                continue;
            }
        };
        if space.len() > 600 {
            continue;
        }
        for variant in [Variant::Metropolis, Variant::Hdx, Variant::Modified] {
            let label = format!("kernel-{variant:?}-k{k}").to_lowercase();
            push(checks, name, &label, {
                match walks::build_kernel(&space, variant) {
                    Ok(kern) => kern
                        .verify()
                        .map(|()| "rows, balance, stationarity exact".into())
                        .map_err(|e| e.to_string()),
                    Err(e) => Err(e.to_string()),
                }
            });
        }
        // norm domination
        if k <= 3 {
            let label = format!("norm-domination-k{k}");
            push(checks, name, &label, {
                match spectral::influence_matrix(g, k) {
                    Ok(m) => match spectral::independence_norms(&m) {
                        Ok((lmax, linf)) => {
                            if lmax <= linf + 1e-8 {
                                Ok(format!("lambda_max {lmax:.6} <= linf {linf:.6}"))
                            } else {
                                Err(format!("lambda_max {lmax} > linf {linf}"))
                            }
                        }
                        Err(e) => Err(e.to_string()),
                    },
                    Err(e) => Err(e.to_string()),
                }
            });
        }
    }

    // induced chains on multi-component graphs
    let decomp = g.components();
    if decomp.components.len() >= 2 {
        let k = 2.min(counts.independence_number());
        if k >= 1 && !counts.get(k).is_zero() {
            for (ci, comp) in decomp.components.iter().enumerate().take(2) {
                let label = format!("induced-mk-c{ci}-k{k}");
                push(checks, name, &label, {
                    match spectral::induced_kernel(g, comp, k) {
                        Ok(chain) => match spectral::mk_identity_check(&chain) {
                            Ok(pairs) => Ok(format!("ratio identity exact on {pairs} pairs")),
                            Err(e) => Err(e.to_string()),
                        },
                        Err(e) => Err(e.to_string()),
                    }
                });
            }
        }
    }
}
