//! Markov chain simulators and exact kernel builders: the Metropolis down-up
//! walk, the HDX down-up walk, the modified (cross-component) down-up walk,
//! hard-core Glauber dynamics, rejection sampling, and coupling experiments.
//!
//! Kernels are built with exact rational entries and verified against
//! row-stochasticity, detailed balance, and stationarity at construction.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::count::{self, enumerate_slice, CountError, SliceSpace};
use crate::graph::{Graph, GraphError};
use crate::numeric::{rat_from_f64, rat_to_f64, stream_seed, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum WalkError {
    #[error("walk state masks support at most 64 vertices (n = {n})")]
    TooManyVertices { n: usize },
    #[error("state {mask:#b} is not an independent set of the requested size")]
    InvalidState { mask: u64 },
    #[error("slice is empty")]
    EmptySlice,
    #[error("state space of size {size} exceeds the cap {cap}")]
    StateSpaceTooLarge { size: usize, cap: usize },
    #[error("initial-state rule failed to produce an independent set of size {k}")]
    NoInitialState { k: usize },
    #[error("no proposals observed (steps = 0)")]
    NoProposals,
    #[error("rejection sampler exceeded the attempt cap {cap}")]
    AttemptCapExceeded { cap: u64 },
    #[error("no valid initial discrepancy pair exists")]
    NoDiscrepancyPair,
    #[error("kernel invariant violated: {0}")]
    KernelInvariant(String),
    #[error("invalid configuration: {0}")]
    BadConfig(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Down-up walk variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    /// u uniform in I, v uniform in V, accept iff the swap stays in the slice.
    Metropolis,
    /// u uniform in I, new vertex uniform over all valid completions (u allowed).
    Hdx,
    /// u, v uniform in V; move only when u, v lie in different components.
    Modified,
}

impl std::str::FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "metropolis" => Ok(Variant::Metropolis),
            "hdx" => Ok(Variant::Hdx),
            "modified" => Ok(Variant::Modified),
            other => Err(format!("unknown variant {other:?}")),
        }
    }
}

/// Tag describing what law a kernel encodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelKind {
    Metropolis,
    Hdx,
    Modified,
    Glauber,
    Induced,
}

impl From<Variant> for KernelKind {
    fn from(v: Variant) -> Self {
        match v {
            Variant::Metropolis => KernelKind::Metropolis,
            Variant::Hdx => KernelKind::Hdx,
            Variant::Modified => KernelKind::Modified,
        }
    }
}

/// Row-stochastic sparse transition matrix with exact rational entries,
/// tagged with its stationary distribution.
#[derive(Debug, Clone)]
pub struct Kernel {
    kind: KernelKind,
    states: Vec<u64>,
    rows: Vec<Vec<(usize, Rat)>>,
    pi: Vec<Rat>,
}

impl Kernel {
    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn n_states(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn row(&self, i: usize) -> &[(usize, Rat)] {
        &self.rows[i]
    }

    pub fn pi(&self) -> &[Rat] {
        &self.pi
    }

    pub fn pi_f64(&self) -> Vec<f64> {
        self.pi.iter().map(rat_to_f64).collect()
    }

    pub fn entry(&self, x: usize, y: usize) -> Rat {
        self.rows[x]
            .iter()
            .find(|(j, _)| *j == y)
            .map(|(_, p)| p.clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Dense f64 copy, row-major.
    pub fn to_dense_f64(&self) -> Vec<Vec<f64>> {
        let n = self.n_states();
        let mut out = vec![vec![0.0; n]; n];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row {
                out[i][*j] = rat_to_f64(p);
            }
        }
        out
    }

    /// Sparse f64 rows (index, probability).
    pub fn sparse_f64(&self) -> Vec<Vec<(usize, f64)>> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|(j, p)| (*j, rat_to_f64(p))).collect())
            .collect()
    }

    /// Stationary expected probability of leaving the current state.
    pub fn expected_move_rate(&self) -> Rat {
        let mut acc = Rat::zero();
        for (i, row) in self.rows.iter().enumerate() {
            for (j, p) in row {
                if *j != i {
                    acc += &self.pi[i] * p;
                }
            }
        }
        acc
    }

    /// Exact invariants: rows sum to one, pi sums to one, detailed balance,
    /// and stationarity of pi.
    pub fn verify(&self) -> Result<(), WalkError> {
        let n = self.n_states();
        for (i, row) in self.rows.iter().enumerate() {
            let sum: Rat = row.iter().map(|(_, p)| p.clone()).sum();
            if sum != Rat::one() {
                return Err(WalkError::KernelInvariant(format!(
                    "row {i} sums to {sum}, not 1"
                )));
            }
            if row.iter().any(|(_, p)| p.is_negative()) {
                return Err(WalkError::KernelInvariant(format!("row {i} has a negative entry")));
            }
        }
        let total: Rat = self.pi.iter().cloned().sum();
        if total != Rat::one() {
            return Err(WalkError::KernelInvariant("pi does not sum to 1".into()));
        }
        // detailed balance, exact
        for x in 0..n {
            for (y, p) in &self.rows[x] {
                if *y <= x {
                    continue;
                }
                let lhs = &self.pi[x] * p;
                let rhs = &self.pi[*y] * self.entry(*y, x);
                if lhs != rhs {
                    return Err(WalkError::KernelInvariant(format!(
                        "detailed balance fails at ({x}, {y})"
                    )));
                }
            }
        }
        // stationarity, exact
        let mut acc = vec![Rat::zero(); n];
        for (x, row) in self.rows.iter().enumerate() {
            for (y, p) in row {
                acc[*y] += &self.pi[x] * p;
            }
        }
        if acc != self.pi {
            return Err(WalkError::KernelInvariant("pi is not stationary".into()));
        }
        Ok(())
    }

    pub fn from_parts(
        kind: KernelKind,
        states: Vec<u64>,
        rows: Vec<Vec<(usize, Rat)>>,
        pi: Vec<Rat>,
    ) -> Result<Kernel, WalkError> {
        let k = Kernel { kind, states, rows, pi };
        k.verify()?;
        Ok(k)
    }
}

/// Default cap on exact state spaces.
pub const DEFAULT_STATE_CAP: usize = 20_000;

fn neighbor_masks(g: &Graph) -> Result<Vec<u64>, WalkError> {
    let n = g.n();
    if n > 64 {
        return Err(WalkError::TooManyVertices { n });
    }
    let mut nbr = vec![0u64; n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            nbr[v] |= 1 << w;
        }
    }
    Ok(nbr)
}

fn finish_rows(
    kind: KernelKind,
    states: Vec<u64>,
    mut acc: Vec<HashMap<usize, Rat>>,
    pi: Vec<Rat>,
) -> Result<Kernel, WalkError> {
    let mut rows = Vec::with_capacity(acc.len());
    for (i, map) in acc.drain(..).enumerate() {
        let off: Rat = map.iter().filter(|(j, _)| **j != i).map(|(_, p)| p.clone()).sum();
        let mut row: Vec<(usize, Rat)> = map.into_iter().collect();
        // true diagonal = explicit accepted self-mass + all held proposals
        let diag = Rat::one() - off;
        match row.iter_mut().find(|(j, _)| *j == i) {
            Some(entry) => entry.1 = diag,
            None => row.push((i, diag)),
        }
        row.retain(|(_, p)| !p.is_zero());
        row.sort_by_key(|(j, _)| *j);
        rows.push(row);
    }
    Kernel::from_parts(kind, states, rows, pi)
}

/// Exact one-step transition law of the chosen down-up variant on a slice:
/// stationary distribution uniform, invariants verified at build time.
pub fn build_kernel(space: &SliceSpace, variant: Variant) -> Result<Kernel, WalkError> {
    build_kernel_capped(space, variant, DEFAULT_STATE_CAP)
}

pub fn build_kernel_capped(
    space: &SliceSpace,
    variant: Variant,
    cap: usize,
) -> Result<Kernel, WalkError> {
    let m = space.len();
    if m == 0 {
        return Err(WalkError::EmptySlice);
    }
    if m > cap {
        return Err(WalkError::StateSpaceTooLarge { size: m, cap });
    }
    let g = space.graph();
    let n = g.n();
    let k = space.k();
    let nbr = neighbor_masks(g)?;
    let labels = g.component_labels();
    let mut acc: Vec<HashMap<usize, Rat>> = vec![HashMap::new(); m];
    let uniform = Rat::new(BigInt::one(), BigInt::from(m));
    let pi = vec![uniform; m];

    for (xi, &x) in space.states().iter().enumerate() {
        match variant {
            Variant::Metropolis => {
                let w = Rat::new(BigInt::one(), BigInt::from(k * n));
                for u in count::mask_vertices(x) {
                    let rest = x & !(1 << u);
                    for v in 0..n {
                        let target = rest | (1 << v);
                        if target == x {
                            *acc[xi].entry(xi).or_insert_with(Rat::zero) += &w;
                            continue;
                        }
                        if target.count_ones() as usize == k && rest & nbr[v] == 0 && rest >> v & 1 == 0
                        {
                            if let Some(yi) = space.index_of(target) {
                                *acc[xi].entry(yi).or_insert_with(Rat::zero) += &w;
                            }
                        }
                        // all other proposals are rejected holds, folded into
                        // the diagonal by finish_rows
                    }
                }
            }
            Variant::Hdx => {
                for u in count::mask_vertices(x) {
                    let rest = x & !(1 << u);
                    let completions: Vec<usize> = (0..n)
                        .filter(|&w| rest >> w & 1 == 0 && rest & nbr[w] == 0)
                        .collect();
                    let w = Rat::new(BigInt::one(), BigInt::from(k * completions.len()));
                    for c in completions {
                        let target = rest | (1 << c);
                        let yi = space.index_of(target).expect("completion stays in slice");
                        *acc[xi].entry(yi).or_insert_with(Rat::zero) += &w;
                    }
                }
            }
            Variant::Modified => {
                let w = Rat::new(BigInt::one(), BigInt::from(n * n));
                for u in count::mask_vertices(x) {
                    let rest = x & !(1 << u);
                    for v in 0..n {
                        if x >> v & 1 == 1 || labels[u] == labels[v] {
                            continue;
                        }
                        if rest & nbr[v] == 0 {
                            let target = rest | (1 << v);
                            if let Some(yi) = space.index_of(target) {
                                *acc[xi].entry(yi).or_insert_with(Rat::zero) += &w;
                            }
                        }
                    }
                }
            }
        }
    }
    finish_rows(variant.into(), space.states().to_vec(), acc, pi)
}

/// Exact heat-bath Glauber kernel over all independent sets of G at a given
/// activity; stationary law proportional to lambda^{|I|}.
pub fn build_glauber_kernel(g: &Graph, lambda: f64, cap: usize) -> Result<Kernel, WalkError> {
    let n = g.n();
    let nbr = neighbor_masks(g)?;
    let lam = rat_from_f64(lambda)
        .filter(|l| l.is_positive())
        .ok_or_else(|| WalkError::BadConfig("activity must be positive and finite".into()))?;
    let mut states = Vec::new();
    for k in 0..=n {
        let s = enumerate_slice(g, k)?;
        states.extend_from_slice(s.states());
    }
    states.sort_unstable();
    let m = states.len();
    if m > cap {
        return Err(WalkError::StateSpaceTooLarge { size: m, cap });
    }
    let index: HashMap<u64, usize> = states.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let mut weights = Vec::with_capacity(m);
    for &s in &states {
        let mut w = Rat::one();
        for _ in 0..s.count_ones() {
            w *= &lam;
        }
        weights.push(w);
    }
    let z: Rat = weights.iter().cloned().sum();
    let pi: Vec<Rat> = weights.into_iter().map(|w| w / &z).collect();

    let p_occ = &lam / (Rat::one() + &lam);
    let p_vac = Rat::one() - &p_occ;
    let site = Rat::new(BigInt::one(), BigInt::from(n.max(1)));
    let mut acc: Vec<HashMap<usize, Rat>> = vec![HashMap::new(); m];
    for (xi, &x) in states.iter().enumerate() {
        if n == 0 {
            *acc[xi].entry(xi).or_insert_with(Rat::zero) += Rat::one();
            continue;
        }
        for v in 0..n {
            let rest = x & !(1 << v);
            if rest & nbr[v] != 0 {
                // blocked site: v must stay (or become) vacant
                let yi = index[&rest];
                *acc[xi].entry(yi).or_insert_with(Rat::zero) += &site;
            } else {
                let yi_vac = index[&rest];
                let yi_occ = index[&(rest | (1 << v))];
                *acc[xi].entry(yi_vac).or_insert_with(Rat::zero) += &site * &p_vac;
                *acc[xi].entry(yi_occ).or_insert_with(Rat::zero) += &site * &p_occ;
            }
        }
    }
    finish_rows(KernelKind::Glauber, states, acc, pi)
}

/// One stochastic step of the chosen walk variant from state `i_mask`.
pub fn step_down_up(
    g: &Graph,
    i_mask: u64,
    variant: Variant,
    rng: &mut ChaCha12Rng,
) -> Result<u64, WalkError> {
    let n = g.n();
    let nbr = neighbor_masks(g)?;
    if i_mask >> n != 0 || !count::is_independent(g, i_mask) {
        return Err(WalkError::InvalidState { mask: i_mask });
    }
    let k = i_mask.count_ones() as usize;
    if k == 0 {
        return Ok(i_mask);
    }
    let occupied = count::mask_vertices(i_mask);
    Ok(match variant {
        Variant::Metropolis => {
            let u = occupied[rng.random_range(0..k)];
            let v = rng.random_range(0..n);
            let rest = i_mask & !(1 << u);
            let target = rest | (1 << v);
            if target.count_ones() as usize == k && rest >> v & 1 == 0 && rest & nbr[v] == 0 {
                target
            } else {
                i_mask
            }
        }
        Variant::Hdx => {
            let u = occupied[rng.random_range(0..k)];
            let rest = i_mask & !(1 << u);
            let completions: Vec<usize> = (0..n)
                .filter(|&w| rest >> w & 1 == 0 && rest & nbr[w] == 0)
                .collect();
            let w = completions[rng.random_range(0..completions.len())];
            rest | (1 << w)
        }
        Variant::Modified => {
            let labels = g.component_labels();
            let u = rng.random_range(0..n);
            let v = rng.random_range(0..n);
            let rest = i_mask & !(1 << u);
            if i_mask >> u & 1 == 1
                && i_mask >> v & 1 == 0
                && labels[u] != labels[v]
                && rest & nbr[v] == 0
            {
                rest | (1 << v)
            } else {
                i_mask
            }
        }
    })
}

/// Initial-state rule for simulations.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum InitRule {
    Fixed(u64),
    Greedy,
    UniformFromEnumeration,
}

#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct ChainConfig {
    pub variant: Variant,
    pub steps: u64,
    pub seed: u64,
    pub thinning: u64,
    pub init: InitRule,
}

impl ChainConfig {
    pub fn new(variant: Variant, steps: u64, seed: u64) -> Self {
        ChainConfig { variant, steps, seed, thinning: 1, init: InitRule::Greedy }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct TrajectorySummary {
    pub initial: u64,
    pub final_state: u64,
    pub steps: u64,
    pub recorded: u64,
    pub moves: u64,
    /// (state mask, visit count) over thinned samples, sorted by mask.
    pub visits: Vec<(u64, u64)>,
}

/// Greedy initial state: repeatedly add the lowest-index vertex with no
/// chosen neighbor; fails loudly if it stalls below k.
pub fn greedy_initial(g: &Graph, k: usize) -> Result<u64, WalkError> {
    let nbr = neighbor_masks(g)?;
    let mut mask = 0u64;
    let mut size = 0usize;
    for v in 0..g.n() {
        if size == k {
            break;
        }
        if mask & nbr[v] == 0 && mask >> v & 1 == 0 {
            mask |= 1 << v;
            size += 1;
        }
    }
    if size == k {
        Ok(mask)
    } else {
        Err(WalkError::NoInitialState { k })
    }
}

fn initial_state(g: &Graph, k: usize, rule: &InitRule, rng: &mut ChaCha12Rng) -> Result<u64, WalkError> {
    match rule {
        InitRule::Fixed(mask) => {
            if mask.count_ones() as usize == k && count::is_independent(g, *mask) && mask >> g.n() == 0 {
                Ok(*mask)
            } else {
                Err(WalkError::InvalidState { mask: *mask })
            }
        }
        InitRule::Greedy => greedy_initial(g, k),
        InitRule::UniformFromEnumeration => {
            let space = enumerate_slice(g, k)?;
            if space.is_empty() {
                return Err(WalkError::NoInitialState { k });
            }
            Ok(space.state(rng.random_range(0..space.len())))
        }
    }
}

/// Run a single chain; deterministic under the seed, with visit counts over
/// thinned samples.
pub fn simulate(g: &Graph, k: usize, cfg: &ChainConfig) -> Result<TrajectorySummary, WalkError> {
    Ok(simulate_trajectory(g, k, cfg, false)?.0)
}

/// As `simulate`, optionally returning the thinned sample sequence itself.
pub fn simulate_trajectory(
    g: &Graph,
    k: usize,
    cfg: &ChainConfig,
    keep_samples: bool,
) -> Result<(TrajectorySummary, Vec<u64>), WalkError> {
    if cfg.thinning == 0 {
        return Err(WalkError::BadConfig("thinning must be >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(cfg.seed, 0));
    let initial = initial_state(g, k, &cfg.init, &mut rng)?;
    let mut state = initial;
    let mut visits: HashMap<u64, u64> = HashMap::new();
    let mut samples = Vec::new();
    let mut recorded = 0u64;
    let mut moves = 0u64;
    visits.insert(state, 1);
    recorded += 1;
    if keep_samples {
        samples.push(state);
    }
    for step in 1..=cfg.steps {
        let next = step_down_up(g, state, cfg.variant, &mut rng)?;
        if next != state {
            moves += 1;
        }
        state = next;
        if step % cfg.thinning == 0 {
            *visits.entry(state).or_insert(0) += 1;
            recorded += 1;
            if keep_samples {
                samples.push(state);
            }
        }
    }
    let mut visits: Vec<(u64, u64)> = visits.into_iter().collect();
    visits.sort_unstable();
    let summary =
        TrajectorySummary { initial, final_state: state, steps: cfg.steps, recorded, moves, visits };
    Ok((summary, samples))
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct AcceptanceReport {
    pub proposals: u64,
    pub accepted_moves: u64,
    pub rate: f64,
    pub stderr: f64,
    /// whether k <= 16 n / (17 (delta + 1)) held for this run
    pub threshold_satisfied: bool,
}

/// Empirical fraction of Metropolis proposals that move the chain, with a
/// binomial standard error. The density precondition is reported, not
/// asserted.
pub fn acceptance_rate(g: &Graph, k: usize, cfg: &ChainConfig) -> Result<AcceptanceReport, WalkError> {
    if cfg.steps == 0 {
        return Err(WalkError::NoProposals);
    }
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(cfg.seed, 1));
    let mut state = initial_state(g, k, &cfg.init, &mut rng)?;
    let mut accepted = 0u64;
    for _ in 0..cfg.steps {
        let next = step_down_up(g, state, Variant::Metropolis, &mut rng)?;
        if next != state {
            accepted += 1;
        }
        state = next;
    }
    let rate = accepted as f64 / cfg.steps as f64;
    let stderr = (rate * (1.0 - rate) / cfg.steps as f64).sqrt();
    let threshold_satisfied = 17 * (g.delta() + 1) * k <= 16 * g.n();
    Ok(AcceptanceReport { proposals: cfg.steps, accepted_moves: accepted, rate, stderr, threshold_satisfied })
}

/// One heat-bath Glauber update in place; never produces a dependent set.
fn glauber_step(mask: u64, n: usize, nbr: &[u64], p_occupy: f64, rng: &mut ChaCha12Rng) -> u64 {
    let v = rng.random_range(0..n);
    let rest = mask & !(1 << v);
    if rest & nbr[v] != 0 {
        rest
    } else if rng.random_bool(p_occupy) {
        rest | (1 << v)
    } else {
        rest
    }
}

/// Heat-bath Glauber dynamics for the hard-core model, started from the
/// empty configuration.
pub fn glauber_hardcore(g: &Graph, lambda: f64, steps: u64, seed: u64) -> Result<u64, WalkError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(WalkError::BadConfig("activity must be positive and finite".into()));
    }
    let n = g.n();
    if n == 0 {
        return Ok(0);
    }
    let nbr = neighbor_masks(g)?;
    let p = lambda / (1.0 + lambda);
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 2));
    let mut mask = 0u64;
    for _ in 0..steps {
        mask = glauber_step(mask, n, &nbr, p, &mut rng);
        debug_assert!(count::is_independent(g, mask));
    }
    Ok(mask)
}

#[derive(Debug, Clone)]
pub struct RejectionOptions {
    /// Glauber steps between reads; defaults to ceil(10 n ln n).
    pub burn_in: Option<u64>,
    pub attempt_cap: u64,
}

impl Default for RejectionOptions {
    fn default() -> Self {
        RejectionOptions { burn_in: None, attempt_cap: 1_000_000 }
    }
}

/// Draw from the hard-core model by Glauber runs until the sample hits size
/// k; returns the accepted set and the number of attempts used.
pub fn rejection_sample(
    g: &Graph,
    lambda: f64,
    k: usize,
    seed: u64,
    opts: &RejectionOptions,
) -> Result<(u64, u64), WalkError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(WalkError::BadConfig("activity must be positive and finite".into()));
    }
    let n = g.n();
    let nbr = neighbor_masks(g)?;
    if count::slice_size(g, k)?.is_zero() {
        return Err(WalkError::EmptySlice);
    }
    let burn_in = opts
        .burn_in
        .unwrap_or_else(|| (10.0 * n as f64 * (n.max(2) as f64).ln()).ceil() as u64);
    let p = lambda / (1.0 + lambda);
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 3));
    let mut mask = 0u64;
    for attempt in 1..=opts.attempt_cap {
        for _ in 0..burn_in {
            mask = glauber_step(mask, n, &nbr, p, &mut rng);
            debug_assert!(count::is_independent(g, mask));
        }
        if mask.count_ones() as usize == k {
            return Ok((mask, attempt));
        }
    }
    Err(WalkError::AttemptCapExceeded { cap: opts.attempt_cap })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct CouplingReport {
    /// mean swap distance per step, length horizon + 1
    pub mean_distance: Vec<f64>,
    /// least-squares rate c in exp(-c t / n), over the decaying prefix
    pub fitted_rate: f64,
    pub trials: u64,
    pub coupled: u64,
    /// mean coupling time over trials that coupled within the horizon
    pub mean_coupling_time: Option<f64>,
}

/// Directional cross-component move shared by both coupled chains.
fn modified_move(mask: u64, a: usize, b: usize, labels: &[usize], nbr: &[u64]) -> u64 {
    if mask >> a & 1 == 1 && mask >> b & 1 == 0 && labels[a] != labels[b] {
        let rest = mask & !(1 << a);
        if rest & nbr[b] == 0 {
            return rest | (1 << b);
        }
    }
    mask
}

/// Identity coupling of two modified-walk trajectories started from a given
/// pair of states: both chains see the same (a, b) draw each step.
pub fn coupling_contraction_with_starts(
    g: &Graph,
    y0: u64,
    y0p: u64,
    trials: u64,
    horizon: usize,
    seed: u64,
) -> Result<CouplingReport, WalkError> {
    if trials == 0 {
        return Err(WalkError::BadConfig("trials must be positive".into()));
    }
    let n = g.n();
    let nbr = neighbor_masks(g)?;
    let labels = g.component_labels();
    for &m in &[y0, y0p] {
        if !count::is_independent(g, m) || m >> n != 0 {
            return Err(WalkError::InvalidState { mask: m });
        }
    }
    let mut total = vec![0.0; horizon + 1];
    let mut coupled = 0u64;
    let mut coupling_time_sum = 0u64;
    for trial in 0..trials {
        let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 1000 + trial));
        let mut y = y0;
        let mut yp = y0p;
        let mut coupled_at: Option<usize> = None;
        for (t, slot) in total.iter_mut().enumerate() {
            let dist = ((y ^ yp).count_ones() / 2) as f64;
            *slot += dist;
            if dist == 0.0 && coupled_at.is_none() {
                coupled_at = Some(t);
            }
            if t == horizon {
                break;
            }
            let a = rng.random_range(0..n);
            let b = rng.random_range(0..n);
            y = modified_move(y, a, b, &labels, &nbr);
            yp = modified_move(yp, a, b, &labels, &nbr);
        }
        if let Some(t) = coupled_at {
            coupled += 1;
            coupling_time_sum += t as u64;
        }
    }
    let mean_distance: Vec<f64> = total.iter().map(|s| s / trials as f64).collect();
    // fit ln d(t) = ln d(0) - c t / n over the strictly positive prefix
    let pts: Vec<(f64, f64)> = mean_distance
        .iter()
        .enumerate()
        .take_while(|(_, d)| **d > 0.0)
        .map(|(t, d)| (t as f64 / n as f64, d.ln()))
        .collect();
    let fitted_rate = if pts.len() >= 2 {
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|(x, _)| x).sum();
        let sy: f64 = pts.iter().map(|(_, y)| y).sum();
        let sxx: f64 = pts.iter().map(|(x, _)| x * x).sum();
        let sxy: f64 = pts.iter().map(|(x, y)| x * y).sum();
        let denom = m * sxx - sx * sx;
        if denom.abs() < 1e-30 {
            0.0
        } else {
            -((m * sxy - sx * sy) / denom)
        }
    } else {
        0.0
    };
    let mean_coupling_time =
        if coupled == trials && trials > 0 { Some(coupling_time_sum as f64 / trials as f64) } else { None };
    Ok(CouplingReport { mean_distance, fitted_rate, trials, coupled, mean_coupling_time })
}

/// Build the canonical swap-distance-one pair (Y0, Y0' = P_{u,v}(Y0)) from a
/// greedy start and run the identity coupling.
pub fn coupling_contraction(
    g: &Graph,
    k: usize,
    trials: u64,
    horizon: usize,
    seed: u64,
) -> Result<CouplingReport, WalkError> {
    let y0 = greedy_initial(g, k)?;
    let nbr = neighbor_masks(g)?;
    let labels = g.component_labels();
    let mut pair = None;
    'outer: for u in count::mask_vertices(y0) {
        let rest = y0 & !(1 << u);
        for v in 0..g.n() {
            if y0 >> v & 1 == 0 && labels[u] != labels[v] && rest & nbr[v] == 0 {
                pair = Some(rest | (1 << v));
                break 'outer;
            }
        }
    }
    let y0p = pair.ok_or(WalkError::NoDiscrepancyPair)?;
    coupling_contraction_with_starts(g, y0, y0p, trials, horizon, seed)
}
