//! Exact functional-inequality analysis: influence matrices and independence
//! norms, Dirichlet forms, spectral gaps, log-Sobolev estimates, entropy,
//! mixing profiles, the Poisson/Stein solver, the induced component chain,
//! and the decomposition-ratio check.

use nalgebra::{DMatrix, DVector};
use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rand::RngExt;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::count::{self, big_ratio, enumerate_slice, CountError, PinSet};
use crate::graph::{Graph, GraphError};
use crate::numeric::{rat_to_f64, stream_seed, Rat};
use crate::walks::{Kernel, KernelKind, WalkError};

#[derive(Debug, Error, PartialEq)]
pub enum SpectralError {
    #[error("slice is empty")]
    EmptySlice,
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("eigensolve failed: {0}")]
    EigenFailure(String),
    #[error("degenerate problem: {0}")]
    Degenerate(String),
    #[error("vertex set is not a connected component")]
    NotAComponent,
    #[error("graph has a single connected component; the induced comparison is vacuous")]
    SingleComponent,
    #[error("conditioning event is empty")]
    EmptyConditioning,
    #[error("linear system is singular beyond tolerance (residual {residual:e})")]
    NonErgodic { residual: f64 },
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Walk(#[from] WalkError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Signed pairwise influence matrix of the uniform slice law:
/// M(i, j) = P[j | i] - P[j | not i], zero diagonal. Rows whose marginal is
/// deterministic (P[i] in {0, 1}) condition on a null event; they are
/// flagged, zeroed, and excluded from norms.
#[derive(Debug, Clone)]
pub struct InfluenceMatrix {
    n: usize,
    exact: Vec<Vec<Rat>>,
    flagged: Vec<usize>,
    marginals: Vec<Rat>,
}

impl InfluenceMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        rat_to_f64(&self.exact[i][j])
    }

    pub fn entry_exact(&self, i: usize, j: usize) -> &Rat {
        &self.exact[i][j]
    }

    pub fn flagged(&self) -> &[usize] {
        &self.flagged
    }

    pub fn marginal(&self, i: usize) -> f64 {
        rat_to_f64(&self.marginals[i])
    }

    fn active(&self) -> Vec<usize> {
        (0..self.n).filter(|i| !self.flagged.contains(i)).collect()
    }
}

/// Exact influence matrix of mu_k via pinned size counts.
pub fn influence_matrix(g: &Graph, k: usize) -> Result<InfluenceMatrix, SpectralError> {
    let n = g.n();
    let all = count::size_counts(g, &PinSet::none())?;
    let a_k = all.get(k);
    if a_k.is_zero() {
        return Err(SpectralError::EmptySlice);
    }
    let mut single = Vec::with_capacity(n);
    for i in 0..n {
        single.push(count::size_counts(g, &PinSet::pin_in(i))?.get(k));
    }
    let mut pair = vec![vec![BigUint::zero(); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if g.has_edge(i, j) {
                continue;
            }
            let pins = PinSet { in_pins: vec![i, j], out_pins: vec![] };
            let c = count::size_counts(g, &pins)?.get(k);
            pair[i][j] = c.clone();
            pair[j][i] = c;
        }
    }
    let mut flagged = Vec::new();
    for (i, c) in single.iter().enumerate() {
        if c.is_zero() || *c == a_k {
            flagged.push(i);
        }
    }
    let mut exact = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        if flagged.contains(&i) {
            continue;
        }
        let ci = &single[i];
        let not_ci = &a_k - ci;
        for j in 0..n {
            if j == i {
                continue;
            }
            // P[j | i] - P[j | not i] = c_ij / c_i - (c_j - c_ij) / (a_k - c_i)
            let p_given = big_ratio(&pair[i][j], ci);
            let p_given_not = big_ratio(&(&single[j] - &pair[i][j]), &not_ci);
            exact[i][j] = p_given - p_given_not;
        }
    }
    let marginals = single.iter().map(|c| big_ratio(c, &a_k)).collect();
    Ok(InfluenceMatrix { n, exact, flagged, marginals })
}

/// (largest real eigenvalue, max absolute row sum) over unflagged indices.
/// The eigenvalue comes from shifted power iteration on the variance-
/// symmetrized matrix, falling back to a full symmetric eigensolve.
pub fn independence_norms(m: &InfluenceMatrix) -> Result<(f64, f64), SpectralError> {
    let active = m.active();
    if active.is_empty() {
        return Ok((0.0, 0.0));
    }
    let mut linf: f64 = 0.0;
    for &i in &active {
        let row: Rat = (0..m.n)
            .map(|j| {
                let e = &m.exact[i][j];
                if e < &Rat::zero() {
                    -e.clone()
                } else {
                    e.clone()
                }
            })
            .sum();
        linf = linf.max(rat_to_f64(&row));
    }
    // Symmetrize: S(i, j) = M(i, j) sqrt(var_i / var_j); M = D^{-1} C0 with
    // C0 the off-diagonal covariance, so S is symmetric with M's spectrum.
    let d = active.len();
    let var: Vec<f64> = active
        .iter()
        .map(|&i| {
            let p = m.marginal(i);
            p * (1.0 - p)
        })
        .collect();
    let s = DMatrix::from_fn(d, d, |a, b| {
        if a == b {
            0.0
        } else {
            m.entry(active[a], active[b]) * (var[a] / var[b]).sqrt()
        }
    });
    let lambda_max = match power_iteration_max(&s, linf) {
        Some(v) => v,
        None => {
            let eig = s
                .clone()
                .try_symmetric_eigen(1e-13, 50_000)
                .ok_or_else(|| SpectralError::EigenFailure("symmetric eigensolve did not converge".into()))?;
            eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        }
    };
    if lambda_max > linf + 1e-8 {
        return Err(SpectralError::EigenFailure(format!(
            "lambda_max = {lambda_max} exceeds the l-infinity norm {linf}"
        )));
    }
    Ok((lambda_max, linf))
}

/// Power iteration on S + shift I (positive semidefinite by Gershgorin), so
/// the dominant eigenvalue is lambda_max(S) + shift.
fn power_iteration_max(s: &DMatrix<f64>, shift: f64) -> Option<f64> {
    let d = s.nrows();
    if d == 1 {
        return Some(s[(0, 0)]);
    }
    let b = s + DMatrix::identity(d, d) * shift;
    let mut v = DVector::from_fn(d, |i, _| 1.0 + 1e-3 * (i as f64 + 1.0));
    v /= v.norm();
    let mut lambda = 0.0;
    for _ in 0..20_000 {
        let w = &b * &v;
        let norm = w.norm();
        if norm < 1e-300 {
            // B v = 0: the shifted matrix annihilates v, eigenvalue -shift
            return Some(-shift);
        }
        let next = w / norm;
        let new_lambda = next.dot(&(&b * &next));
        let residual = (&b * &next - &next * new_lambda).norm();
        v = next;
        lambda = new_lambda;
        if residual < 1e-13 * (1.0 + new_lambda.abs()) {
            return Some(lambda - shift);
        }
    }
    let residual = (&b * &v - &v * lambda).norm();
    if residual < 1e-9 * (1.0 + lambda.abs()) {
        Some(lambda - shift)
    } else {
        None
    }
}

/// Real function on the states of a slice (or any kernel's state list).
pub type FunctionOnSlice = Vec<f64>;

/// Dirichlet form (1/2) sum_{x,y} pi(x) P(x,y) (f(x)-f(y)) (g(x)-g(y)).
pub fn dirichlet_form(kern: &Kernel, f: &[f64], g: &[f64]) -> Result<f64, SpectralError> {
    let n = kern.n_states();
    if f.len() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, got: f.len() });
    }
    if g.len() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, got: g.len() });
    }
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    let mut acc = 0.0;
    for (x, row) in rows.iter().enumerate() {
        for &(y, p) in row {
            if y == x {
                continue;
            }
            acc += pi[x] * p * (f[x] - f[y]) * (g[x] - g[y]);
        }
    }
    Ok(0.5 * acc)
}

/// All eigenvalues of the pi-symmetrized kernel, sorted descending.
pub fn spectrum(kern: &Kernel) -> Result<Vec<f64>, SpectralError> {
    let n = kern.n_states();
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    let mut s = DMatrix::zeros(n, n);
    for (x, row) in rows.iter().enumerate() {
        for &(y, p) in row {
            s[(x, y)] = p * (pi[x] / pi[y]).sqrt();
        }
    }
    // enforce exact symmetry against rounding
    let s = (&s + &s.transpose()) * 0.5;
    let eig = s
        .try_symmetric_eigen(1e-14, 100_000)
        .ok_or_else(|| SpectralError::EigenFailure("symmetric eigensolve did not converge".into()))?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().cloned().collect();
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

/// Spectral gap: 1 minus the second-largest eigenvalue of the symmetrized
/// kernel. A single-state chain mixes instantly; its gap is reported as 1.
pub fn spectral_gap(kern: &Kernel) -> Result<f64, SpectralError> {
    if kern.n_states() == 1 {
        return Ok(1.0);
    }
    let vals = spectrum(kern)?;
    Ok(1.0 - vals[1])
}

/// Second eigenfunction of the symmetrized kernel, mapped back to the
/// original coordinates (phi_2(x) = v_2(x) / sqrt(pi(x))).
fn second_eigenfunction(kern: &Kernel) -> Result<Vec<f64>, SpectralError> {
    let n = kern.n_states();
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    let mut s = DMatrix::zeros(n, n);
    for (x, row) in rows.iter().enumerate() {
        for &(y, p) in row {
            s[(x, y)] = p * (pi[x] / pi[y]).sqrt();
        }
    }
    let s = (&s + &s.transpose()) * 0.5;
    let eig = s
        .try_symmetric_eigen(1e-14, 100_000)
        .ok_or_else(|| SpectralError::EigenFailure("symmetric eigensolve did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());
    let idx = order[1];
    let mut phi: Vec<f64> = (0..n)
        .map(|x| eig.eigenvectors[(x, idx)] / pi[x].sqrt())
        .collect();
    let sup = phi.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if sup > 0.0 {
        for v in &mut phi {
            *v /= sup;
        }
    }
    Ok(phi)
}

#[derive(Debug, Clone)]
pub struct LsiOptions {
    /// convergence tolerance on the ratio improvement
    pub tol: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for LsiOptions {
    fn default() -> Self {
        LsiOptions { tol: 1e-10, restarts: 32, max_iters: 2_000, seed: 0x6c7369 }
    }
}

/// Spectral report: the gap, the log-Sobolev estimate with its certificate
/// function, and the best-ratio trace across restarts.
#[derive(Debug, Clone)]
pub struct SpectralReport {
    pub gamma: f64,
    pub rho: f64,
    pub certificate: Vec<f64>,
    pub ratio_trace: Vec<f64>,
}

fn entropy(pi: &[f64], f: &[f64]) -> f64 {
    let mean: f64 = pi.iter().zip(f).map(|(p, v)| p * v).sum();
    if mean <= 0.0 {
        return 0.0;
    }
    let e_flogf: f64 = pi
        .iter()
        .zip(f)
        .map(|(p, v)| if *v > 0.0 { p * v * v.ln() } else { 0.0 })
        .sum();
    e_flogf - mean * mean.ln()
}

fn energy_sqrt(pi: &[f64], rows: &[Vec<(usize, f64)>], f: &[f64]) -> f64 {
    let sq: Vec<f64> = f.iter().map(|v| v.max(0.0).sqrt()).collect();
    let mut acc = 0.0;
    for (x, row) in rows.iter().enumerate() {
        for &(y, p) in row {
            if y == x {
                continue;
            }
            let d = sq[x] - sq[y];
            acc += pi[x] * p * d * d;
        }
    }
    0.5 * acc
}

/// Entropy below this (for mean-one f) is float-cancellation noise, not
/// signal; such samples are treated as constants and rejected.
const ENT_TRUST_FLOOR: f64 = 1e-12;

fn lsi_ratio(pi: &[f64], rows: &[Vec<(usize, f64)>], f: &[f64]) -> f64 {
    let mean: f64 = pi.iter().zip(f).map(|(p, v)| p * v).sum();
    let ent = entropy(pi, f);
    if ent <= ENT_TRUST_FLOOR * mean.max(1e-300) {
        return f64::INFINITY;
    }
    energy_sqrt(pi, rows, f) / ent
}

/// Estimate the log-Sobolev constant: the infimum over non-constant f >= 0
/// of E(sqrt f, sqrt f) / Ent(f), by multiplicative-update descent with
/// multi-start (random starts plus second-eigenfunction perturbations whose
/// ratio approaches gamma / 2). The value is an upper bound on the true
/// constant, returned with its certificate function.
pub fn lsi_constant(kern: &Kernel, opts: &LsiOptions) -> Result<SpectralReport, SpectralError> {
    let n = kern.n_states();
    if n < 2 {
        return Err(SpectralError::Degenerate("state space has a single point".into()));
    }
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    let gamma = spectral_gap(kern)?;
    let phi2 = second_eigenfunction(kern)?;

    let mut best_ratio = f64::INFINITY;
    let mut best_f: Vec<f64> = vec![1.0; n];
    let mut trace = Vec::new();

    let consider = |f: &[f64], best_ratio: &mut f64, best_f: &mut Vec<f64>| {
        let r = lsi_ratio(&pi, &rows, f);
        if r < *best_ratio {
            *best_ratio = r;
            *best_f = f.to_vec();
        }
        r
    };

    // Eigenfunction linearization: f = (1 +- eps phi_2)^2 has ratio
    // gamma/2 -+ c eps + O(eps^2); taking the better sign at each eps pins
    // the linearization bound gamma/2 from above.
    for eps in [0.5, 0.1, 1e-2, 1e-3, 1e-4] {
        for sign in [1.0, -1.0] {
            let f: Vec<f64> = phi2
                .iter()
                .map(|&v| (1.0 + sign * eps * v).max(1e-12).powi(2))
                .collect();
            consider(&f, &mut best_ratio, &mut best_f);
        }
    }

    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(opts.seed, 0x6c736931));
    for restart in 0..opts.restarts {
        let mut f: Vec<f64> = if restart == 0 {
            phi2.iter().map(|&v| (1.0 + 0.5 * v).max(1e-9).powi(2)).collect()
        } else if restart == 1 {
            phi2.iter().map(|&v| (1.0 - 0.5 * v).max(1e-9).powi(2)).collect()
        } else {
            (0..n).map(|_| rng.random_range(-1.0..1.0f64).exp()).collect()
        };
        normalize_mean(&pi, &mut f);
        let mut ratio = consider(&f, &mut best_ratio, &mut best_f);
        if !ratio.is_finite() {
            trace.push(ratio);
            continue;
        }
        let mut eta = 0.25;
        let mut last_check = ratio;
        for iter in 0..opts.max_iters {
            let grad = ratio_gradient(&pi, &rows, &f, ratio);
            let sup = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
            if sup < 1e-16 {
                break;
            }
            let mut stepped = false;
            for _ in 0..40 {
                let cand: Vec<f64> = f
                    .iter()
                    .zip(&grad)
                    .map(|(&v, &g)| (v * (-eta * g / sup).exp()).max(1e-300))
                    .collect();
                let mut cand = cand;
                normalize_mean(&pi, &mut cand);
                let r = lsi_ratio(&pi, &rows, &cand);
                if r < ratio {
                    f = cand;
                    ratio = r;
                    eta = (eta * 1.3).min(4.0);
                    stepped = true;
                    break;
                }
                eta *= 0.5;
                if eta < 1e-14 {
                    break;
                }
            }
            if !stepped {
                break;
            }
            if iter % 100 == 99 {
                if last_check - ratio < opts.tol {
                    break;
                }
                last_check = ratio;
            }
        }
        consider(&f, &mut best_ratio, &mut best_f);
        trace.push(ratio);
    }

    if !best_ratio.is_finite() {
        return Err(SpectralError::Degenerate(
            "all restarts converged to constant functions".into(),
        ));
    }
    // Certificate re-check: rho Ent(f*) <= E(sqrt f*, sqrt f*) (1 + 1e-9).
    let ent = entropy(&pi, &best_f);
    let en = energy_sqrt(&pi, &rows, &best_f);
    if ent > 0.0 && best_ratio * ent > en * (1.0 + 1e-9) {
        return Err(SpectralError::EigenFailure("certificate recheck failed".into()));
    }
    Ok(SpectralReport { gamma, rho: best_ratio, certificate: best_f, ratio_trace: trace })
}

fn normalize_mean(pi: &[f64], f: &mut [f64]) {
    let mean: f64 = pi.iter().zip(f.iter()).map(|(p, v)| p * v).sum();
    if mean > 0.0 {
        for v in f.iter_mut() {
            *v /= mean;
        }
    }
}

/// Euclidean gradient of the ratio in log-f coordinates (scaled by f).
fn ratio_gradient(pi: &[f64], rows: &[Vec<(usize, f64)>], f: &[f64], ratio: f64) -> Vec<f64> {
    let n = f.len();
    let sq: Vec<f64> = f.iter().map(|v| v.max(1e-300).sqrt()).collect();
    // dE/df(x) = pi(x) ((I - P) sqrt f)(x) / sqrt f(x)
    let mut de = vec![0.0; n];
    for (x, row) in rows.iter().enumerate() {
        let mut psq = 0.0;
        for &(y, p) in row {
            psq += p * sq[y];
        }
        de[x] = pi[x] * (sq[x] - psq) / sq[x];
    }
    let mean: f64 = pi.iter().zip(f.iter()).map(|(p, v)| p * v).sum();
    let ent = entropy(pi, f).max(1e-300);
    let mut grad = vec![0.0; n];
    for x in 0..n {
        let dd = pi[x] * (f[x].max(1e-300) / mean).ln();
        // d(N/D) = (dN - ratio dD) / D, then scale by f for log-space steps
        grad[x] = (de[x] - ratio * dd) / ent * f[x];
    }
    grad
}

/// Exact total-variation distances TV(delta_start P^t, pi) for t = 0..horizon.
#[derive(Debug, Clone, serde::Serialize)]
pub struct MixingProfile {
    pub start: usize,
    pub tv: Vec<f64>,
}

pub fn mixing_profile(kern: &Kernel, start: usize, horizon: usize) -> Result<MixingProfile, SpectralError> {
    let n = kern.n_states();
    if start >= n {
        return Err(SpectralError::BadInput(format!("start {start} out of range ({n} states)")));
    }
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    let mut dist = vec![0.0; n];
    dist[start] = 1.0;
    let mut tv = Vec::with_capacity(horizon + 1);
    for _t in 0..=horizon {
        let d: f64 = dist.iter().zip(&pi).map(|(a, b)| (a - b).abs()).sum();
        tv.push(0.5 * d);
        let mut next = vec![0.0; n];
        for (x, row) in rows.iter().enumerate() {
            if dist[x] == 0.0 {
                continue;
            }
            for &(y, p) in row {
                next[y] += dist[x] * p;
            }
        }
        dist = next;
    }
    Ok(MixingProfile { start, tv })
}

/// First t with TV(t) <= eps, if reached within the profile.
pub fn tau_from_profile(profile: &MixingProfile, eps: f64) -> Option<usize> {
    profile.tv.iter().position(|&d| d <= eps)
}

/// Worst-start mixing time: max over starting states of the first t with
/// TV <= eps; None when some start has not mixed within the horizon.
pub fn worst_start_tau(kern: &Kernel, eps: f64, horizon: usize) -> Result<Option<usize>, SpectralError> {
    let mut worst = 0usize;
    for start in 0..kern.n_states() {
        let profile = mixing_profile(kern, start, horizon)?;
        match tau_from_profile(&profile, eps) {
            Some(t) => worst = worst.max(t),
            None => return Ok(None),
        }
    }
    Ok(Some(worst))
}

/// Solve the Poisson equation (I - P) h = f - E_pi f with E_pi h = 0, by a
/// direct solve of (I - P + 1 pi^T) h = f - E_pi f.
pub fn solve_poisson(kern: &Kernel, f: &[f64]) -> Result<Vec<f64>, SpectralError> {
    let n = kern.n_states();
    if f.len() != n {
        return Err(SpectralError::DimensionMismatch { expected: n, got: f.len() });
    }
    let pi = kern.pi_f64();
    let rows = kern.sparse_f64();
    solve_poisson_dense(&pi, &rows, f)
}

fn solve_poisson_dense(
    pi: &[f64],
    rows: &[Vec<(usize, f64)>],
    f: &[f64],
) -> Result<Vec<f64>, SpectralError> {
    let n = pi.len();
    let mean: f64 = pi.iter().zip(f).map(|(p, v)| p * v).sum();
    let b = DVector::from_fn(n, |i, _| f[i] - mean);
    let mut a = DMatrix::zeros(n, n);
    for (x, row) in rows.iter().enumerate() {
        a[(x, x)] += 1.0;
        for &(y, p) in row {
            a[(x, y)] -= p;
        }
    }
    for x in 0..n {
        for y in 0..n {
            a[(x, y)] += pi[y];
        }
    }
    let lu = a.clone().lu();
    let h = lu
        .solve(&b)
        .ok_or(SpectralError::NonErgodic { residual: f64::INFINITY })?;
    // residual of the actual Poisson identity
    let mut residual = 0.0f64;
    for (x, row) in rows.iter().enumerate() {
        let mut ph = 0.0;
        for &(y, p) in row {
            ph += p * h[y];
        }
        residual = residual.max((h[x] - ph - b[x]).abs());
    }
    let mean_h: f64 = pi.iter().enumerate().map(|(i, p)| p * h[i]).sum();
    residual = residual.max(mean_h.abs());
    if residual > 1e-10 {
        return Err(SpectralError::NonErgodic { residual });
    }
    Ok(h.iter().cloned().collect())
}

/// The chain induced on one connected component by the modified down-up
/// walk, built by conditional enumeration of the outside configuration.
#[derive(Debug, Clone)]
pub struct InducedChain {
    pub kernel: Kernel,
    pub component: Vec<usize>,
    /// extension counts |I_{k - |J_G|}(G - component)| per state
    pub ext_counts: Vec<BigUint>,
    pub k: usize,
}

fn check_component(g: &Graph, component: &[usize]) -> Result<(), SpectralError> {
    let mut sorted = component.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != component.len() {
        return Err(SpectralError::NotAComponent);
    }
    let decomp = g.components();
    if decomp.components.iter().any(|c| *c == sorted) {
        Ok(())
    } else {
        Err(SpectralError::NotAComponent)
    }
}

/// Build the induced kernel on `component` for slice size k. The stationary
/// law is the exact marginal of the uniform slice law on the component;
/// row-stochasticity, reversibility, and stationarity are verified exactly
/// at build time.
pub fn induced_kernel(g: &Graph, component: &[usize], k: usize) -> Result<InducedChain, SpectralError> {
    check_component(g, component)?;
    let mut comp = component.to_vec();
    comp.sort_unstable();
    let n = g.n();
    let rest = g.delete_set(&comp)?;
    let rest_counts = count::size_counts(&rest.graph, &PinSet::none())?;
    let local = g.induced(&comp)?;

    // candidate states: independent sets of the component with a nonzero
    // number of outside completions
    let mut states = Vec::new();
    let mut exts = Vec::new();
    for size in 0..=comp.len().min(k) {
        let slice = enumerate_slice(&local.graph, size)?;
        for &mask in slice.states() {
            let ext = rest_counts.get(k - size);
            if !ext.is_zero() {
                states.push(mask);
                exts.push(ext);
            }
        }
    }
    if states.is_empty() {
        return Err(SpectralError::EmptySlice);
    }
    let mut order: Vec<usize> = (0..states.len()).collect();
    order.sort_by_key(|&i| states[i]);
    let states: Vec<u64> = order.iter().map(|&i| states[i]).collect();
    let exts: Vec<BigUint> = order.iter().map(|&i| exts[i].clone()).collect();
    let index: std::collections::HashMap<u64, usize> =
        states.iter().enumerate().map(|(i, &s)| (s, i)).collect();

    // total extensions must reproduce a_k exactly
    let a_k = count::size_counts(g, &PinSet::none())?.get(k);
    let total: BigUint = exts.iter().sum();
    if total != a_k {
        return Err(SpectralError::BadInput(format!(
            "extension totals {total} do not match a_k = {a_k}"
        )));
    }

    let local_nbr: Vec<u64> = {
        let lg = &local.graph;
        (0..comp.len())
            .map(|v| {
                lg.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w)
            })
            .collect()
    };
    let rest_graph = &rest.graph;
    let rest_n = rest_graph.n();
    let rest_nbr: Vec<u64> = (0..rest_n)
        .map(|v| rest_graph.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();

    let comp_len = comp.len();
    let mut rows_acc: Vec<std::collections::HashMap<usize, Rat>> =
        vec![std::collections::HashMap::new(); states.len()];
    for (xi, &j_mask) in states.iter().enumerate() {
        let size = j_mask.count_ones() as usize;
        let m = k - size;
        let outside = enumerate_slice(rest_graph, m)?;
        let n_out = outside.len();
        debug_assert_eq!(BigUint::from(n_out), exts[xi]);
        let denom = Rat::new(
            BigInt::one(),
            BigInt::from(comp_len) * BigInt::from(n) * BigInt::from(n_out),
        );

        // removals: u occupied in the component, v an addable outside
        // vertex; the (v, K) pair count is independent of which u leaves
        let mut pair_count: u64 = 0;
        for &k_mask in outside.states() {
            for v in 0..rest_n {
                if k_mask >> v & 1 == 0 && k_mask & rest_nbr[v] == 0 {
                    pair_count += 1;
                }
            }
        }
        if pair_count > 0 {
            for u_local in count::mask_vertices(j_mask) {
                let target = j_mask & !(1 << u_local);
                if let Some(&yi) = index.get(&target) {
                    let w = &denom * Rat::from_integer(BigInt::from(pair_count));
                    *rows_acc[xi].entry(yi).or_insert_with(Rat::zero) += w;
                }
            }
        }
        // additions: u an addable component vertex, v any occupied outside
        // vertex; all m * n_out (v, K) pairs are valid
        if m > 0 {
            for u_local in 0..comp_len {
                if j_mask >> u_local & 1 == 1 || j_mask & local_nbr[u_local] != 0 {
                    continue;
                }
                let target = j_mask | (1 << u_local);
                if let Some(&yi) = index.get(&target) {
                    let pairs = BigInt::from(m) * BigInt::from(n_out);
                    let w = &denom * Rat::from_integer(pairs);
                    *rows_acc[xi].entry(yi).or_insert_with(Rat::zero) += w;
                }
            }
        }
    }
    let mut rows = Vec::with_capacity(states.len());
    for (i, map) in rows_acc.into_iter().enumerate() {
        let off: Rat = map.iter().filter(|(j, _)| **j != i).map(|(_, p)| p.clone()).sum();
        let mut row: Vec<(usize, Rat)> = map.into_iter().collect();
        let diag = Rat::one() - off;
        match row.iter_mut().find(|(j, _)| *j == i) {
            Some(e) => e.1 = diag,
            None => row.push((i, diag)),
        }
        row.retain(|(_, p)| !p.is_zero());
        row.sort_by_key(|(j, _)| *j);
        rows.push(row);
    }
    let pi: Vec<Rat> = exts.iter().map(|e| big_ratio(e, &a_k)).collect();
    let kernel = Kernel::from_parts(KernelKind::Induced, states, rows, pi)?;
    Ok(InducedChain { kernel, component: comp, ext_counts: exts, k })
}

/// Exact ratio identity of the induced chain: for adjacent states J subset I
/// differing at one vertex, P(I, J) / P(J, I) equals the ratio of extension
/// counts. Returns the number of adjacent pairs checked.
pub fn mk_identity_check(chain: &InducedChain) -> Result<usize, SpectralError> {
    let kern = &chain.kernel;
    let mut checked = 0usize;
    for x in 0..kern.n_states() {
        for (y, p) in kern.row(x) {
            if *y == x {
                continue;
            }
            let sx = kern.states()[x];
            let sy = kern.states()[*y];
            if sx & !sy != 0 && sy & !sx == 0 {
                // removal transition x -> y
                let back = kern.entry(*y, x);
                let lhs = p / back;
                let rhs = big_ratio(&chain.ext_counts[*y], &chain.ext_counts[x]);
                if lhs != rhs {
                    return Err(SpectralError::BadInput(format!(
                        "ratio identity fails between states {x} and {y}"
                    )));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct InducedComparison {
    pub stationary_ratio_max: f64,
    pub stationary_ratio_min: f64,
    pub transition_ratio_max: f64,
    pub transition_ratio_min: f64,
}

/// Compare the induced chain against the hard-core model on the component at
/// activity alpha = k / n: stationary-law ratios and one-step transition
/// odds measured in units of k / n.
pub fn induced_vs_hardcore(
    g: &Graph,
    component: &[usize],
    k: usize,
) -> Result<InducedComparison, SpectralError> {
    if g.components().components.len() < 2 {
        return Err(SpectralError::SingleComponent);
    }
    let chain = induced_kernel(g, component, k)?;
    let kern = &chain.kernel;
    if k == 0 {
        return Ok(InducedComparison {
            stationary_ratio_max: 1.0,
            stationary_ratio_min: 1.0,
            transition_ratio_max: 1.0,
            transition_ratio_min: 1.0,
        });
    }
    let alpha = Rat::new(BigInt::from(k), BigInt::from(g.n()));
    // hard-core weights alpha^{|J|} on the component states
    let weights: Vec<Rat> = kern
        .states()
        .iter()
        .map(|&s| {
            let mut w = Rat::one();
            for _ in 0..s.count_ones() {
                w *= &alpha;
            }
            w
        })
        .collect();
    let z: Rat = weights.iter().cloned().sum();
    let mut stat_max = f64::NEG_INFINITY;
    let mut stat_min = f64::INFINITY;
    for (i, w) in weights.iter().enumerate() {
        let mu = w / &z;
        let ratio = rat_to_f64(&(&kern.pi()[i] / mu));
        stat_max = stat_max.max(ratio);
        stat_min = stat_min.min(ratio);
    }
    let k_over_n = k as f64 / g.n() as f64;
    let mut tr_max = f64::NEG_INFINITY;
    let mut tr_min = f64::INFINITY;
    let mut seen = false;
    for x in 0..kern.n_states() {
        let diag = rat_to_f64(&kern.entry(x, x));
        for (y, p) in kern.row(x) {
            if *y == x {
                continue;
            }
            seen = true;
            let odds = rat_to_f64(p) / diag;
            let dev = odds / k_over_n;
            tr_max = tr_max.max(dev);
            tr_min = tr_min.min(dev);
        }
    }
    if !seen {
        tr_max = 1.0;
        tr_min = 1.0;
    }
    Ok(InducedComparison {
        stationary_ratio_max: stat_max,
        stationary_ratio_min: stat_min,
        transition_ratio_max: tr_max,
        transition_ratio_min: tr_min,
    })
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct DecompositionReport {
    pub lhs: f64,
    pub rhs: f64,
    /// lhs / rhs with the conventions 0/0 -> 0 and x/0 -> infinity (flagged)
    pub ratio: f64,
}

/// Both sides of the decomposition comparison for one component state and
/// one occupied vertex u: the squared difference of conditional-average
/// square roots against the coupled one-swap Dirichlet-type average.
pub fn decomposition_ratio(
    g: &Graph,
    component: &[usize],
    k: usize,
    i_g: &[usize],
    u: usize,
    f: &[f64],
) -> Result<DecompositionReport, SpectralError> {
    check_component(g, component)?;
    if !i_g.contains(&u) {
        return Err(SpectralError::BadInput(format!("u = {u} is not in I_G")));
    }
    if f.iter().any(|&v| v < 0.0) {
        return Err(SpectralError::BadInput("f must be non-negative".into()));
    }
    let slice = enumerate_slice(g, k)?;
    if f.len() != slice.len() {
        return Err(SpectralError::DimensionMismatch { expected: slice.len(), got: f.len() });
    }
    let comp_mask = count::vertices_mask(component);
    let ig_mask = count::vertices_mask(i_g);
    if ig_mask & !comp_mask != 0 {
        return Err(SpectralError::BadInput("I_G must lie inside the component".into()));
    }
    if !count::is_independent(g, ig_mask) {
        return Err(SpectralError::BadInput("I_G must be independent".into()));
    }

    // conditional averages of f given the projection onto the component
    let f_g = |j_mask: u64| -> Option<f64> {
        let mut acc = 0.0;
        let mut cnt = 0usize;
        for (i, &s) in slice.states().iter().enumerate() {
            if s & comp_mask == j_mask {
                acc += f[i];
                cnt += 1;
            }
        }
        if cnt == 0 {
            None
        } else {
            Some(acc / cnt as f64)
        }
    };
    let fg_i = f_g(ig_mask).ok_or(SpectralError::EmptyConditioning)?;
    let fg_minus = f_g(ig_mask & !(1 << u)).ok_or(SpectralError::EmptyConditioning)?;
    let lhs = (fg_i.sqrt() - fg_minus.sqrt()).powi(2);

    let n = g.n();
    let labels = g.component_labels();
    let nbr: Vec<u64> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
        .collect();
    // extensions of I_G outside the component
    let mut rhs_acc = 0.0;
    let mut samples = 0usize;
    for (i, &s) in slice.states().iter().enumerate() {
        if s & comp_mask != ig_mask {
            continue;
        }
        for v in 0..n {
            samples += 1;
            // swap operator P_{u,v}: u occupied; act only across components
            let moved = if labels[u] != labels[v] && s >> v & 1 == 0 {
                let rest = s & !(1 << u);
                if rest & nbr[v] == 0 {
                    Some(rest | (1 << v))
                } else {
                    None
                }
            } else {
                None
            };
            if let Some(t) = moved {
                let j = slice.index_of(t).expect("swap stays in slice");
                rhs_acc += (f[i].sqrt() - f[j].sqrt()).powi(2);
            }
        }
    }
    let rhs = if samples == 0 { 0.0 } else { rhs_acc / samples as f64 };
    let ratio = if rhs == 0.0 {
        if lhs == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        lhs / rhs
    };
    Ok(DecompositionReport { lhs, rhs, ratio })
}

/// Stein-identity residual: with mu the slice law conditioned on agreement
/// with I_G on G minus u and nu on agreement on all of G, solve the Poisson
/// equation under P_mu and check
/// E_nu f = E_mu f + E_nu[(P_nu h - h) - (P_mu h - h)].
pub fn stein_difference_check(
    g: &Graph,
    component: &[usize],
    k: usize,
    i_g: &[usize],
    u: usize,
    f: &[f64],
) -> Result<f64, SpectralError> {
    check_component(g, component)?;
    if !i_g.contains(&u) {
        return Err(SpectralError::BadInput(format!("u = {u} is not in I_G")));
    }
    let slice = enumerate_slice(g, k)?;
    if f.len() != slice.len() {
        return Err(SpectralError::DimensionMismatch { expected: slice.len(), got: f.len() });
    }
    let comp_mask = count::vertices_mask(component);
    let ig_mask = count::vertices_mask(i_g);
    let off_u = comp_mask & !(1u64 << u);

    let supp_mu: Vec<usize> = (0..slice.len())
        .filter(|&i| slice.state(i) & off_u == ig_mask & off_u)
        .collect();
    let supp_nu: Vec<usize> = (0..slice.len())
        .filter(|&i| slice.state(i) & comp_mask == ig_mask)
        .collect();
    if supp_nu.is_empty() {
        return Err(SpectralError::EmptyConditioning);
    }

    let build = |supp: &[usize], constraint_mask: u64, pattern: u64| -> (Vec<Vec<(usize, f64)>>, Vec<f64>) {
        let n = g.n();
        let labels = g.component_labels();
        let nbr: Vec<u64> = (0..n)
            .map(|v| g.neighbors(v).iter().fold(0u64, |m, &w| m | 1 << w))
            .collect();
        let index: std::collections::HashMap<usize, usize> =
            supp.iter().enumerate().map(|(loc, &gi)| (gi, loc)).collect();
        let m = supp.len();
        let w = 1.0 / (n * n) as f64;
        let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
        for (loc, &gi) in supp.iter().enumerate() {
            let s = slice.state(gi);
            let mut acc: std::collections::HashMap<usize, f64> = std::collections::HashMap::new();
            for a in 0..n {
                for b in 0..n {
                    // ordered pair (a, b); the swap operator acts
                    // symmetrically on occupancy
                    let target = if labels[a] == labels[b] {
                        s
                    } else if s >> a & 1 == 1 && s >> b & 1 == 0 {
                        let rest = s & !(1 << a);
                        if rest & nbr[b] == 0 { rest | (1 << b) } else { s }
                    } else if s >> b & 1 == 1 && s >> a & 1 == 0 {
                        let rest = s & !(1 << b);
                        if rest & nbr[a] == 0 { rest | (1 << a) } else { s }
                    } else {
                        s
                    };
                    let target = if target & constraint_mask == pattern { target } else { s };
                    let ti = slice.index_of(target).expect("valid slice state");
                    let tloc = match index.get(&ti) {
                        Some(&l) => l,
                        None => loc, // constraint violated: hold
                    };
                    *acc.entry(tloc).or_insert(0.0) += w;
                }
            }
            let mut row: Vec<(usize, f64)> = acc.into_iter().collect();
            row.sort_by_key(|(j, _)| *j);
            rows[loc] = row;
        }
        let pi = vec![1.0 / m as f64; m];
        (rows, pi)
    };

    let (p_mu, pi_mu) = build(&supp_mu, off_u, ig_mask & off_u);
    let (p_nu, _pi_nu) = build(&supp_nu, comp_mask, ig_mask);

    let f_mu: Vec<f64> = supp_mu.iter().map(|&i| f[i]).collect();
    let h = solve_poisson_dense(&pi_mu, &p_mu, &f_mu)?;
    let e_mu_f: f64 = pi_mu.iter().zip(&f_mu).map(|(p, v)| p * v).sum();

    // E_nu f
    let e_nu_f: f64 =
        supp_nu.iter().map(|&i| f[i]).sum::<f64>() / supp_nu.len() as f64;

    // h restricted to supp(nu), plus P_mu h and P_nu h there
    let mu_pos: std::collections::HashMap<usize, usize> =
        supp_mu.iter().enumerate().map(|(loc, &gi)| (gi, loc)).collect();
    let nu_in_mu: Vec<usize> = supp_nu.iter().map(|gi| mu_pos[gi]).collect();
    let mut rhs_corr = 0.0;
    for (nloc, &mloc) in nu_in_mu.iter().enumerate() {
        let mut p_mu_h = 0.0;
        for &(y, p) in &p_mu[mloc] {
            p_mu_h += p * h[y];
        }
        let mut p_nu_h = 0.0;
        for &(y, p) in &p_nu[nloc] {
            p_nu_h += p * h[nu_in_mu[y]];
        }
        rhs_corr += (p_nu_h - h[mloc]) - (p_mu_h - h[mloc]);
    }
    rhs_corr /= supp_nu.len() as f64;
    let rhs = e_mu_f + rhs_corr;
    Ok((e_nu_f - rhs).abs())
}

/// Random non-negative test function on a state space, seeded.
pub fn random_nonneg_function(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 0x66756e63));
    (0..len).map(|_| rng.random_range(-1.0..1.5f64).exp()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::walks::{build_kernel, Variant};
    use num_rational::Ratio;

    fn rat(n: i64, d: i64) -> Rat {
        Ratio::new(BigInt::from(n), BigInt::from(d))
    }

    fn two_state_uniform_kernel() -> Kernel {
        let space = enumerate_slice(&Graph::empty(2), 1).unwrap();
        build_kernel(&space, Variant::Hdx).unwrap()
    }

    fn identity_kernel(n: usize) -> Kernel {
        let states: Vec<u64> = (0..n as u64).collect();
        let rows: Vec<Vec<(usize, Rat)>> = (0..n).map(|i| vec![(i, Rat::one())]).collect();
        let pi = vec![Rat::new(BigInt::one(), BigInt::from(n)); n];
        Kernel::from_parts(KernelKind::Induced, states, rows, pi).unwrap()
    }

    #[test]
    fn influence_empty2_k1() {
        let m = influence_matrix(&Graph::empty(2), 1).unwrap();
        assert_eq!(*m.entry_exact(0, 1), rat(-1, 1));
        assert_eq!(*m.entry_exact(1, 0), rat(-1, 1));
        assert!(m.flagged().is_empty());
        let (lmax, linf) = independence_norms(&m).unwrap();
        assert!((linf - 1.0).abs() < 1e-12);
        assert!((lmax - 1.0).abs() < 1e-9);
    }

    #[test]
    fn influence_p3_k1() {
        let m = influence_matrix(&Graph::path(3), 1).unwrap();
        assert_eq!(*m.entry_exact(0, 1), rat(-1, 2));
        assert_eq!(*m.entry_exact(0, 2), rat(-1, 2));
        let (lmax, linf) = independence_norms(&m).unwrap();
        assert!((linf - 1.0).abs() < 1e-12);
        assert!((lmax - 0.5).abs() < 1e-9, "lmax = {lmax}");
    }

    #[test]
    fn influence_k2_k1() {
        let m = influence_matrix(&Graph::path(2), 1).unwrap();
        assert_eq!(*m.entry_exact(0, 1), rat(-1, 1));
    }

    #[test]
    fn influence_all_rows_flagged_gives_zero_norms() {
        // P3 at k = 2 has the single state {0, 2}: all marginals are 0 or 1
        let m = influence_matrix(&Graph::path(3), 2).unwrap();
        assert_eq!(m.flagged().len(), 3);
        assert_eq!(independence_norms(&m).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn dirichlet_examples() {
        let kern = two_state_uniform_kernel();
        assert_eq!(dirichlet_form(&kern, &[3.0, 3.0], &[3.0, 3.0]).unwrap(), 0.0);
        let v = dirichlet_form(&kern, &[1.0, 0.0], &[1.0, 0.0]).unwrap();
        assert!((v - 0.25).abs() < 1e-15);
    }

    #[test]
    fn dirichlet_bilinearity() {
        let space = enumerate_slice(&Graph::random_max_degree(8, 3, 2), 2).unwrap();
        let kern = build_kernel(&space, Variant::Metropolis).unwrap();
        let n = kern.n_states();
        let f = random_nonneg_function(n, 1);
        let g = random_nonneg_function(n, 2);
        let h = random_nonneg_function(n, 3);
        let fg: Vec<f64> = f.iter().zip(&g).map(|(a, b)| a + b).collect();
        let lhs = dirichlet_form(&kern, &fg, &h).unwrap();
        let rhs = dirichlet_form(&kern, &f, &h).unwrap() + dirichlet_form(&kern, &g, &h).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn gap_examples() {
        assert!((spectral_gap(&two_state_uniform_kernel()).unwrap() - 1.0).abs() < 1e-12);
        assert!(spectral_gap(&identity_kernel(3)).unwrap().abs() < 1e-12);
        let space = enumerate_slice(&Graph::empty(3), 1).unwrap();
        let kern = build_kernel(&space, Variant::Hdx).unwrap();
        assert!((spectral_gap(&kern).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn lsi_two_state_uniform_is_half() {
        // Frozen regression value: the optimal constant for the two-point
        // uniform chain equals gamma / 2 = 1/2, approached by vanishing
        // perturbations of the constant function.
        let kern = two_state_uniform_kernel();
        let rep = lsi_constant(&kern, &LsiOptions::default()).unwrap();
        assert!((rep.rho - 0.5).abs() < 1e-4, "rho = {}", rep.rho);
        assert!(rep.rho <= rep.gamma / 2.0 + 1e-6);
    }

    #[test]
    fn lsi_identity_kernel_is_zero() {
        let rep = lsi_constant(&identity_kernel(4), &LsiOptions::default()).unwrap();
        assert!(rep.rho.abs() < 1e-12);
    }

    #[test]
    fn lsi_below_half_gap_on_instances() {
        for seed in 0..3 {
            let g = Graph::random_max_degree(9, 3, seed);
            let space = enumerate_slice(&g, 2).unwrap();
            for variant in [Variant::Metropolis, Variant::Hdx] {
                let kern = build_kernel(&space, variant).unwrap();
                let rep = lsi_constant(&kern, &LsiOptions::default()).unwrap();
                assert!(
                    rep.rho <= rep.gamma / 2.0 + 1e-6,
                    "rho = {}, gamma = {}",
                    rep.rho,
                    rep.gamma
                );
                let ent = entropy(&kern.pi_f64(), &rep.certificate);
                let en = energy_sqrt(&kern.pi_f64(), &kern.sparse_f64(), &rep.certificate);
                assert!(rep.rho * ent <= en * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn mixing_examples() {
        let kern = two_state_uniform_kernel();
        let p = mixing_profile(&kern, 0, 3).unwrap();
        assert!((p.tv[0] - 0.5).abs() < 1e-15);
        assert!(p.tv[1].abs() < 1e-15);

        let idk = identity_kernel(2);
        let p = mixing_profile(&idk, 0, 5).unwrap();
        for t in 0..=5 {
            assert!((p.tv[t] - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn mixing_profiles_are_monotone() {
        let g = Graph::random_max_degree(9, 3, 4);
        let space = enumerate_slice(&g, 2).unwrap();
        let kern = build_kernel(&space, Variant::Metropolis).unwrap();
        for start in 0..kern.n_states() {
            let p = mixing_profile(&kern, start, 60).unwrap();
            for t in 1..p.tv.len() {
                assert!(p.tv[t] <= p.tv[t - 1] + 1e-12);
            }
        }
    }

    #[test]
    fn poisson_examples() {
        let kern = two_state_uniform_kernel();
        let h = solve_poisson(&kern, &[5.0, 5.0]).unwrap();
        assert!(h.iter().all(|v| v.abs() < 1e-12));
        let h = solve_poisson(&kern, &[1.0, 0.0]).unwrap();
        assert!((h[0] - 0.5).abs() < 1e-12 && (h[1] + 0.5).abs() < 1e-12);
    }

    #[test]
    fn poisson_reconstruction_identity() {
        let g = Graph::random_max_degree(10, 3, 6);
        let space = enumerate_slice(&g, 3).unwrap();
        let kern = build_kernel(&space, Variant::Hdx).unwrap();
        let f = random_nonneg_function(kern.n_states(), 8);
        let h = solve_poisson(&kern, &f).unwrap();
        let pi = kern.pi_f64();
        let rows = kern.sparse_f64();
        let mean: f64 = pi.iter().zip(&f).map(|(p, v)| p * v).sum();
        for (x, row) in rows.iter().enumerate() {
            let mut ph = 0.0;
            for &(y, p) in row {
                ph += p * h[y];
            }
            let rebuilt = mean + h[x] - ph;
            assert!((rebuilt - f[x]).abs() <= 1e-10);
        }
    }

    #[test]
    fn poisson_identity_kernel_not_ergodic() {
        let idk = identity_kernel(3);
        assert!(matches!(
            solve_poisson(&idk, &[1.0, 0.0, 0.0]),
            Err(SpectralError::NonErgodic { .. })
        ));
    }

    #[test]
    fn induced_two_isolated_vertices() {
        let g = Graph::empty(2);
        let chain = induced_kernel(&g, &[0], 1).unwrap();
        // states: {} and {0}, each with one completion outside
        assert_eq!(chain.kernel.n_states(), 2);
        assert_eq!(chain.kernel.pi()[0], rat(1, 2));
        assert_eq!(chain.kernel.pi()[1], rat(1, 2));
        chain.kernel.verify().unwrap();
    }

    #[test]
    fn induced_k3_plus_isolated() {
        let g = Graph::complete(3).disjoint_union(&Graph::empty(1));
        let chain = induced_kernel(&g, &[3], 1).unwrap();
        // P(component occupied) = 1/4: slice states {0},{1},{2},{3}
        let occ_idx = chain
            .kernel
            .states()
            .iter()
            .position(|&s| s == 1)
            .unwrap();
        assert_eq!(chain.kernel.pi()[occ_idx], rat(1, 4));
        mk_identity_check(&chain).unwrap();
    }

    #[test]
    fn induced_rejects_non_component() {
        let g = Graph::path(4);
        assert!(matches!(
            induced_kernel(&g, &[0, 1], 1),
            Err(SpectralError::NotAComponent)
        ));
    }

    #[test]
    fn mk_identity_on_multi_component_instances() {
        let g = Graph::cycle(5).disjoint_union(&Graph::path(4));
        for k in 1..=3 {
            for comp in g.components().components {
                let chain = induced_kernel(&g, &comp, k).unwrap();
                let checked = mk_identity_check(&chain).unwrap();
                if comp.len() > 1 {
                    assert!(checked > 0);
                }
            }
        }
    }

    #[test]
    fn induced_vs_hardcore_singleton_closed_form() {
        // empty ambient graph: marginal P(v in I) = k/n; hardcore at
        // alpha = k/n has P(occ) = alpha / (1 + alpha)
        let g = Graph::empty(6);
        let cmp = induced_vs_hardcore(&g, &[2], 2).unwrap();
        let alpha = 2.0 / 6.0;
        let marg = 2.0 / 6.0;
        let want_occ: f64 = marg / (alpha / (1.0 + alpha));
        let want_vac = (1.0 - marg) / (1.0 / (1.0 + alpha));
        let want_max = want_occ.max(want_vac);
        let want_min = want_occ.min(want_vac);
        assert!((cmp.stationary_ratio_max - want_max).abs() < 1e-12);
        assert!((cmp.stationary_ratio_min - want_min).abs() < 1e-12);
    }

    #[test]
    fn induced_vs_hardcore_single_component_errors() {
        let g = Graph::cycle(5);
        assert!(matches!(
            induced_vs_hardcore(&g, &g.components().components[0], 1),
            Err(SpectralError::SingleComponent)
        ));
    }

    #[test]
    fn induced_vs_hardcore_k0_all_ratios_one() {
        let g = Graph::empty(3);
        let cmp = induced_vs_hardcore(&g, &[0], 0).unwrap();
        assert_eq!(cmp.stationary_ratio_max, 1.0);
        assert_eq!(cmp.transition_ratio_max, 1.0);
    }

    #[test]
    fn decomposition_constant_f_is_zero_by_convention() {
        let g = Graph::empty(2);
        let f = vec![2.0; 2];
        let rep = decomposition_ratio(&g, &[0], 1, &[0], 0, &f).unwrap();
        assert_eq!(rep.lhs, 0.0);
        assert_eq!(rep.rhs, 0.0);
        assert_eq!(rep.ratio, 0.0);
    }

    #[test]
    fn decomposition_two_isolated_vertices_hand_enumeration() {
        // slice of size 1 on two isolated vertices: states {0}, {1};
        // f = indicator of {0}; I_G = {0}, u = 0.
        // lhs = (sqrt 1 - sqrt 0)^2 = 1; rhs averages over v in {0, 1}:
        // v = 0 same component (zero term), v = 1 swaps to {1}: term 1.
        let g = Graph::empty(2);
        let slice = enumerate_slice(&g, 1).unwrap();
        let mut f = vec![0.0; 2];
        f[slice.index_of(0b01).unwrap()] = 1.0;
        let rep = decomposition_ratio(&g, &[0], 1, &[0], 0, &f).unwrap();
        assert_eq!(rep.lhs, 1.0);
        assert_eq!(rep.rhs, 0.5);
        assert_eq!(rep.ratio, 2.0);
    }

    #[test]
    fn stein_constant_f_zero_residual() {
        let g = Graph::empty(2);
        let f = vec![3.0; 2];
        let r = stein_difference_check(&g, &[0], 1, &[0], 0, &f).unwrap();
        assert!(r < 1e-14);
    }

    #[test]
    fn stein_two_isolated_vertices_small_residual() {
        let g = Graph::empty(2);
        let slice = enumerate_slice(&g, 1).unwrap();
        let f = random_nonneg_function(slice.len(), 5);
        let r = stein_difference_check(&g, &[0], 1, &[0], 0, &f).unwrap();
        assert!(r <= 1e-12, "residual = {r}");
    }

    #[test]
    fn stein_empty_conditioning_errors() {
        // K2 plus isolated vertex: I_G = {0, 1} is not independent inside
        // the K2 component, so no slice state agrees with it.
        let g = Graph::path(2).disjoint_union(&Graph::empty(1));
        let f = vec![1.0; 2];
        let err = stein_difference_check(&g, &[0, 1], 2, &[0, 1], 0, &f);
        assert!(matches!(err, Err(SpectralError::EmptyConditioning)));
    }
}
