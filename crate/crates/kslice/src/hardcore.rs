//! The hard-core model layer: critical thresholds, activity solving, exact
//! slice probabilities, moments and cumulants of the independent-set size,
//! Hermite polynomials, the Edgeworth expansion, cumulant stability under
//! vertex conditioning, and marginal bounds.
//!
//! All distributional quantities are computed in exact rational arithmetic
//! (the activity is rationalized losslessly), so the moment-to-cumulant
//! recursion suffers no cancellation; floats appear only in reports.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::count::{self, CountError, PinSet, SizeCountVector};
use crate::graph::{Graph, GraphError};
use crate::numeric::{ln_biguint, rat_from_f64, rat_to_f64, Rat};

#[derive(Debug, Error, PartialEq)]
pub enum HardcoreError {
    #[error("thresholds are defined for delta >= 3 (got {delta})")]
    DeltaTooSmall { delta: usize },
    #[error("k = {k} out of range: the mean never reaches it (independence number {independence})")]
    KOutOfRange { k: usize, independence: usize },
    #[error("k must be positive")]
    KZero,
    #[error("bisection failed to converge")]
    NoConvergence,
    #[error("distribution is supported on fewer than two points")]
    Degenerate,
    #[error("sigma^2 must be positive")]
    SigmaNonPositive,
    #[error("report carries cumulants up to order {have}, need {need}")]
    InsufficientOrder { need: usize, have: usize },
    #[error("activity must be positive and finite")]
    BadActivity,
    #[error(transparent)]
    Count(#[from] CountError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Uniqueness threshold lambda_c(delta) = (d-1)^(d-1) / (d-2)^d, exact.
pub fn critical_activity(delta: usize) -> Result<Rat, HardcoreError> {
    if delta < 3 {
        return Err(HardcoreError::DeltaTooSmall { delta });
    }
    let num = BigInt::from(delta - 1).pow((delta - 1) as u32);
    let den = BigInt::from(delta - 2).pow(delta as u32);
    Ok(Rat::new(num, den))
}

pub fn critical_activity_f64(delta: usize) -> Result<f64, HardcoreError> {
    Ok(rat_to_f64(&critical_activity(delta)?))
}

/// Critical occupancy fraction alpha_c(delta) = lambda_c / (1 + (delta+1) lambda_c).
pub fn critical_density(delta: usize) -> Result<Rat, HardcoreError> {
    let lc = critical_activity(delta)?;
    let den = Rat::one() + Rat::from_integer(BigInt::from(delta + 1)) * &lc;
    Ok(lc / den)
}

pub fn critical_density_f64(delta: usize) -> Result<f64, HardcoreError> {
    Ok(rat_to_f64(&critical_density(delta)?))
}

/// A graph's size-count vector paired with a positive activity. The induced
/// law of X = |I| is P(X = j) = a_j lambda^j / Z(lambda).
#[derive(Debug, Clone)]
pub struct HardCoreModel {
    counts: SizeCountVector,
    lambda: Rat,
    lambda_f64: f64,
}

impl HardCoreModel {
    pub fn new(counts: SizeCountVector, lambda: f64) -> Result<Self, HardcoreError> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(HardcoreError::BadActivity);
        }
        let rat = rat_from_f64(lambda).ok_or(HardcoreError::BadActivity)?;
        Ok(HardCoreModel { counts, lambda: rat, lambda_f64: lambda })
    }

    pub fn counts(&self) -> &SizeCountVector {
        &self.counts
    }

    pub fn lambda(&self) -> f64 {
        self.lambda_f64
    }

    pub fn lambda_rat(&self) -> &Rat {
        &self.lambda
    }

    /// Exact weights a_j lambda^j for all j.
    fn weights(&self) -> Vec<Rat> {
        let mut pow = Rat::one();
        self.counts
            .counts()
            .iter()
            .map(|a| {
                let w = Rat::from_integer(BigInt::from(a.clone())) * &pow;
                pow *= &self.lambda;
                w
            })
            .collect()
    }

    pub fn partition(&self) -> Rat {
        self.weights().into_iter().sum()
    }

    /// Exact raw moment E X^r.
    pub fn moment(&self, r: usize) -> Rat {
        let w = self.weights();
        let z: Rat = w.iter().cloned().sum();
        let mut num = Rat::zero();
        for (j, wj) in w.iter().enumerate() {
            if wj.is_zero() {
                continue;
            }
            num += Rat::from_integer(BigInt::from(j).pow(r as u32)) * wj;
        }
        num / z
    }

    pub fn mean(&self) -> Rat {
        self.moment(1)
    }

    /// Number of sizes carrying positive probability.
    pub fn support_size(&self) -> usize {
        self.counts.counts().iter().filter(|c| !c.is_zero()).count()
    }
}

/// P(X = k) = a_k lambda^k / Z, exact.
pub fn slice_probability(model: &HardCoreModel, k: usize) -> Rat {
    let w = model.weights();
    let z: Rat = w.iter().cloned().sum();
    w.get(k).cloned().unwrap_or_else(Rat::zero) / z
}

pub fn slice_probability_f64(model: &HardCoreModel, k: usize) -> f64 {
    rat_to_f64(&slice_probability(model, k))
}

/// Mean of |I| at activity exp(ln_lambda), in scaled f64 arithmetic; used
/// only to steer the bisection (the final model is exact).
fn mean_ln(counts: &SizeCountVector, ln_lambda: f64) -> f64 {
    let mut ln_w = Vec::new();
    for (j, a) in counts.counts().iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        ln_w.push((j as f64, ln_biguint(a) + j as f64 * ln_lambda));
    }
    let m = ln_w.iter().map(|&(_, l)| l).fold(f64::NEG_INFINITY, f64::max);
    let mut s0 = 0.0;
    let mut s1 = 0.0;
    for &(j, l) in &ln_w {
        let w = (l - m).exp();
        s0 += w;
        s1 += j * w;
    }
    s1 / s0
}

/// Solve E_lambda |I| = k by bisection on the strictly increasing mean map.
/// The bracket starts at [1e-12, 1] and the ceiling doubles until the mean
/// exceeds k.
pub fn solve_activity(
    counts: &SizeCountVector,
    k: usize,
    tol: f64,
) -> Result<f64, HardcoreError> {
    if k == 0 {
        return Err(HardcoreError::KZero);
    }
    let independence = counts.independence_number();
    if k >= independence {
        return Err(HardcoreError::KOutOfRange { k, independence });
    }
    assert!(tol > 0.0, "tolerance must be positive");
    let target = k as f64;
    let mut lo = 1e-12_f64.ln();
    let mut hi = 1.0_f64.ln();
    let mut grow = 0;
    while mean_ln(counts, hi) < target {
        hi += std::f64::consts::LN_2;
        grow += 1;
        if grow > 4000 {
            return Err(HardcoreError::NoConvergence);
        }
    }
    if mean_ln(counts, lo) > target {
        // k >= 1 makes this unreachable for nontrivial graphs, but guard it.
        return Err(HardcoreError::NoConvergence);
    }
    for _ in 0..500 {
        let mid = 0.5 * (lo + hi);
        let m = mean_ln(counts, mid);
        if (m - target).abs() <= tol {
            return Ok(mid.exp());
        }
        if m < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(HardcoreError::NoConvergence)
}

/// Exact cumulants kappa_1..kappa_d from exact raw moments via the standard
/// recursion kappa_n = m_n - sum_{i<n} C(n-1, i-1) kappa_i m_{n-i}.
/// Degenerate (single-point) laws are allowed here; the public report
/// constructor enforces the two-point precondition.
pub fn cumulants_exact(model: &HardCoreModel, d: usize) -> Vec<Rat> {
    let moments: Vec<Rat> = (0..=d).map(|r| model.moment(r)).collect();
    let mut kappa: Vec<Rat> = vec![Rat::zero(); d + 1];
    for n in 1..=d {
        let mut acc = moments[n].clone();
        for i in 1..n {
            let c = crate::numeric::binomial(n - 1, i - 1);
            acc -= Rat::from_integer(BigInt::from(c)) * &kappa[i] * &moments[n - i];
        }
        kappa[n] = acc;
    }
    kappa.remove(0);
    kappa
}

/// Cumulant report: activity, mean, variance, kappa_3..kappa_d, and the
/// normalized beta_j = kappa_j / (j! sigma^j).
#[derive(Debug, Clone, serde::Serialize)]
pub struct CumulantReport {
    pub lambda: f64,
    pub mean: f64,
    pub variance: f64,
    pub kappa: Vec<f64>,
    pub beta: Vec<f64>,
    pub max_order: usize,
}

impl CumulantReport {
    /// kappa_j, 1-indexed.
    pub fn kappa(&self, j: usize) -> f64 {
        self.kappa[j - 1]
    }

    /// beta_j for j >= 3.
    pub fn beta(&self, j: usize) -> f64 {
        self.beta[j - 3]
    }

    pub fn sigma(&self) -> f64 {
        self.variance.sqrt()
    }
}

/// Moments -> cumulants -> normalized report. Requires d >= 2 and a law
/// supported on at least two sizes.
pub fn cumulants(model: &HardCoreModel, d: usize) -> Result<CumulantReport, HardcoreError> {
    if d < 2 {
        return Err(HardcoreError::InsufficientOrder { need: 2, have: d });
    }
    if model.support_size() < 2 {
        return Err(HardcoreError::Degenerate);
    }
    let exact = cumulants_exact(model, d);
    let kappa: Vec<f64> = exact.iter().map(rat_to_f64).collect();
    let variance = kappa[1];
    if variance <= 0.0 {
        return Err(HardcoreError::Degenerate);
    }
    let sigma = variance.sqrt();
    let mut beta = Vec::new();
    let mut fact = 2.0;
    for j in 3..=d {
        fact *= j as f64;
        beta.push(kappa[j - 1] / (fact * sigma.powi(j as i32)));
    }
    Ok(CumulantReport { lambda: model.lambda(), mean: kappa[0], variance, kappa, beta, max_order: d })
}

/// Probabilists' Hermite polynomial H_k(x):
/// H_0 = 1, H_1 = x, H_{k+1} = x H_k - k H_{k-1}.
pub fn hermite(k: usize, x: f64) -> f64 {
    match k {
        0 => 1.0,
        1 => x,
        _ => {
            let mut prev = 1.0;
            let mut cur = x;
            for m in 1..k {
                let next = x * cur - m as f64 * prev;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

/// One Hermite-order term of the expansion: the order r, the qualifying
/// exponent sequences (order, multiplicity), and the summed coefficient
/// sum over sequences of prod beta_m^{j_m} / j_m!.
#[derive(Debug, Clone)]
pub struct EdgeworthTerm {
    pub r: usize,
    pub sequences: Vec<Vec<(usize, usize)>>,
    pub coefficient: f64,
}

/// Enumerate the exponent sequences (j_3, ..., j_l) with
/// sum_m j_m (m - 2) <= d, grouped by r = sum_m m j_m. At d = 2 this yields
/// exactly the three sequences behind H_3 beta_3 + H_4 beta_4 + H_6 beta_3^2/2.
pub fn edgeworth_sequences(d: usize) -> Vec<(usize, Vec<Vec<(usize, usize)>>)> {
    let max_order = d + 2;
    let mut by_r: std::collections::BTreeMap<usize, Vec<Vec<(usize, usize)>>> =
        std::collections::BTreeMap::new();
    let mut current: Vec<(usize, usize)> = Vec::new();

    fn rec(
        m: usize,
        max_order: usize,
        weight_left: usize,
        r: usize,
        current: &mut Vec<(usize, usize)>,
        by_r: &mut std::collections::BTreeMap<usize, Vec<Vec<(usize, usize)>>>,
    ) {
        if m > max_order {
            if r > 0 {
                by_r.entry(r).or_default().push(current.clone());
            }
            return;
        }
        let unit = m - 2;
        let max_j = weight_left / unit;
        for j in 0..=max_j {
            if j > 0 {
                current.push((m, j));
            }
            rec(m + 1, max_order, weight_left - j * unit, r + m * j, current, by_r);
            if j > 0 {
                current.pop();
            }
        }
    }

    rec(3, max_order, d, 0, &mut current, &mut by_r);
    by_r.into_iter().collect()
}

/// Terms of the expansion for a given report, with coefficients evaluated.
pub fn edgeworth_terms(report: &CumulantReport, d: usize) -> Result<Vec<EdgeworthTerm>, HardcoreError> {
    if report.max_order < d + 2 {
        return Err(HardcoreError::InsufficientOrder { need: d + 2, have: report.max_order });
    }
    let mut out = Vec::new();
    for (r, sequences) in edgeworth_sequences(d) {
        let mut coefficient = 0.0;
        for seq in &sequences {
            let mut c = 1.0;
            for &(m, j) in seq {
                let mut fact = 1.0;
                for i in 1..=j {
                    fact *= i as f64;
                }
                c *= report.beta(m).powi(j as i32) / fact;
            }
            coefficient += c;
        }
        out.push(EdgeworthTerm { r, sequences, coefficient });
    }
    Ok(out)
}

/// Truncated Edgeworth estimate of P(X = mu + a):
/// gaussian(a) * (1 + sum_r H_r(a/sigma) * coefficient_r).
/// The caller targets a lattice point (mu + a integral).
pub fn edgeworth_estimate(
    report: &CumulantReport,
    a: f64,
    d: usize,
) -> Result<f64, HardcoreError> {
    let sigma = report.sigma();
    if !(sigma > 0.0) {
        return Err(HardcoreError::SigmaNonPositive);
    }
    let terms = edgeworth_terms(report, d)?;
    let x = a / sigma;
    let mut correction = 1.0;
    for term in &terms {
        correction += hermite(term.r, x) * term.coefficient;
    }
    let gauss = (-a * a / (2.0 * sigma * sigma)).exp() / ((2.0 * std::f64::consts::PI).sqrt() * sigma);
    Ok(gauss * correction)
}

/// |kappa_j(X) - kappa_j(X')| for j = 1..=d, where X is the size conditioned
/// on u in I (one plus the size on G^u) and X' the size conditioned on u
/// not in I (the size on G^ubar). Exact.
pub fn cumulant_stability(
    g: &Graph,
    u: usize,
    lambda: f64,
    d: usize,
) -> Result<Vec<Rat>, HardcoreError> {
    if u >= g.n() {
        return Err(GraphError::VertexOutOfRange { v: u, n: g.n() }.into());
    }
    if g.n() <= 1 {
        return Err(HardcoreError::Degenerate);
    }
    if !(lambda > 0.0) {
        return Err(HardcoreError::BadActivity);
    }
    let g_in = g.delete_closed_neighborhood(u)?.graph;
    let g_out = g.delete_vertex(u)?.graph;
    let counts_in = count::size_counts(&g_in, &PinSet::none())?;
    let counts_out = count::size_counts(&g_out, &PinSet::none())?;
    let model_in = HardCoreModel::new(counts_in, lambda)?;
    let model_out = HardCoreModel::new(counts_out, lambda)?;
    let mut kin = cumulants_exact(&model_in, d);
    let kout = cumulants_exact(&model_out, d);
    kin[0] += Rat::one(); // X = 1 + size on G^u
    Ok(kin
        .into_iter()
        .zip(kout)
        .map(|(a, b)| {
            let diff = a - b;
            if diff.is_negative() {
                -diff
            } else {
                diff
            }
        })
        .collect())
}

/// min over u of min(mu_k[u], mu_k[ubar]) on the uniform slice law, exact.
pub fn marginal_bounds(g: &Graph, k: usize) -> Result<Rat, HardcoreError> {
    let all = count::size_counts(g, &PinSet::none())?;
    let a_k = all.get(k);
    if a_k.is_zero() {
        return Err(HardcoreError::KOutOfRange { k, independence: all.independence_number() });
    }
    let mut best: Option<Rat> = None;
    for u in 0..g.n() {
        let pinned = count::size_counts(g, &PinSet::pin_in(u))?;
        let mu_u = count::big_ratio(&pinned.get(k), &a_k);
        let mu_bar = Rat::one() - &mu_u;
        let m = if mu_u <= mu_bar { mu_u } else { mu_bar };
        best = Some(match best {
            None => m,
            Some(b) => {
                if m < b {
                    m
                } else {
                    b
                }
            }
        });
    }
    Ok(best.expect("n >= 1"))
}
