//! Exact counting of independent sets by size: the coefficient vector of the
//! independence polynomial, pinning support, complex evaluation, the
//! occupancy ratio, and an empirical zero-freeness probe.
//!
//! Counts are arbitrary-precision integers throughout; floats appear only at
//! the final reporting step. Two independent count routes exist (bitmask
//! branching with neighbor-mask pruning, and a structured DP for forests and
//! unions of paths/cycles) and must agree exactly wherever both apply.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::graph::{Graph, GraphError};
use crate::hardcore;
use crate::numeric::{exp_rat_complex, rat_from_f64, Rat, RatComplex, EVAL_BITS};

/// Vertex subsets are bitmasks; all enumeration work is capped at n <= 30.
pub const BRUTE_CAP: usize = 30;

#[derive(Debug, Error, PartialEq)]
pub enum CountError {
    #[error("graph too large for brute-force counting (n = {n} > {cap})")]
    TooLarge { n: usize, cap: usize },
    #[error("component of size {size} is neither a tree nor a cycle and exceeds the brute-force cap")]
    UnsupportedStructure { size: usize },
    #[error("in-pins {u} and {v} are adjacent (not an independent set)")]
    PinsNotIndependent { u: usize, v: usize },
    #[error("vertex {v} appears in both in-pins and out-pins")]
    PinOverlap { v: usize },
    #[error("pin vertex {v} out of range (n = {n})")]
    PinOutOfRange { v: usize, n: usize },
    #[error("activity grid must be non-empty")]
    EmptyActivityGrid,
    #[error("invalid probe config: {0}")]
    BadConfig(String),
    #[error("denominator vanishes at lambda = {lambda}, t = {t_re} + {t_im}i")]
    DenominatorVanishes { lambda: f64, t_re: f64, t_im: f64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Exact counts a_0..a_n with a_j the number of independent sets of total
/// size j (pinned vertices included in the size).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeCountVector {
    counts: Vec<BigUint>,
}

impl SizeCountVector {
    pub fn from_counts(counts: Vec<BigUint>) -> Self {
        SizeCountVector { counts }
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.counts
    }

    pub fn get(&self, j: usize) -> BigUint {
        self.counts.get(j).cloned().unwrap_or_else(BigUint::zero)
    }

    /// Largest j with a_j > 0.
    pub fn independence_number(&self) -> usize {
        self.counts
            .iter()
            .enumerate()
            .rev()
            .find(|(_, c)| !c.is_zero())
            .map(|(j, _)| j)
            .unwrap_or(0)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Invariants of an unpinned count vector for a graph on n vertices.
    pub fn validate_unpinned(&self, n: usize) -> Result<(), String> {
        if self.counts.len() != n + 1 {
            return Err(format!("length {} != n+1 = {}", self.counts.len(), n + 1));
        }
        if self.counts[0] != BigUint::one() {
            return Err("a_0 != 1".to_string());
        }
        if n >= 1 && self.counts[1] != BigUint::from(n) {
            return Err(format!("a_1 = {} != n = {n}", self.counts[1]));
        }
        Ok(())
    }

    /// Horner evaluation at an exact rational point.
    pub fn eval_rat(&self, z: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for c in self.counts.iter().rev() {
            acc = acc * z + Rat::from_integer(BigInt::from(c.clone()));
        }
        acc
    }

    /// Horner evaluation at an exact rational complex point.
    pub fn eval_rat_complex(&self, z: &RatComplex) -> RatComplex {
        let mut acc = RatComplex::zero();
        for c in self.counts.iter().rev() {
            acc = acc.mul(z);
            acc.re += Rat::from_integer(BigInt::from(c.clone()));
        }
        acc
    }

    /// Z(z) for a complex argument. The input is rationalized exactly and the
    /// Horner recurrence runs in exact rational complex arithmetic, so the
    /// result is correct to the last f64 bit even when intermediate
    /// magnitudes overflow doubles.
    pub fn eval_z(&self, z: Complex64) -> Complex64 {
        let zr = RatComplex::from_f64(z).expect("finite complex argument");
        self.eval_rat_complex(&zr).to_complex64()
    }

    /// JSON array of exact decimal strings.
    pub fn to_json(&self) -> String {
        let strings: Vec<String> = self.counts.iter().map(|c| c.to_string()).collect();
        serde_json::to_string(&strings).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let strings: Vec<String> = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let mut counts = Vec::with_capacity(strings.len());
        for s in &strings {
            counts.push(s.parse::<BigUint>().map_err(|e| e.to_string())?);
        }
        Ok(SizeCountVector { counts })
    }
}

/// Vertices forced into / out of the independent set. Vertices adjacent to an
/// in-pin are implied out and need not be listed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PinSet {
    pub in_pins: Vec<usize>,
    pub out_pins: Vec<usize>,
}

impl PinSet {
    pub fn none() -> Self {
        PinSet::default()
    }

    pub fn pin_in(v: usize) -> Self {
        PinSet { in_pins: vec![v], out_pins: vec![] }
    }

    pub fn pin_out(v: usize) -> Self {
        PinSet { in_pins: vec![], out_pins: vec![v] }
    }

    fn validate(&self, g: &Graph) -> Result<(), CountError> {
        for &v in self.in_pins.iter().chain(&self.out_pins) {
            if v >= g.n() {
                return Err(CountError::PinOutOfRange { v, n: g.n() });
            }
        }
        for (i, &u) in self.in_pins.iter().enumerate() {
            for &v in &self.in_pins[i + 1..] {
                if u == v || g.has_edge(u, v) {
                    return Err(CountError::PinsNotIndependent { u, v });
                }
            }
        }
        for &v in &self.out_pins {
            if self.in_pins.contains(&v) {
                return Err(CountError::PinOverlap { v });
            }
        }
        Ok(())
    }
}

fn poly_mul(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

fn poly_add(a: &[BigUint], b: &[BigUint]) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += y;
    }
    out
}

fn shift_up(a: &[BigUint], by: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); a.len() + by];
    for (i, x) in a.iter().enumerate() {
        out[i + by] = x.clone();
    }
    out
}

/// Bitmask branching count with memoization on the available-vertex mask:
/// counts(S) = counts(S \ v) + x * counts(S \ N[v]) on the lowest v in S.
fn branch_counts(g: &Graph) -> Result<Vec<BigUint>, CountError> {
    let n = g.n();
    if n > BRUTE_CAP {
        return Err(CountError::TooLarge { n, cap: BRUTE_CAP });
    }
    let mut nbr = vec![0u64; n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            nbr[v] |= 1 << w;
        }
    }
    let full: u64 = if n == 64 { !0 } else { (1u64 << n) - 1 };
    let mut memo: HashMap<u64, Vec<BigUint>> = HashMap::new();

    fn rec(avail: u64, nbr: &[u64], memo: &mut HashMap<u64, Vec<BigUint>>) -> Vec<BigUint> {
        if avail == 0 {
            return vec![BigUint::one()];
        }
        if let Some(hit) = memo.get(&avail) {
            return hit.clone();
        }
        let v = avail.trailing_zeros() as usize;
        let without = rec(avail & !(1 << v), nbr, memo);
        let with = rec(avail & !((1 << v) | nbr[v]), nbr, memo);
        let res = poly_add(&without, &shift_up(&with, 1));
        memo.insert(avail, res.clone());
        res
    }

    let mut out = rec(full, &nbr, &mut memo);
    out.resize(n + 1, BigUint::zero());
    Ok(out)
}

/// Size-indexed DP over a tree component: per vertex, counts with the vertex
/// excluded / included, children folded in by convolution.
fn tree_counts(g: &Graph, root: usize) -> (Vec<BigUint>, Vec<BigUint>) {
    fn dfs(g: &Graph, v: usize, parent: Option<usize>) -> (Vec<BigUint>, Vec<BigUint>) {
        let mut out_v = vec![BigUint::one()];
        let mut in_v = vec![BigUint::zero(), BigUint::one()];
        for &c in g.neighbors(v) {
            if Some(c) == parent {
                continue;
            }
            let (out_c, in_c) = dfs(g, c, Some(v));
            out_v = poly_mul(&out_v, &poly_add(&out_c, &in_c));
            in_v = poly_mul(&in_v, &out_c);
        }
        (out_v, in_v)
    }
    dfs(g, root, None)
}

fn is_tree(g: &Graph, comp: &[usize]) -> bool {
    let edges: usize = comp.iter().map(|&v| g.degree(v)).sum::<usize>() / 2;
    edges == comp.len().saturating_sub(1)
}

fn is_cycle(g: &Graph, comp: &[usize]) -> bool {
    comp.len() >= 3 && comp.iter().all(|&v| g.degree(v) == 2)
}

/// Count one connected component, choosing the route by structure.
fn component_counts(g: &Graph, comp: &[usize], structured_only: bool) -> Result<Vec<BigUint>, CountError> {
    if comp.len() == 1 {
        return Ok(vec![BigUint::one(), BigUint::one()]);
    }
    let local = g.induced(comp)?;
    if is_tree(&local.graph, &(0..comp.len()).collect::<Vec<_>>()) {
        let (out, inn) = tree_counts(&local.graph, 0);
        return Ok(poly_add(&out, &inn));
    }
    if is_cycle(&local.graph, &(0..comp.len()).collect::<Vec<_>>()) {
        // Condition on vertex 0: out -> path on the rest; in -> neighbors of 0
        // forced out, path on the remainder, sizes shifted by one.
        let without = local.graph.delete_vertex(0)?;
        let (o, i) = tree_counts(&without.graph, 0);
        let out_branch = poly_add(&o, &i);
        let closed = local.graph.delete_closed_neighborhood(0)?;
        let in_branch = if closed.graph.n() == 0 {
            vec![BigUint::one()]
        } else {
            let mut acc = vec![BigUint::one()];
            for c in closed.graph.components().components {
                let sub = component_counts(&closed.graph, &c, structured_only)?;
                acc = poly_mul(&acc, &sub);
            }
            acc
        };
        return Ok(poly_add(&out_branch, &shift_up(&in_branch, 1)));
    }
    if structured_only || comp.len() > BRUTE_CAP {
        return Err(CountError::UnsupportedStructure { size: comp.len() });
    }
    branch_counts(&local.graph)
}

fn counts_with_route(
    g: &Graph,
    pins: &PinSet,
    route: Route,
) -> Result<SizeCountVector, CountError> {
    pins.validate(g)?;
    let n = g.n();
    // Apply pins by surgery: closed neighborhoods of in-pins and the
    // out-pins themselves disappear from the residual graph.
    let mut gone = Vec::new();
    for &v in &pins.in_pins {
        gone.push(v);
        gone.extend_from_slice(g.neighbors(v));
    }
    gone.extend_from_slice(&pins.out_pins);
    gone.sort_unstable();
    gone.dedup();
    let residual = if gone.is_empty() { None } else { Some(g.delete_set(&gone)?) };
    let rg = residual.as_ref().map(|s| &s.graph).unwrap_or(g);

    let raw = match route {
        Route::Brute => branch_counts(rg)?,
        Route::Structured | Route::Auto => {
            let structured_only = route == Route::Structured;
            let mut acc = vec![BigUint::one()];
            for comp in rg.components().components {
                let sub = component_counts(rg, &comp, structured_only)?;
                acc = poly_mul(&acc, &sub);
            }
            acc
        }
    };
    let mut shifted = shift_up(&raw, pins.in_pins.len());
    shifted.resize(n + 1, BigUint::zero());
    shifted.truncate(n + 1);
    Ok(SizeCountVector { counts: shifted })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Auto,
    Brute,
    Structured,
}

/// Exact size counts with pinning; picks per component between the tree DP,
/// the cycle reduction, and bitmask branching (components up to n = 30).
pub fn size_counts(g: &Graph, pins: &PinSet) -> Result<SizeCountVector, CountError> {
    counts_with_route(g, pins, Route::Auto)
}

/// Bitmask branching over the whole residual graph; requires n <= 30.
pub fn size_counts_brute(g: &Graph, pins: &PinSet) -> Result<SizeCountVector, CountError> {
    counts_with_route(g, pins, Route::Brute)
}

/// Structured DP only (forests and disjoint unions of paths/cycles, any n);
/// errors on components of any other shape.
pub fn size_counts_structured(g: &Graph, pins: &PinSet) -> Result<SizeCountVector, CountError> {
    counts_with_route(g, pins, Route::Structured)
}

/// Enumerated slice I_k(G): every independent set of size exactly k, as
/// bitmasks in ascending numeric order.
#[derive(Debug, Clone)]
pub struct SliceSpace {
    graph: Graph,
    k: usize,
    states: Vec<u64>,
    index: HashMap<u64, usize>,
}

impl SliceSpace {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[u64] {
        &self.states
    }

    pub fn state(&self, i: usize) -> u64 {
        self.states[i]
    }

    pub fn index_of(&self, mask: u64) -> Option<usize> {
        self.index.get(&mask).copied()
    }

    pub fn vertices_of(&self, i: usize) -> Vec<usize> {
        mask_vertices(self.states[i])
    }
}

pub fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&b| mask >> b & 1 == 1).collect()
}

pub fn vertices_mask(verts: &[usize]) -> u64 {
    verts.iter().fold(0u64, |m, &v| m | 1 << v)
}

/// Every independent set of size k in G; empty slices are returned as empty
/// spaces, not errors. Requires n <= 30.
pub fn enumerate_slice(g: &Graph, k: usize) -> Result<SliceSpace, CountError> {
    let n = g.n();
    if n > BRUTE_CAP {
        return Err(CountError::TooLarge { n, cap: BRUTE_CAP });
    }
    let mut nbr = vec![0u64; n];
    for v in 0..n {
        for &w in g.neighbors(v) {
            nbr[v] |= 1 << w;
        }
    }
    let mut states = Vec::new();
    let mut stack = vec![(0usize, 0u64, 0u64, k)];
    while let Some((start, mask, blocked, left)) = stack.pop() {
        if left == 0 {
            states.push(mask);
            continue;
        }
        for v in start..n {
            if n - v < left {
                break;
            }
            if blocked >> v & 1 == 1 {
                continue;
            }
            stack.push((v + 1, mask | 1 << v, blocked | nbr[v], left - 1));
        }
    }
    states.sort_unstable();
    let index = states.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    Ok(SliceSpace { graph: g.clone(), k, states, index })
}

pub fn is_independent(g: &Graph, mask: u64) -> bool {
    for v in mask_vertices(mask) {
        for &w in g.neighbors(v) {
            if w > v && mask >> w & 1 == 1 {
                return false;
            }
        }
    }
    true
}

/// The occupancy ratio R_u(lambda, t) = lambda e^t Z_{G^u}(lambda e^t) /
/// Z_{G^ubar}(lambda e^t), evaluated in exact rational complex arithmetic at
/// a dyadic rounding of e^t.
pub fn occupancy_ratio(
    g: &Graph,
    u: usize,
    lambda: f64,
    t: Complex64,
) -> Result<Complex64, CountError> {
    if u >= g.n() {
        return Err(GraphError::VertexOutOfRange { v: u, n: g.n() }.into());
    }
    let counts_in = size_counts(&g.delete_closed_neighborhood(u)?.graph, &PinSet::none())?;
    let counts_out = size_counts(&g.delete_vertex(u)?.graph, &PinSet::none())?;
    let lam = rat_from_f64(lambda)
        .ok_or_else(|| CountError::BadConfig("activity must be finite".into()))?;
    let tr = RatComplex::from_f64(t)
        .ok_or_else(|| CountError::BadConfig("contour point must be finite".into()))?;
    let z = exp_rat_complex(&tr, EVAL_BITS).scale(&lam);
    let den = counts_out.eval_rat_complex(&z);
    if den.norm_sqr().is_zero() {
        return Err(CountError::DenominatorVanishes { lambda, t_re: t.re, t_im: t.im });
    }
    let num = counts_in.eval_rat_complex(&z).mul(&z);
    Ok(num.div(&den).expect("nonzero denominator").to_complex64())
}

/// Probe configuration. `probe_radius` stands in for the (unknowable)
/// zero-free radius; the probe reports what it sees and never certifies.
#[derive(Debug, Clone)]
pub struct ZeroProbeConfig {
    pub probe_radius: f64,
    pub activity_grid: Vec<f64>,
    pub angular_samples: usize,
    pub contour_radii: Vec<f64>,
    pub tolerance: f64,
}

impl Default for ZeroProbeConfig {
    fn default() -> Self {
        ZeroProbeConfig {
            probe_radius: 0.05,
            activity_grid: vec![],
            angular_samples: 16,
            contour_radii: vec![],
            tolerance: 1e-6,
        }
    }
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ProbePoint {
    pub lambda: f64,
    pub t_re: f64,
    pub t_im: f64,
    pub modulus: f64,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct ZeroProbeReport {
    pub min_modulus: f64,
    pub min_point: ProbePoint,
    pub near_zeros: Vec<ProbePoint>,
    pub evaluations: usize,
    pub tolerance: f64,
}

/// Scan |Z_G(lambda e^t) / Z_G(lambda)| over the activity grid and contour
/// points |t| = r. Reports the minimum modulus found and any near-zero
/// points; a clean report is evidence, not a proof, of zero-freeness.
pub fn zero_free_probe(g: &Graph, cfg: &ZeroProbeConfig) -> Result<ZeroProbeReport, CountError> {
    if cfg.activity_grid.is_empty() {
        return Err(CountError::EmptyActivityGrid);
    }
    if cfg.probe_radius <= 0.0 {
        return Err(CountError::BadConfig("probe_radius must be positive".into()));
    }
    if cfg.angular_samples == 0 {
        return Err(CountError::BadConfig("angular_samples must be positive".into()));
    }
    // The uniqueness threshold is defined from degree 3 upward; paths and
    // cycles are probed against the degree-3 threshold.
    let lambda_c = hardcore::critical_activity_f64(g.delta().max(3)).expect("delta >= 3");
    for &lam in &cfg.activity_grid {
        if !(0.0..lambda_c).contains(&lam) {
            return Err(CountError::BadConfig(format!(
                "activity {lam} outside [0, lambda_c = {lambda_c})"
            )));
        }
    }
    let radii = if cfg.contour_radii.is_empty() {
        vec![cfg.probe_radius]
    } else {
        cfg.contour_radii.clone()
    };
    let counts = size_counts(g, &PinSet::none())?;
    let mut min_modulus = f64::INFINITY;
    let mut min_point = ProbePoint { lambda: 0.0, t_re: 0.0, t_im: 0.0, modulus: f64::INFINITY };
    let mut near_zeros = Vec::new();
    let mut evaluations = 0usize;
    for &lam in &cfg.activity_grid {
        let lam_rat = rat_from_f64(lam).expect("finite");
        let z_base = counts.eval_rat(&lam_rat);
        for &r in &radii {
            for s in 0..cfg.angular_samples {
                let theta = 2.0 * std::f64::consts::PI * s as f64 / cfg.angular_samples as f64;
                let t = Complex64::new(r * theta.cos(), r * theta.sin());
                let tr = RatComplex::from_f64(t).expect("finite");
                let z = exp_rat_complex(&tr, EVAL_BITS).scale(&lam_rat);
                let val = counts.eval_rat_complex(&z);
                let ratio = RatComplex::new(&val.re / &z_base, &val.im / &z_base);
                let modulus = ratio.abs_f64();
                evaluations += 1;
                if modulus < min_modulus {
                    min_modulus = modulus;
                    min_point =
                        ProbePoint { lambda: lam, t_re: t.re, t_im: t.im, modulus };
                }
                if modulus < cfg.tolerance {
                    near_zeros.push(ProbePoint { lambda: lam, t_re: t.re, t_im: t.im, modulus });
                }
            }
        }
    }
    Ok(ZeroProbeReport { min_modulus, min_point, near_zeros, evaluations, tolerance: cfg.tolerance })
}

/// Slice cardinality |I_k(G)| straight from the count vector.
pub fn slice_size(g: &Graph, k: usize) -> Result<BigUint, CountError> {
    Ok(size_counts(g, &PinSet::none())?.get(k))
}

/// Exact rational f64 wrapper shared by a few call sites.
pub fn rat_of(x: f64) -> Rat {
    rat_from_f64(x).expect("finite")
}

/// Ratio helper: exact rational a/b of two big integers.
pub fn big_ratio(a: &BigUint, b: &BigUint) -> Rat {
    Ratio::new(BigInt::from(a.clone()), BigInt::from(b.clone()))
}
