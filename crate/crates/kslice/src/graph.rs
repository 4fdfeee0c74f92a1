//! Graph representation, edge-list parsing, component analysis, Δ-goodness
//! checks, and the vertex-surgery operations (delete a vertex, delete a
//! closed neighborhood) that the counting and stability machinery builds on.

use num_rational::Ratio;
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::numeric::stream_seed;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: malformed line: {text:?}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: vertex {v} out of range (n = {n})")]
    OutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: self-loop at vertex {v}")]
    SelfLoop { line: usize, v: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("vertex {v} out of range (n = {n})")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("declared max degree {delta} below observed degree {observed}")]
    DeltaTooSmall { delta: usize, observed: usize },
    #[error("operation requires n >= {min}, graph has n = {n}")]
    TooSmall { min: usize, n: usize },
    #[error("trials must be positive")]
    NoTrials,
    #[error("pinned set induces a component of size {size} > 2")]
    SeedComponentTooLarge { size: usize },
    #[error("subset size {ell} out of range (|s| = {s}, n = {n})")]
    BadSubsetSize { ell: usize, s: usize, n: usize },
    #[error("vertex set is not a connected component")]
    NotAComponent,
}

/// Immutable simple graph with sorted adjacency lists and a declared
/// max-degree bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<Vec<usize>>,
    delta: usize,
}

impl Graph {
    /// Build from an edge list, validating simplicity. The declared degree
    /// bound is the observed max degree (at least 1).
    pub fn new(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 2; // matches edge-list text layout
            if u >= n {
                return Err(GraphError::OutOfRange { line, v: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { line, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        let delta = adj.iter().map(Vec::len).max().unwrap_or(0).max(1);
        Ok(Graph { n, adj, delta })
    }

    /// Replace the declared degree bound. Must dominate the observed degrees.
    pub fn with_delta(mut self, delta: usize) -> Result<Graph, GraphError> {
        let observed = self.max_degree();
        if delta < observed || delta == 0 {
            return Err(GraphError::DeltaTooSmall { delta, observed });
        }
        self.delta = delta;
        Ok(self)
    }

    /// Parse the edge-list text format: first line `n m`, then `m` lines
    /// `u v`. Whitespace separated, LF line endings.
    pub fn parse(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text.lines().enumerate();
        let (_, header) = lines
            .next()
            .ok_or_else(|| GraphError::Malformed { line: 1, text: String::new() })?;
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Malformed { line: 1, text: header.to_string() })?;
        let m: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| GraphError::Malformed { line: 1, text: header.to_string() })?;
        if it.next().is_some() {
            return Err(GraphError::Malformed { line: 1, text: header.to_string() });
        }
        let mut edges = Vec::with_capacity(m);
        let mut count = 0usize;
        for (i, raw) in lines {
            let line = i + 1;
            if raw.trim().is_empty() {
                continue;
            }
            let mut it = raw.split_whitespace();
            let u: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Malformed { line, text: raw.to_string() })?;
            let v: usize = it
                .next()
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| GraphError::Malformed { line, text: raw.to_string() })?;
            if it.next().is_some() {
                return Err(GraphError::Malformed { line, text: raw.to_string() });
            }
            if u >= n {
                return Err(GraphError::OutOfRange { line, v: u, n });
            }
            if v >= n {
                return Err(GraphError::OutOfRange { line, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop { line, v: u });
            }
            edges.push((u, v));
            count += 1;
        }
        if count != m {
            return Err(GraphError::Malformed {
                line: count + 1,
                text: format!("expected {m} edges, found {count}"),
            });
        }
        // Re-run through `new` for duplicate detection with line numbers.
        let mut adj = vec![Vec::new(); n];
        for (idx, &(u, v)) in edges.iter().enumerate() {
            let line = idx + 2;
            if adj[u].contains(&v) {
                return Err(GraphError::DuplicateEdge { line, u, v });
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        Graph::new(n, &edges)
    }

    /// Canonical edge-list text: `n m`, then edges sorted lexicographically
    /// with `u < v`.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        let edges: Vec<(usize, usize)> = self.edges().collect();
        out.push_str(&format!("{} {}\n", self.n, edges.len()));
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, lexicographically sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u].iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Connected components, ordered by minimum vertex index.
    pub fn components(&self) -> ComponentDecomposition {
        let mut seen = vec![false; self.n];
        let mut components = Vec::new();
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &w in &self.adj[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                        queue.push(w);
                    }
                }
            }
            comp.sort_unstable();
            components.push(comp);
        }
        let sizes = components.iter().map(Vec::len).collect();
        ComponentDecomposition { components, sizes }
    }

    /// Component index of each vertex, matching `components()` order.
    pub fn component_labels(&self) -> Vec<usize> {
        let decomp = self.components();
        let mut label = vec![0usize; self.n];
        for (i, comp) in decomp.components.iter().enumerate() {
            for &v in comp {
                label[v] = i;
            }
        }
        label
    }

    /// Remove vertex `u`; remaining vertices are relabeled stably.
    pub fn delete_vertex(&self, u: usize) -> Result<Surgery, GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        self.delete_set(&[u])
    }

    /// Remove `u` together with all its neighbors.
    pub fn delete_closed_neighborhood(&self, u: usize) -> Result<Surgery, GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        let mut gone = vec![u];
        gone.extend_from_slice(&self.adj[u]);
        self.delete_set(&gone)
    }

    /// Remove an arbitrary vertex set, returning the surgered graph plus the
    /// stable relabeling maps in both directions.
    pub fn delete_set(&self, gone: &[usize]) -> Result<Surgery, GraphError> {
        let mut removed = vec![false; self.n];
        for &v in gone {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
            removed[v] = true;
        }
        let mut old_to_new = vec![None; self.n];
        let mut new_to_old = Vec::new();
        for v in 0..self.n {
            if !removed[v] {
                old_to_new[v] = Some(new_to_old.len());
                new_to_old.push(v);
            }
        }
        let mut edges = Vec::new();
        for (u, v) in self.edges() {
            if let (Some(a), Some(b)) = (old_to_new[u], old_to_new[v]) {
                edges.push((a, b));
            }
        }
        let graph = Graph::new(new_to_old.len(), &edges)?;
        // The declared bound survives surgery (degrees only drop).
        let graph = if graph.max_degree() <= self.delta {
            Graph { delta: self.delta, ..graph }
        } else {
            graph
        };
        Ok(Surgery { graph, old_to_new, new_to_old })
    }

    /// Induced subgraph on `verts` (relabeled stably).
    pub fn induced(&self, verts: &[usize]) -> Result<Surgery, GraphError> {
        let mut keep = vec![false; self.n];
        for &v in verts {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
            keep[v] = true;
        }
        let gone: Vec<usize> = (0..self.n).filter(|&v| !keep[v]).collect();
        self.delete_set(&gone)
    }

    /// Δ-goodness per the component-structure criterion: the largest
    /// component is at most 1000·Δ·ln n and there are at least
    /// ceil(coeff·n/Δ) components. The count-floor coefficient defaults to
    /// 1/16 and is exposed as a knob.
    pub fn is_delta_good(&self, count_floor_coeff: Ratio<u64>) -> Result<GoodnessReport, GraphError> {
        if self.n < 2 {
            return Err(GraphError::TooSmall { min: 2, n: self.n });
        }
        let decomp = self.components();
        let max_component_size = decomp.sizes.iter().copied().max().unwrap_or(0);
        let component_count = decomp.components.len();
        let size_cap = 1000.0 * self.delta as f64 * (self.n as f64).ln();
        let floor_ratio = count_floor_coeff * Ratio::new(self.n as u64, self.delta as u64);
        let count_floor = floor_ratio.ceil().to_integer() as usize;
        let is_good =
            (max_component_size as f64) <= size_cap && component_count >= count_floor;
        Ok(GoodnessReport {
            is_good,
            max_component_size,
            component_count,
            size_cap,
            count_floor,
        })
    }

    // Small constructors used by the corpus, examples, and tests.

    pub fn empty(n: usize) -> Graph {
        Graph::new(n, &[]).expect("valid")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::new(n, &edges).expect("valid")
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3, "cycle needs n >= 3");
        let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        edges.push((n - 1, 0));
        Graph::new(n, &edges).expect("valid")
    }

    pub fn complete(n: usize) -> Graph {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges).expect("valid")
    }

    /// Disjoint union, second operand's labels shifted by `self.n`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let mut edges: Vec<_> = self.edges().collect();
        edges.extend(other.edges().map(|(u, v)| (u + self.n, v + self.n)));
        let g = Graph::new(self.n + other.n, &edges).expect("valid");
        let delta = self.delta.max(other.delta);
        Graph { delta, ..g }
    }

    /// Seeded random graph with max degree at most `delta`: candidate edges
    /// in shuffled order, inserted while the degree bound permits.
    pub fn random_max_degree(n: usize, delta: usize, seed: u64) -> Graph {
        let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 0x67726170));
        let mut candidates: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        // Fisher-Yates
        for i in (1..candidates.len()).rev() {
            let j = rng.random_range(0..=i);
            candidates.swap(i, j);
        }
        let mut deg = vec![0usize; n];
        let mut edges = Vec::new();
        for (u, v) in candidates {
            if deg[u] < delta && deg[v] < delta {
                deg[u] += 1;
                deg[v] += 1;
                edges.push((u, v));
            }
        }
        Graph::new(n, &edges)
            .expect("valid")
            .with_delta(delta.max(1))
            .expect("bound dominates")
    }
}

/// Stable-relabeled result of a vertex-surgery operation.
#[derive(Debug, Clone)]
pub struct Surgery {
    pub graph: Graph,
    /// old vertex -> new label (None when removed)
    pub old_to_new: Vec<Option<usize>>,
    /// new label -> old vertex
    pub new_to_old: Vec<usize>,
}

/// Partition of V into connected components, ordered by minimum vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComponentDecomposition {
    pub components: Vec<Vec<usize>>,
    pub sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GoodnessReport {
    pub is_good: bool,
    pub max_component_size: usize,
    pub component_count: usize,
    pub size_cap: f64,
    pub count_floor: usize,
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct GoodnessExperiment {
    pub trials: usize,
    pub failures: usize,
    pub failure_rate: f64,
}

/// Estimate how often a uniform superset W ⊇ s_set of size `ell` induces a
/// graph that is not Δ-good. Deterministic for a fixed seed.
pub fn random_subset_goodness_experiment(
    g: &Graph,
    s_set: &[usize],
    ell: usize,
    trials: usize,
    seed: u64,
    count_floor_coeff: Ratio<u64>,
) -> Result<GoodnessExperiment, GraphError> {
    if trials == 0 {
        return Err(GraphError::NoTrials);
    }
    if s_set.len() > ell || ell > g.n() {
        return Err(GraphError::BadSubsetSize { ell, s: s_set.len(), n: g.n() });
    }
    for &v in s_set {
        if v >= g.n() {
            return Err(GraphError::VertexOutOfRange { v, n: g.n() });
        }
    }
    // The seed set must induce components of size at most 2.
    let induced = g.induced(s_set)?;
    if let Some(&size) = induced.graph.components().sizes.iter().find(|&&s| s > 2) {
        return Err(GraphError::SeedComponentTooLarge { size });
    }

    let in_s = {
        let mut b = vec![false; g.n()];
        for &v in s_set {
            b[v] = true;
        }
        b
    };
    let rest: Vec<usize> = (0..g.n()).filter(|&v| !in_s[v]).collect();
    let need = ell - s_set.len();
    let mut rng = ChaCha12Rng::seed_from_u64(stream_seed(seed, 0x676f6f64));
    let mut failures = 0usize;
    let mut pool = rest.clone();
    for _ in 0..trials {
        // partial Fisher-Yates to draw `need` vertices without replacement
        for i in 0..need {
            let j = rng.random_range(i..pool.len());
            pool.swap(i, j);
        }
        let mut w: Vec<usize> = s_set.to_vec();
        w.extend_from_slice(&pool[..need]);
        let sub = g.induced(&w)?;
        let delta = g.delta().max(sub.graph.max_degree()).max(1);
        let sub_graph = sub.graph.with_delta(delta).expect("bound dominates");
        let report = sub_graph.is_delta_good(count_floor_coeff)?;
        if !report.is_good {
            failures += 1;
        }
    }
    Ok(GoodnessExperiment {
        trials,
        failures,
        failure_rate: failures as f64 / trials as f64,
    })
}
