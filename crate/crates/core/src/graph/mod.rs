//! Hierarchical graphs (DAGs in linear extension ordering) and the mixed
//! graphs obtained by attaching reverse edges to them.
//!
//! Vertices are numbered `1..=n`. An edge `(child, parent, weight)` means the
//! child receives information from the parent, i.e. it contributes the entry
//! `a[child][parent] = weight` of the weighted adjacency matrix. DAG edges
//! always have `child > parent` (the adjacency matrix is strictly lower
//! triangular); reverse edges have `child < parent`.

mod generate;
mod laplacian;
mod spec;

pub use generate::{gen_path, gen_path_ring, gen_random_capped, gen_random_mixed, gen_star, gen_star_mixed};
pub use laplacian::{laplacian, LaplacianDecomposition, ReverseSpan};
pub use spec::GraphSpec;

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("a hierarchical graph needs more than 2 vertices, got {0}")]
    TooFewVertices(usize),
    #[error("vertex index out of range in edge ({child}, {parent}) for n = {n}")]
    VertexOutOfRange { child: usize, parent: usize, n: usize },
    #[error("DAG edge ({child}, {parent}) violates the linear extension ordering (child must be > parent)")]
    EdgeOrderViolation { child: usize, parent: usize },
    #[error("duplicate DAG edge ({child}, {parent})")]
    DuplicateEdge { child: usize, parent: usize },
    #[error("reverse edge ({child}, {parent}) must have child < parent")]
    ReverseOrderViolation { child: usize, parent: usize },
    #[error("duplicate reverse edge ({child}, {parent})")]
    DuplicateReverseEdge { child: usize, parent: usize },
    #[error("edge ({child}, {parent}) has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { child: usize, parent: usize, weight: f64 },
    #[error("requested {requested} reverse edges but only {available} vertex pairs exist")]
    InfeasibleReverseCount { requested: usize, available: usize },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
}

/// A weighted directed edge; `child` receives from `parent`. One-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub child: usize,
    pub parent: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(child: usize, parent: usize, weight: f64) -> Self {
        Self { child, parent, weight }
    }
}

impl From<(usize, usize, f64)> for Edge {
    fn from((child, parent, weight): (usize, usize, f64)) -> Self {
        Self::new(child, parent, weight)
    }
}

fn check_edge(e: &Edge, n: usize) -> Result<(), GraphError> {
    if e.child == 0 || e.parent == 0 || e.child > n || e.parent > n {
        return Err(GraphError::VertexOutOfRange { child: e.child, parent: e.parent, n });
    }
    if !(e.weight > 0.0 && e.weight.is_finite()) {
        return Err(GraphError::NonPositiveWeight { child: e.child, parent: e.parent, weight: e.weight });
    }
    Ok(())
}

/// A DAG whose vertex numbering is a linear extension ordering.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchicalGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl HierarchicalGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Dense adjacency matrix `a[i][j]` (zero-based), strictly lower triangular.
    pub fn adjacency(&self) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.n]; self.n];
        for e in &self.edges {
            a[e.child - 1][e.parent - 1] = e.weight;
        }
        a
    }

    /// Weighted in-degree `d_ii` of every vertex (zero-based index).
    pub fn in_degrees(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for e in &self.edges {
            d[e.child - 1] += e.weight;
        }
        d
    }

    /// Mixed graph with no reverse edges.
    pub fn into_mixed(self) -> MixedGraph {
        MixedGraph { base: self, reverse: Vec::new() }
    }
}

/// Validates `edges` as a DAG in linear extension ordering on `n` vertices.
///
/// Edges with `child <= parent` are rejected; no topological re-sort is
/// attempted.
pub fn build_dag<E>(n: usize, edges: impl IntoIterator<Item = E>) -> Result<HierarchicalGraph, GraphError>
where
    E: Into<Edge>,
{
    if n <= 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for e in edges {
        let e: Edge = e.into();
        check_edge(&e, n)?;
        if e.child <= e.parent {
            return Err(GraphError::EdgeOrderViolation { child: e.child, parent: e.parent });
        }
        if !seen.insert((e.child, e.parent)) {
            return Err(GraphError::DuplicateEdge { child: e.child, parent: e.parent });
        }
        out.push(e);
    }
    Ok(HierarchicalGraph { n, edges: out })
}

/// A DAG together with its reverse edges.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedGraph {
    base: HierarchicalGraph,
    reverse: Vec<Edge>,
}

/// Attaches reverse edges (each with `child < parent`) to a DAG.
pub fn add_reverse_edges<E>(g: HierarchicalGraph, redges: impl IntoIterator<Item = E>) -> Result<MixedGraph, GraphError>
where
    E: Into<Edge>,
{
    let n = g.n;
    let mut seen = HashSet::new();
    let mut reverse = Vec::new();
    for e in redges {
        let e: Edge = e.into();
        check_edge(&e, n)?;
        if e.child >= e.parent {
            return Err(GraphError::ReverseOrderViolation { child: e.child, parent: e.parent });
        }
        if !seen.insert((e.child, e.parent)) {
            return Err(GraphError::DuplicateReverseEdge { child: e.child, parent: e.parent });
        }
        reverse.push(e);
    }
    Ok(MixedGraph { base: g, reverse })
}

impl MixedGraph {
    pub fn n(&self) -> usize {
        self.base.n
    }

    pub fn base(&self) -> &HierarchicalGraph {
        &self.base
    }

    pub fn dag_edges(&self) -> &[Edge] {
        &self.base.edges
    }

    pub fn reverse_edges(&self) -> &[Edge] {
        &self.reverse
    }

    /// All edges of the mixed graph: DAG edges first, then reverse edges.
    pub fn all_edges(&self) -> impl Iterator<Item = &Edge> {
        self.base.edges.iter().chain(self.reverse.iter())
    }

    /// In-neighbor lists `(parent, weight)` per vertex, zero-based, over the
    /// mixed edge set.
    pub fn in_neighbors(&self) -> Vec<Vec<(usize, f64)>> {
        let mut nbrs = vec![Vec::new(); self.n()];
        for e in self.all_edges() {
            nbrs[e.child - 1].push((e.parent - 1, e.weight));
        }
        nbrs
    }

    /// Same graph with every edge weight multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Result<MixedGraph, GraphError> {
        let scale = |e: &Edge| Edge::new(e.child, e.parent, e.weight * c);
        let base = build_dag(self.n(), self.base.edges.iter().map(scale))?;
        add_reverse_edges(base, self.reverse.iter().map(scale))
    }

    pub fn assumption_params(&self) -> AssumptionParams {
        assumption_params(self)
    }

    pub fn has_spanning_tree(&self) -> bool {
        has_spanning_tree(self)
    }
}

/// The tightest neighbor-count and weight bounds a concrete mixed graph
/// satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AssumptionParams {
    /// Max number of superior (lower-numbered) in-neighbors of any vertex.
    pub zeta: usize,
    /// Max number of inferior (higher-numbered) in-neighbors of any vertex.
    pub xi: usize,
    /// Max DAG edge weight.
    pub a_bar: f64,
    /// Max reverse edge weight.
    pub a_bar_r: f64,
    /// Max weighted DAG in-degree.
    pub d_max: f64,
}

/// Superior neighbors are counted over every mixed-graph edge `(i, j)` with
/// `i > j` and inferior neighbors over every edge with `i < j`.
pub fn assumption_params(m: &MixedGraph) -> AssumptionParams {
    let n = m.n();
    let mut superior = vec![0usize; n];
    let mut inferior = vec![0usize; n];
    let mut a_bar: f64 = 0.0;
    let mut a_bar_r: f64 = 0.0;
    for e in m.all_edges() {
        if e.child > e.parent {
            superior[e.child - 1] += 1;
        } else {
            inferior[e.child - 1] += 1;
        }
    }
    for e in m.dag_edges() {
        a_bar = a_bar.max(e.weight);
    }
    for e in m.reverse_edges() {
        a_bar_r = a_bar_r.max(e.weight);
    }
    let d_max = m.base.in_degrees().into_iter().fold(0.0, f64::max);
    AssumptionParams {
        zeta: superior.into_iter().max().unwrap_or(0),
        xi: inferior.into_iter().max().unwrap_or(0),
        a_bar,
        a_bar_r,
        d_max,
    }
}

/// True iff some root reaches every vertex along the direction of
/// information flow (parent to child).
pub fn has_spanning_tree(m: &MixedGraph) -> bool {
    let n = m.n();
    let mut out = vec![Vec::new(); n];
    let mut in_deg = vec![0usize; n];
    for e in m.all_edges() {
        out[e.parent - 1].push(e.child - 1);
        in_deg[e.child - 1] += 1;
    }
    let sources: Vec<usize> = (0..n).filter(|&v| in_deg[v] == 0).collect();
    // A source can only be reached from itself, so it must be the root.
    let candidates: Vec<usize> = match sources.len() {
        0 => (0..n).collect(),
        1 => sources,
        _ => return false,
    };
    candidates.into_iter().any(|root| reaches_all(&out, root))
}

fn reaches_all(out: &[Vec<usize>], root: usize) -> bool {
    let mut seen = vec![false; out.len()];
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for &w in &out[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == out.len()
}
