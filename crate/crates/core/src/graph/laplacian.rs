use ndarray::Array2;
use serde::Serialize;

use super::MixedGraph;

/// Block boundaries of the reverse-edge region. One-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReverseSpan {
    /// Smallest child index among reverse edges.
    pub theta: usize,
    /// Largest parent index among reverse edges.
    pub phi: usize,
    /// `phi - theta`.
    pub s: usize,
}

/// `total = dag + perturbation`, where `dag` is the lower-triangular DAG
/// Laplacian and `perturbation` carries the reverse edges.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianDecomposition {
    pub total: Array2<f64>,
    pub dag: Array2<f64>,
    pub perturbation: Array2<f64>,
    /// `None` when the graph has no reverse edges.
    pub span: Option<ReverseSpan>,
}

impl LaplacianDecomposition {
    pub fn n(&self) -> usize {
        self.total.nrows()
    }

    /// `d_ii + p_ii`: center (and radius) of row `i`'s Gershgorin disc.
    pub fn diagonal(&self) -> Vec<f64> {
        self.total.diag().to_vec()
    }
}

pub fn laplacian(m: &MixedGraph) -> LaplacianDecomposition {
    let n = m.n();
    let mut dag = Array2::zeros((n, n));
    let mut perturbation = Array2::zeros((n, n));
    for e in m.dag_edges() {
        let (i, j) = (e.child - 1, e.parent - 1);
        dag[[i, j]] -= e.weight;
        dag[[i, i]] += e.weight;
    }
    for e in m.reverse_edges() {
        let (i, j) = (e.child - 1, e.parent - 1);
        perturbation[[i, j]] -= e.weight;
        perturbation[[i, i]] += e.weight;
    }
    let total = &dag + &perturbation;
    let span = match (m.reverse_edges().iter().map(|e| e.child).min(), m.reverse_edges().iter().map(|e| e.parent).max())
    {
        (Some(theta), Some(phi)) => Some(ReverseSpan { theta, phi, s: phi - theta }),
        _ => None,
    };
    LaplacianDecomposition { total, dag, perturbation, span }
}
