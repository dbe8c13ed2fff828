//! Parametric graph families.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{add_reverse_edges, build_dag, Edge, GraphError, HierarchicalGraph, MixedGraph};

/// Directed path `1 -> 2 -> ... -> n` with uniform weight.
pub fn gen_path(n: usize, w: f64) -> Result<HierarchicalGraph, GraphError> {
    if n <= 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    build_dag(n, (1..n).map(|i| Edge::new(i + 1, i, w)))
}

/// Path on `n` vertices plus the reverse edge from `n` back to the root;
/// its Laplacian is that of a directed ring.
pub fn gen_path_ring(n: usize, w: f64, reverse_w: f64) -> Result<MixedGraph, GraphError> {
    add_reverse_edges(gen_path(n, w)?, [Edge::new(1, n, reverse_w)])
}

/// Star with hub `1` feeding every fringe vertex `2..=n` with weight `rho`.
pub fn gen_star(n: usize, rho: f64) -> Result<HierarchicalGraph, GraphError> {
    if n <= 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    build_dag(n, (2..=n).map(|i| Edge::new(i, 1, rho)))
}

fn check_bounds(bounds: (f64, f64)) -> Result<(), GraphError> {
    let (low, high) = bounds;
    if !(low > 0.0 && low <= high && high.is_finite()) {
        return Err(GraphError::InvalidParameter(format!(
            "weight bounds must satisfy 0 < low <= high < inf, got ({low}, {high})"
        )));
    }
    Ok(())
}

fn check_probability(name: &str, p: f64, allow_zero: bool) -> Result<(), GraphError> {
    let ok = if allow_zero { (0.0..=1.0).contains(&p) } else { p > 0.0 && p <= 1.0 };
    if !ok {
        return Err(GraphError::InvalidParameter(format!("{name} = {p} outside its valid range")));
    }
    Ok(())
}

fn weight(rng: &mut ChaCha8Rng, (low, high): (f64, f64)) -> f64 {
    if low == high {
        low
    } else {
        rng.gen_range(low..=high)
    }
}

/// All `(child, parent)` pairs with `child < parent`, in lexicographic order.
fn reverse_pairs(n: usize) -> Vec<(usize, usize)> {
    (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect()
}

/// Random mixed graph for property tests.
///
/// The DAG always contains the path edges `(i + 1, i)`, so the result has a
/// spanning tree rooted at vertex 1; every other forward pair is included
/// with probability `dag_density`. Exactly `rev_count` distinct reverse
/// pairs are drawn uniformly. Deterministic in `seed`.
pub fn gen_random_mixed(
    n: usize,
    dag_density: f64,
    rev_count: usize,
    weight_bounds: (f64, f64),
    seed: u64,
) -> Result<MixedGraph, GraphError> {
    if n <= 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    check_probability("dag_density", dag_density, false)?;
    check_bounds(weight_bounds)?;
    let pairs = reverse_pairs(n);
    if rev_count > pairs.len() {
        return Err(GraphError::InfeasibleReverseCount { requested: rev_count, available: pairs.len() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut dag = Vec::new();
    for child in 2..=n {
        for parent in 1..child {
            if parent + 1 == child || rng.gen_bool(dag_density) {
                dag.push(Edge::new(child, parent, weight(&mut rng, weight_bounds)));
            }
        }
    }
    let mut chosen: Vec<usize> = sample(&mut rng, pairs.len(), rev_count).into_vec();
    chosen.sort_unstable();
    let reverse: Vec<Edge> = chosen
        .into_iter()
        .map(|k| {
            let (i, j) = pairs[k];
            Edge::new(i, j, weight(&mut rng, weight_bounds))
        })
        .collect();
    add_reverse_edges(build_dag(n, dag)?, reverse)
}

/// Random mixed graph whose superior/inferior neighbor counts are capped at
/// `zeta_cap` and `xi_cap` for every vertex.
///
/// The spanning path is always present, so `zeta_cap` must be at least 1.
/// Up to `min(xi_cap * n, available pairs)` reverse candidates are drawn and
/// kept only while the receiving vertex is below its `xi_cap`.
pub fn gen_random_capped(
    n: usize,
    zeta_cap: usize,
    xi_cap: usize,
    dag_density: f64,
    weight_bounds: (f64, f64),
    seed: u64,
) -> Result<MixedGraph, GraphError> {
    if n <= 2 {
        return Err(GraphError::TooFewVertices(n));
    }
    if zeta_cap == 0 {
        return Err(GraphError::InvalidParameter("zeta_cap must be at least 1".into()));
    }
    check_probability("dag_density", dag_density, true)?;
    check_bounds(weight_bounds)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut dag = Vec::new();
    for child in 2..=n {
        dag.push(Edge::new(child, child - 1, weight(&mut rng, weight_bounds)));
        let mut superior = 1;
        // Extra parents in random order until the cap is hit.
        let extra = child - 2;
        if extra > 0 {
            for k in sample(&mut rng, extra, extra).into_iter() {
                if superior >= zeta_cap {
                    break;
                }
                if rng.gen_bool(dag_density) {
                    dag.push(Edge::new(child, k + 1, weight(&mut rng, weight_bounds)));
                    superior += 1;
                }
            }
        }
    }

    let pairs = reverse_pairs(n);
    let draws = (xi_cap * n).min(pairs.len());
    let mut inferior = vec![0usize; n];
    let mut reverse = Vec::new();
    for k in sample(&mut rng, pairs.len(), draws).into_iter() {
        let (i, j) = pairs[k];
        let w = weight(&mut rng, weight_bounds);
        if inferior[i - 1] < xi_cap {
            inferior[i - 1] += 1;
            reverse.push(Edge::new(i, j, w));
        }
    }
    add_reverse_edges(build_dag(n, dag)?, reverse)
}

/// Star of hub weight `rho` with random reverse edges: each pair `(i, j)`,
/// `i < j`, is included with probability `reverse_density`.
pub fn gen_star_mixed(
    n: usize,
    rho: f64,
    reverse_density: f64,
    weight_bounds: (f64, f64),
    seed: u64,
) -> Result<MixedGraph, GraphError> {
    check_probability("reverse_density", reverse_density, true)?;
    check_bounds(weight_bounds)?;
    let star = gen_star(n, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut reverse = Vec::new();
    for (i, j) in reverse_pairs(n) {
        if rng.gen_bool(reverse_density) {
            reverse.push(Edge::new(i, j, weight(&mut rng, weight_bounds)));
        }
    }
    add_reverse_edges(star, reverse)
}
