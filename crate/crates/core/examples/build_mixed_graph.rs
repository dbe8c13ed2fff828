//! Build a hierarchy by hand, add reverse edges, and inspect the Laplacian
//! split and the neighbor-count parameters.
//!
//! ```text
//! cargo run --example build_mixed_graph
//! ```

use hiercon::graph::{add_reverse_edges, build_dag, laplacian};

fn main() -> hiercon::Result<()> {
    // 1 leads 2 and 3; 4 follows both. Edges are (child, parent, weight).
    let dag = build_dag(4, [(2, 1, 1.0), (3, 1, 0.5), (4, 2, 1.0), (4, 3, 2.0)])?;
    // Feedback from the bottom of the hierarchy back to the top.
    let m = add_reverse_edges(dag, [(1, 4, 0.3), (2, 3, 0.7)])?;

    let l = laplacian(&m);
    println!("L =\n{}", l.total);
    println!("DAG part =\n{}", l.dag);
    println!("perturbation =\n{}", l.perturbation);
    if let Some(span) = l.span {
        println!("reverse edges touch vertices {}..={} (span {})", span.theta, span.phi, span.s);
    }

    let p = m.assumption_params();
    println!("zeta = {}, xi = {}, max DAG weight = {}, max reverse weight = {}", p.zeta, p.xi, p.a_bar, p.a_bar_r);
    println!("spanning tree: {}", m.has_spanning_tree());

    // Invalid input is rejected with a typed error.
    let err = build_dag(3, [(1, 2, 1.0)]).unwrap_err();
    println!("rejected: {err}");
    Ok(())
}
