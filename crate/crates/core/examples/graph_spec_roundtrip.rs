//! Save a graph as a JSON spec, load it back, and analyze the copy.
//!
//! ```text
//! cargo run --example graph_spec_roundtrip
//! ```

use hiercon::graph::{gen_random_mixed, GraphSpec};
use hiercon::spectral::analyze;

fn main() -> hiercon::Result<()> {
    let m = gen_random_mixed(5, 0.4, 2, (0.5, 1.5), 11)?;
    let path = std::env::temp_dir().join("hiercon-example.json");
    GraphSpec::save(&m, &path)?;
    println!("{}", std::fs::read_to_string(&path)?);

    let back = GraphSpec::load(&path)?;
    assert_eq!(back, m);
    let r = analyze(&back)?;
    println!(
        "abs criterion {:.6}, rel criterion {:.6}, Gershgorin bound {:.6}",
        r.abs_criterion, r.rel_criterion, r.gershgorin_bound
    );

    // Unknown fields and malformed edges are errors, not silently ignored.
    let bad = r#"{"n": 3, "dag_edges": [[2, 1, 1.0]], "reverse_edges": [], "extra": 1}"#;
    println!("rejected: {}", GraphSpec::from_json(bad).unwrap_err());
    Ok(())
}
