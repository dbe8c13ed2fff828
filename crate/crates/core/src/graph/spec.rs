//! JSON graph spec files.
//!
//! ```json
//! { "n": 4, "dag_edges": [[2, 1, 1.0]], "reverse_edges": [[1, 3, 0.5]] }
//! ```
//!
//! Indices are one-based; unknown fields are rejected.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{add_reverse_edges, build_dag, Edge, MixedGraph};
use crate::Error;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphSpec {
    pub n: usize,
    pub dag_edges: Vec<(usize, usize, f64)>,
    pub reverse_edges: Vec<(usize, usize, f64)>,
}

impl GraphSpec {
    pub fn from_graph(m: &MixedGraph) -> Self {
        let tuple = |e: &Edge| (e.child, e.parent, e.weight);
        Self {
            n: m.n(),
            dag_edges: m.dag_edges().iter().map(tuple).collect(),
            reverse_edges: m.reverse_edges().iter().map(tuple).collect(),
        }
    }

    /// Applies the same validation as [`build_dag`] and [`add_reverse_edges`].
    pub fn to_graph(&self) -> Result<MixedGraph, Error> {
        let g = build_dag(self.n, self.dag_edges.iter().copied())?;
        Ok(add_reverse_edges(g, self.reverse_edges.iter().copied())?)
    }

    pub fn from_json(s: &str) -> Result<Self, Error> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph spec serializes")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<MixedGraph, Error> {
        let text = fs::read_to_string(path)?;
        Self::from_json(&text)?.to_graph()
    }

    pub fn save(m: &MixedGraph, path: impl AsRef<Path>) -> Result<(), Error> {
        let mut text = Self::from_graph(m).to_json();
        text.push('\n');
        fs::write(path, text)?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_random_mixed, GraphError};

    #[test]
    fn round_trip() {
        let m = gen_random_mixed(7, 0.4, 4, (0.1, 2.0), 9).unwrap();
        let back = GraphSpec::from_json(&GraphSpec::from_graph(&m).to_json()).unwrap().to_graph().unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn rejects_unknown_fields() {
        let text = r#"{"n": 3, "dag_edges": [], "reverse_edges": [], "extra": 1}"#;
        assert!(matches!(GraphSpec::from_json(text), Err(Error::Json(_))));
    }

    #[test]
    fn validates_like_the_builders() {
        let text = r#"{"n": 3, "dag_edges": [[1, 2, 1.0]], "reverse_edges": []}"#;
        let err = GraphSpec::from_json(text).unwrap().to_graph().unwrap_err();
        assert!(matches!(err, Error::Graph(GraphError::EdgeOrderViolation { child: 1, parent: 2 })));
    }
}
