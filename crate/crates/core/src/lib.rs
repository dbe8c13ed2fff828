//! Second-order consensus on hierarchical multi-agent networks.
//!
//! A hierarchical network is a DAG whose vertices are numbered in a linear
//! extension ordering (leaders have lower numbers). Feedback from lower to
//! higher layers is modelled by *reverse edges*; the DAG plus its reverse
//! edges is a *mixed graph*. This crate
//!
//! * builds and validates such graphs and generates path, star and random
//!   families ([`graph`]),
//! * computes Laplacian spectra and evaluates the consensus criteria of the
//!   absolute- and relative-velocity protocols, the Gershgorin gain bound and
//!   the closed-form ring/star spectra ([`spectral`]),
//! * simulates the closed-loop double-integrator agents with RK4 to
//!   cross-check the spectral verdicts ([`dynamics`]),
//! * sweeps growing graph families with fixed gains to locate the network
//!   size at which consensus breaks ([`sweep`]).
//!
//! ```
//! use hiercon::graph::gen_path_ring;
//! use hiercon::spectral::{analyze, consensus_verdict, GainPair, Protocol, Verdict};
//!
//! let ring = gen_path_ring(6, 1.0, 1.0).unwrap();
//! let report = analyze(&ring).unwrap();
//! let gains = GainPair::new(1.0, 1.0).unwrap();
//! let rel = consensus_verdict(&report, gains, Protocol::Relative, 1e-9);
//! assert_eq!(rel.verdict, Verdict::NoConsensus);
//! ```

pub mod cli;
pub mod dynamics;
pub mod graph;
pub mod spectral;
pub mod sweep;

use thiserror::Error;

pub use dynamics::DynamicsError;
pub use graph::GraphError;
pub use spectral::SpectralError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Spectral(#[from] SpectralError),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
    #[error("at n = {n}: {source}")]
    AtSize {
        n: usize,
        #[source]
        source: Box<Error>,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
