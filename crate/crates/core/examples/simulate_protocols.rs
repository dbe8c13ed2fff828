//! Simulate both protocols on a ten-agent ring and write the traces.
//!
//! ```text
//! cargo run --example simulate_protocols -- /tmp/ring10
//! ```

use std::fs::File;
use std::path::PathBuf;

use hiercon::dynamics::{simulate, write_trace_csv, SimulationConfig};
use hiercon::graph::gen_path_ring;
use hiercon::spectral::{analyze, consensus_verdict, GainPair, Protocol, DEFAULT_MARGIN_TOL};
use hiercon::sweep::initial_conditions;

fn main() -> hiercon::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "ring10".into()));
    std::fs::create_dir_all(&out)?;

    let m = gen_path_ring(10, 1.0, 1.0)?;
    let gains = GainPair::new(1.0, 2.0)?;
    let report = analyze(&m)?;
    let (x0, v0) = initial_conditions(10, 7);
    let cfg = SimulationConfig::default();

    for p in Protocol::BOTH {
        let spectral = consensus_verdict(&report, gains, p, DEFAULT_MARGIN_TOL);
        let trace = simulate(&m, gains, p, &x0, &v0, &cfg)?;
        let path = out.join(format!("{p}.csv"));
        write_trace_csv(&trace, File::create(&path)?)?;
        println!(
            "{p:<8} spectral {:?} (margin {:+.4}), simulated {:?}; {} samples -> {}",
            spectral.verdict,
            spectral.margin,
            trace.verdict,
            trace.times.len(),
            path.display()
        );
    }
    Ok(())
}
