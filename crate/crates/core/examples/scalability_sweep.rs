//! Fix one gain pair and grow the network: where does each protocol break?
//!
//! ```text
//! cargo run --example scalability_sweep
//! ```

use hiercon::dynamics::SimulationConfig;
use hiercon::spectral::{GainPair, Protocol};
use hiercon::sweep::{find_breaking_size, run_sweep, write_sweep_csv, FamilyKind, FamilySpec, SizeRange};

fn main() -> hiercon::Result<()> {
    let ring = FamilySpec::path_ring(SizeRange::new(3, 200, 1)?);
    for (a, b) in [(1.0, 1.0), (1.0, 2.0), (1.0, 4.0)] {
        let g = GainPair::new(a, b)?;
        let rel = find_breaking_size(&ring, g, Protocol::Relative, 200)?.size;
        let abs = find_breaking_size(&ring, g, Protocol::Absolute, 200)?.size;
        println!("path ring, beta^2/alpha = {:>4}: relative breaks at {rel:?}, absolute at {abs:?}", g.ratio());
    }

    // A random capped family, simulated at every size.
    let spec = FamilySpec {
        kind: FamilyKind::RandomMixed { zeta_cap: 2, xi_cap: 2, dag_density: 0.4, weight_bounds: (0.3, 2.0) },
        sizes: SizeRange::new(4, 12, 2)?,
        seed: 1,
    };
    let cfg = SimulationConfig { dt: 1e-2, t_max: 2000.0, ..Default::default() };
    let result = run_sweep(&spec, GainPair::new(1.0, 1.0)?, true, &cfg)?;
    let mut out = std::io::stdout().lock();
    write_sweep_csv(&result, &mut out)?;
    Ok(())
}
