//! Choose one gain pair that works for every graph satisfying a set of
//! neighbor-count and weight caps, then check it on random members.
//!
//! ```text
//! cargo run --example gershgorin_gain_rule
//! ```

use hiercon::graph::{gen_random_capped, laplacian};
use hiercon::spectral::{
    analyze, consensus_verdict, disc_union_distance, gershgorin_discs, GainPair, Protocol, Verdict, DEFAULT_MARGIN_TOL,
};

fn main() -> hiercon::Result<()> {
    let (zeta, xi, w_max) = (3, 2, 2.0);
    let bound = 2.0 * (zeta as f64 * w_max + xi as f64 * w_max);
    let gains = GainPair::new(1.0, (bound + 1.0).sqrt())?;
    println!("caps zeta = {zeta}, xi = {xi}, weights <= {w_max}: bound {bound}, beta^2/alpha = {}", gains.ratio());

    let mut worst: f64 = 0.0;
    for seed in 0..200 {
        let n = 5 + (seed as usize % 56);
        let m = gen_random_capped(n, zeta, xi, 0.5, (0.1, w_max), seed)?;
        let r = analyze(&m)?;
        let discs = gershgorin_discs(&laplacian(&m).total);
        assert!(r.spectrum.eigenvalues.iter().all(|z| disc_union_distance(*z, &discs) < 1e-8));
        assert_eq!(consensus_verdict(&r, gains, Protocol::Absolute, DEFAULT_MARGIN_TOL).verdict, Verdict::Consensus);
        worst = worst.max(r.abs_criterion);
    }
    println!("200 graphs with n in 5..60: largest criterion {worst:.4}, all Consensus");
    Ok(())
}
