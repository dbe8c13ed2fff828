//! Stars stay real-spectrum under any reverse edges, so every positive
//! gain pair reaches consensus under both protocols.
//!
//! ```text
//! cargo run --example star_family
//! ```

use hiercon::graph::gen_star_mixed;
use hiercon::spectral::{
    analyze, consensus_verdict, star_spectrum_closed_form, GainPair, Protocol, DEFAULT_MARGIN_TOL,
};

fn main() -> hiercon::Result<()> {
    let m = gen_star_mixed(6, 1.5, 0.6, (0.1, 2.0), 3)?;
    println!("{} reverse edges", m.reverse_edges().len());
    let r = analyze(&m)?;
    let exact = star_spectrum_closed_form(&m)?;
    println!("numeric   {:?}", r.spectrum.eigenvalues.iter().map(|z| z.re).collect::<Vec<_>>());
    println!("formula   {:?}", exact.eigenvalues.iter().map(|z| z.re).collect::<Vec<_>>());
    println!("max |Im| = {:.1e}", r.spectrum.max_abs_imag());

    for (a, b) in [(1.0, 0.01), (10.0, 0.1), (0.1, 5.0)] {
        let g = GainPair::new(a, b)?;
        for p in Protocol::BOTH {
            let v = consensus_verdict(&r, g, p, DEFAULT_MARGIN_TOL);
            println!("alpha = {a:<4} beta = {b:<4} {p:<8} {:?}", v.verdict);
        }
    }
    Ok(())
}
