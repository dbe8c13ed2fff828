use std::io::Write;

use super::SweepResult;
use crate::dynamics::{Consistency, SimVerdict};

/// Column order of [`write_sweep_csv`].
pub const SWEEP_CSV_COLUMNS: [&str; 14] = [
    "n",
    "s",
    "abs_criterion",
    "rel_criterion",
    "gershgorin_bound",
    "has_spanning_tree",
    "abs_verdict",
    "abs_margin",
    "rel_verdict",
    "rel_margin",
    "sim_abs",
    "sim_rel",
    "abs_consistency",
    "rel_consistency",
];

fn sim_label(v: SimVerdict) -> &'static str {
    match v {
        SimVerdict::Converged(_) => "Converged",
        SimVerdict::Diverged(_) => "Diverged",
        SimVerdict::Undecided => "Undecided",
    }
}

fn consistency_label(c: Consistency) -> &'static str {
    match c {
        Consistency::Agree => "Agree",
        Consistency::Disagree => "Disagree",
        Consistency::Inconclusive => "Inconclusive",
    }
}

/// One row per size. Simulation columns are empty when the sweep did not
/// simulate; `s` is empty without reverse edges.
pub fn write_sweep_csv<W: Write>(result: &SweepResult, out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(SWEEP_CSV_COLUMNS)?;
    for r in &result.records {
        let sim = r.simulation.as_ref();
        w.write_record([
            r.n.to_string(),
            r.s.map(|s| s.to_string()).unwrap_or_default(),
            r.abs_criterion.to_string(),
            r.rel_criterion.to_string(),
            r.gershgorin_bound.to_string(),
            r.has_spanning_tree.to_string(),
            format!("{:?}", r.absolute.verdict),
            r.absolute.margin.to_string(),
            format!("{:?}", r.relative.verdict),
            r.relative.margin.to_string(),
            sim.map(|s| sim_label(s.absolute).to_string()).unwrap_or_default(),
            sim.map(|s| sim_label(s.relative).to_string()).unwrap_or_default(),
            sim.map(|s| consistency_label(s.absolute_consistency).to_string()).unwrap_or_default(),
            sim.map(|s| consistency_label(s.relative_consistency).to_string()).unwrap_or_default(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
