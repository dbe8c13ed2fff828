use std::io::Write;

use serde::Serialize;

use super::{SimVerdict, SimulationTrace};

/// Writes `t, x_1..x_n, v_1..v_n, pos_disagreement, vel_disagreement`.
pub fn write_trace_csv<W: Write>(trace: &SimulationTrace, out: W) -> Result<(), csv::Error> {
    let n = trace.positions.first().map_or(0, Vec::len);
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=n).map(|i| format!("v_{i}")));
    header.push("pos_disagreement".into());
    header.push("vel_disagreement".into());
    w.write_record(&header)?;
    for k in 0..trace.times.len() {
        let mut row = Vec::with_capacity(2 * n + 3);
        row.push(trace.times[k].to_string());
        row.extend(trace.positions[k].iter().map(f64::to_string));
        row.extend(trace.velocities[k].iter().map(f64::to_string));
        row.push(trace.pos_disagreement[k].to_string());
        row.push(trace.vel_disagreement[k].to_string());
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// JSON companion of a trace CSV.
#[derive(Debug, Clone, Serialize)]
pub struct VerdictSidecar {
    #[serde(flatten)]
    pub verdict: SimVerdict,
    pub overflow: bool,
    pub t_end: f64,
    pub final_pos_disagreement: f64,
    pub final_vel_disagreement: f64,
    pub samples: usize,
}

impl From<&SimulationTrace> for VerdictSidecar {
    fn from(trace: &SimulationTrace) -> Self {
        Self {
            verdict: trace.verdict,
            overflow: trace.overflow,
            t_end: trace.times.last().copied().unwrap_or(0.0),
            final_pos_disagreement: trace.pos_disagreement.last().copied().unwrap_or(0.0),
            final_vel_disagreement: trace.vel_disagreement.last().copied().unwrap_or(0.0),
            samples: trace.times.len(),
        }
    }
}
