//! Closed-loop double-integrator agents `x' = v`, `v' = u` under the
//! absolute- and relative-velocity protocols, integrated with fixed-step RK4.
//!
//! The protocols run over the mixed edge set (DAG edges plus reverse edges),
//! so the closed loop is governed by the mixed-graph Laplacian.

mod export;
mod nullspace;

pub use export::{write_trace_csv, VerdictSidecar};
pub use nullspace::left_zero_eigenvector;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::MixedGraph;
use crate::spectral::{GainPair, Protocol, Verdict};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error("expected {expected} agent states, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("initial state is not finite")]
    NonFiniteInitialState,
    #[error("invalid simulation config: {0}")]
    InvalidConfig(String),
    #[error("the zero Laplacian eigenvalue is not simple (no spanning tree)")]
    NoSpanningTree,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AgentState {
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimulationConfig {
    pub dt: f64,
    pub t_max: f64,
    pub conv_tol: f64,
    pub div_tol: f64,
    /// Store every `sample_stride`-th step.
    pub sample_stride: usize,
    /// Any state magnitude above this ends the run as an overflow.
    pub overflow_guard: f64,
}

impl Default for SimulationConfig {
    fn default() -> Self {
        Self { dt: 1e-3, t_max: 1000.0, conv_tol: 1e-6, div_tol: 1e6, sample_stride: 100, overflow_guard: 1e12 }
    }
}

impl SimulationConfig {
    pub fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |msg: &str| Err(DynamicsError::InvalidConfig(msg.to_string()));
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be positive");
        }
        if !(self.t_max >= self.dt && self.t_max.is_finite()) {
            return bad("t_max must be at least dt");
        }
        if !(self.conv_tol > 0.0 && self.conv_tol < self.div_tol) {
            return bad("need 0 < conv_tol < div_tol");
        }
        if self.overflow_guard.is_nan() || self.overflow_guard <= self.div_tol {
            return bad("overflow_guard must exceed div_tol");
        }
        if self.sample_stride == 0 {
            return bad("sample_stride must be at least 1");
        }
        Ok(())
    }

    /// Number of RK4 steps needed to reach `t_max`.
    pub fn steps(&self) -> usize {
        (self.t_max / self.dt - 1e-9).ceil() as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "t")]
pub enum SimVerdict {
    Converged(f64),
    Diverged(f64),
    Undecided,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationTrace {
    pub times: Vec<f64>,
    /// `positions[k][i]`: agent `i` at sample `k`.
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
    pub pos_disagreement: Vec<f64>,
    pub vel_disagreement: Vec<f64>,
    pub verdict: SimVerdict,
    /// Set when the run was stopped by the overflow guard.
    pub overflow: bool,
}

impl SimulationTrace {
    pub fn position_series(&self, agent: usize) -> Vec<f64> {
        self.positions.iter().map(|row| row[agent]).collect()
    }

    pub fn velocity_series(&self, agent: usize) -> Vec<f64> {
        self.velocities.iter().map(|row| row[agent]).collect()
    }

    pub fn final_positions(&self) -> &[f64] {
        self.positions.last().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn final_velocities(&self) -> &[f64] {
        self.velocities.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// The right-hand side of the closed loop, with in-neighbor lists cached.
#[derive(Debug, Clone)]
pub struct ClosedLoop {
    neighbors: Vec<Vec<(usize, f64)>>,
    gains: GainPair,
    protocol: Protocol,
}

impl ClosedLoop {
    pub fn new(m: &MixedGraph, gains: GainPair, protocol: Protocol) -> Self {
        Self { neighbors: m.in_neighbors(), gains, protocol }
    }

    pub fn n(&self) -> usize {
        self.neighbors.len()
    }

    /// Control inputs `u` for positions `x` and velocities `v`.
    pub fn accel(&self, x: &[f64], v: &[f64], u: &mut [f64]) {
        let (alpha, beta) = (self.gains.alpha(), self.gains.beta());
        for (i, nbrs) in self.neighbors.iter().enumerate() {
            let mut pos = 0.0;
            let mut vel = 0.0;
            for &(j, w) in nbrs {
                pos += w * (x[j] - x[i]);
                if self.protocol == Protocol::Relative {
                    vel += w * (v[j] - v[i]);
                }
            }
            u[i] = match self.protocol {
                Protocol::Absolute => alpha * pos - beta * v[i],
                Protocol::Relative => alpha * pos + beta * vel,
            };
        }
    }

    /// One classical RK4 step of `(x, v)` in place.
    pub fn rk4_step(&self, x: &mut [f64], v: &mut [f64], dt: f64, s: &mut Scratch) {
        let n = self.n();
        let Scratch { xt, vt, kx, kv } = s;
        // Stage 1
        kx[0].copy_from_slice(v);
        self.accel(x, v, &mut kv[0]);
        for stage in 1..4 {
            let h = if stage == 3 { dt } else { 0.5 * dt };
            for i in 0..n {
                xt[i] = x[i] + h * kx[stage - 1][i];
                vt[i] = v[i] + h * kv[stage - 1][i];
            }
            kx[stage].copy_from_slice(vt);
            let (_, rest) = kv.split_at_mut(stage);
            self.accel(xt, vt, &mut rest[0]);
        }
        let c = dt / 6.0;
        for i in 0..n {
            x[i] += c * (kx[0][i] + 2.0 * kx[1][i] + 2.0 * kx[2][i] + kx[3][i]);
            v[i] += c * (kv[0][i] + 2.0 * kv[1][i] + 2.0 * kv[2][i] + kv[3][i]);
        }
    }
}

/// RK4 workspace for a single run.
#[derive(Debug, Clone)]
pub struct Scratch {
    xt: Vec<f64>,
    vt: Vec<f64>,
    kx: [Vec<f64>; 4],
    kv: [Vec<f64>; 4],
}

impl Scratch {
    pub fn new(n: usize) -> Self {
        let z = || vec![0.0; n];
        Self { xt: z(), vt: z(), kx: [z(), z(), z(), z()], kv: [z(), z(), z(), z()] }
    }
}

pub fn control_input(
    m: &MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    states: &[AgentState],
) -> Result<Vec<f64>, DynamicsError> {
    if states.len() != m.n() {
        return Err(DynamicsError::DimensionMismatch { expected: m.n(), got: states.len() });
    }
    let x: Vec<f64> = states.iter().map(|s| s.x).collect();
    let v: Vec<f64> = states.iter().map(|s| s.v).collect();
    let mut u = vec![0.0; m.n()];
    ClosedLoop::new(m, gains, protocol).accel(&x, &v, &mut u);
    Ok(u)
}

fn check_initial(n: usize, x0: &[f64], v0: &[f64]) -> Result<(), DynamicsError> {
    for len in [x0.len(), v0.len()] {
        if len != n {
            return Err(DynamicsError::DimensionMismatch { expected: n, got: len });
        }
    }
    if x0.iter().chain(v0).any(|z| !z.is_finite()) {
        return Err(DynamicsError::NonFiniteInitialState);
    }
    Ok(())
}

/// Integrates `steps` RK4 steps of size `dt` without any stopping rule and
/// returns the final `(x, v)`.
pub fn integrate(
    m: &MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    x0: &[f64],
    v0: &[f64],
    dt: f64,
    steps: usize,
) -> Result<(Vec<f64>, Vec<f64>), DynamicsError> {
    check_initial(m.n(), x0, v0)?;
    let sys = ClosedLoop::new(m, gains, protocol);
    let mut scratch = Scratch::new(m.n());
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    for _ in 0..steps {
        sys.rk4_step(&mut x, &mut v, dt, &mut scratch);
    }
    Ok((x, v))
}

/// `max_i z_i - min_i z_i`, i.e. `max_{i,j} |z_i - z_j|`.
pub fn disagreement(z: &[f64]) -> f64 {
    let (lo, hi) = z.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &q| (lo.min(q), hi.max(q)));
    if z.iter().any(|q| q.is_nan()) {
        f64::NAN
    } else {
        hi - lo
    }
}

/// Simulates until the disagreement drops below `conv_tol` (Converged),
/// exceeds `div_tol` or the overflow guard (Diverged), or `t_max` is reached
/// (Undecided). The final step is always sampled.
pub fn simulate(
    m: &MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    x0: &[f64],
    v0: &[f64],
    cfg: &SimulationConfig,
) -> Result<SimulationTrace, DynamicsError> {
    cfg.validate()?;
    check_initial(m.n(), x0, v0)?;
    let sys = ClosedLoop::new(m, gains, protocol);
    let mut scratch = Scratch::new(m.n());
    let (mut x, mut v) = (x0.to_vec(), v0.to_vec());
    let mut trace = SimulationTrace {
        times: Vec::new(),
        positions: Vec::new(),
        velocities: Vec::new(),
        pos_disagreement: Vec::new(),
        vel_disagreement: Vec::new(),
        verdict: SimVerdict::Undecided,
        overflow: false,
    };
    let steps = cfg.steps();
    for k in 0..=steps {
        if k > 0 {
            sys.rk4_step(&mut x, &mut v, cfg.dt, &mut scratch);
        }
        let t = k as f64 * cfg.dt;
        let (dx, dv) = (disagreement(&x), disagreement(&v));
        let blown = x.iter().chain(&v).any(|z| !z.is_finite() || z.abs() > cfg.overflow_guard);
        let verdict = if blown {
            trace.overflow = true;
            Some(SimVerdict::Diverged(t))
        } else if dx > cfg.div_tol || dv > cfg.div_tol {
            Some(SimVerdict::Diverged(t))
        } else if dx < cfg.conv_tol && dv < cfg.conv_tol {
            Some(SimVerdict::Converged(t))
        } else {
            None
        };
        if k % cfg.sample_stride == 0 || k == steps || verdict.is_some() {
            trace.times.push(t);
            trace.positions.push(x.clone());
            trace.velocities.push(v.clone());
            trace.pos_disagreement.push(dx);
            trace.vel_disagreement.push(dv);
        }
        if let Some(verdict) = verdict {
            trace.verdict = verdict;
            break;
        }
    }
    Ok(trace)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Consistency {
    Agree,
    Disagree,
    Inconclusive,
}

pub fn classify_consistency(sim: SimVerdict, spectral: Verdict) -> Consistency {
    match (sim, spectral) {
        (SimVerdict::Undecided, _) | (_, Verdict::Boundary) => Consistency::Inconclusive,
        (SimVerdict::Converged(_), Verdict::Consensus) | (SimVerdict::Diverged(_), Verdict::NoConsensus) => {
            Consistency::Agree
        }
        _ => Consistency::Disagree,
    }
}
