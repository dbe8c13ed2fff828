//! Laplacian spectra and the second-order consensus criteria.
//!
//! With gains `(alpha, beta)` shared by every agent, the double-integrator
//! network reaches consensus iff the mixed graph has a spanning tree and
//!
//! * absolute-velocity protocol: `beta^2 / alpha > max Im^2(l) / Re(l)`,
//! * relative-velocity protocol: `beta^2 / alpha > max Im^2(l) / (Re(l) |l|^2)`,
//!
//! both maxima taken over the nonzero Laplacian eigenvalues `l`.

mod eigen;

pub use eigen::eigenvalues;

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{assumption_params, has_spanning_tree, laplacian, AssumptionParams, MixedGraph};

pub const DEFAULT_ZERO_TOL: f64 = 1e-8;
pub const DEFAULT_MARGIN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpectralError {
    #[error("eigensolver did not converge after {iterations} QR iterations")]
    ConvergenceFailure { iterations: usize },
    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("no eigenvalue exceeds the zero tolerance")]
    AllEigenvaluesZero,
    #[error("the DAG part is not a star with uniform hub weight")]
    NotAStar,
    #[error("control gains must be positive and finite, got alpha = {alpha}, beta = {beta}")]
    InvalidGain { alpha: f64, beta: f64 },
}

/// Eigenvalues with algebraic multiplicity, in solver order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl Serialize for Spectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.eigenvalues.len()))?;
        for z in &self.eigenvalues {
            seq.serialize_element(&[z.re, z.im])?;
        }
        seq.end()
    }
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, c: f64) -> Spectrum {
        Spectrum { eigenvalues: self.eigenvalues.iter().map(|z| z * c).collect() }
    }

    /// Largest distance in a greedy nearest-neighbour pairing of the two
    /// multisets, or `None` if their sizes differ.
    pub fn multiset_distance(&self, other: &Spectrum) -> Option<f64> {
        if self.len() != other.len() {
            return None;
        }
        let mut used = vec![false; other.len()];
        let mut worst: f64 = 0.0;
        for z in &self.eigenvalues {
            let (k, d) = other
                .eigenvalues
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .map(|(k, w)| (k, (z - w).norm()))
                .min_by(|a, b| a.1.total_cmp(&b.1))?;
            used[k] = true;
            worst = worst.max(d);
        }
        Some(worst)
    }

    /// Largest `|l - conj(l')|` when every eigenvalue is paired with the
    /// conjugate of another.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let conj = Spectrum { eigenvalues: self.eigenvalues.iter().map(|z| z.conj()).collect() };
        self.multiset_distance(&conj).unwrap_or(f64::INFINITY)
    }

    fn nonzero(&self, zero_tol: f64) -> impl Iterator<Item = &Complex64> {
        self.eigenvalues.iter().filter(move |z| z.norm() > zero_tol)
    }
}

/// `max Im^2 / Re` over eigenvalues with `|l| > zero_tol`.
pub fn abs_criterion(spec: &Spectrum, zero_tol: f64) -> Result<f64, SpectralError> {
    criterion(spec, zero_tol, |z| z.im * z.im / z.re)
}

/// `max Im^2 / (Re |l|^2)` over eigenvalues with `|l| > zero_tol`.
pub fn rel_criterion(spec: &Spectrum, zero_tol: f64) -> Result<f64, SpectralError> {
    criterion(spec, zero_tol, |z| z.im * z.im / (z.re * z.norm_sqr()))
}

fn criterion(spec: &Spectrum, zero_tol: f64, f: impl Fn(&Complex64) -> f64) -> Result<f64, SpectralError> {
    let mut any = false;
    let mut best: f64 = 0.0;
    for z in spec.nonzero(zero_tol) {
        any = true;
        if z.im != 0.0 {
            best = best.max(f(z));
        }
    }
    if any {
        Ok(best)
    } else {
        Err(SpectralError::AllEigenvaluesZero)
    }
}

/// `2 (zeta a_bar + xi a_bar_r)`: every Laplacian eigenvalue lies in the disc
/// centred at `mu = zeta a_bar + xi a_bar_r` with radius `mu`, and the
/// absolute-protocol criterion over that disc is at most `2 mu`.
pub fn gershgorin_bound(p: &AssumptionParams) -> f64 {
    2.0 * (p.zeta as f64 * p.a_bar + p.xi as f64 * p.a_bar_r)
}

/// Row Gershgorin disc of a Laplacian row: centre and radius are both the
/// diagonal entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Disc {
    pub center: f64,
    pub radius: f64,
}

pub fn gershgorin_discs(l: &ndarray::Array2<f64>) -> Vec<Disc> {
    l.rows()
        .into_iter()
        .enumerate()
        .map(|(i, row)| Disc {
            center: row[i],
            radius: row.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.abs()).sum(),
        })
        .collect()
}

/// Distance from `z` to the union of discs (zero when inside).
pub fn disc_union_distance(z: Complex64, discs: &[Disc]) -> f64 {
    discs.iter().map(|d| ((z - d.center).norm() - d.radius).max(0.0)).fold(f64::INFINITY, f64::min)
}

/// Spectrum of the unit-weight directed ring on `s + 1` vertices:
/// `{0} ∪ {1 - cos(2πi/(s+1)) + j sin(2πi/(s+1)) : i = 1..s}`.
pub fn ring_spectrum_closed_form(s: usize) -> Spectrum {
    let m = (s + 1) as f64;
    let mut eigenvalues = vec![Complex64::new(0.0, 0.0)];
    eigenvalues.extend((1..=s).map(|i| {
        let angle = 2.0 * PI * i as f64 / m;
        Complex64::new(1.0 - angle.cos(), angle.sin())
    }));
    Spectrum { eigenvalues }
}

/// Relative-protocol criterion of the path-with-full-span-reverse-edge
/// family: `½ cot²(π / (s + 1))`.
pub fn path_family_rel_criterion(s: usize) -> f64 {
    let cot = 1.0 / (PI / (s + 1) as f64).tan();
    0.5 * cot * cot
}

/// Spectrum of a star (hub 1, uniform hub weight `rho`) with arbitrary
/// reverse edges: `{0} ∪ {rho + p_ii : i = 1..n-1}`, `p_ii` being the total
/// reverse weight received by vertex `i`.
pub fn star_spectrum_closed_form(m: &MixedGraph) -> Result<Spectrum, SpectralError> {
    let rho = star_hub_weight(m).ok_or(SpectralError::NotAStar)?;
    let mut received = vec![0.0; m.n()];
    for e in m.reverse_edges() {
        received[e.child - 1] += e.weight;
    }
    let mut eigenvalues = vec![Complex64::new(0.0, 0.0)];
    eigenvalues.extend(received[..m.n() - 1].iter().map(|p| Complex64::new(rho + p, 0.0)));
    Ok(Spectrum { eigenvalues })
}

/// Hub weight if the DAG part is exactly `{(i, 1, rho) : i = 2..n}`.
fn star_hub_weight(m: &MixedGraph) -> Option<f64> {
    let edges = m.dag_edges();
    let rho = edges.first()?.weight;
    let mut fringe = vec![false; m.n() + 1];
    for e in edges {
        if e.parent != 1 || e.weight != rho || fringe[e.child] {
            return None;
        }
        fringe[e.child] = true;
    }
    (edges.len() == m.n() - 1).then_some(rho)
}

/// Control gains shared by every agent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GainPair {
    alpha: f64,
    beta: f64,
}

impl GainPair {
    pub fn new(alpha: f64, beta: f64) -> Result<Self, SpectralError> {
        let ok = |g: f64| g > 0.0 && g.is_finite();
        if ok(alpha) && ok(beta) {
            Ok(Self { alpha, beta })
        } else {
            Err(SpectralError::InvalidGain { alpha, beta })
        }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `beta^2 / alpha`.
    pub fn ratio(&self) -> f64 {
        self.beta * self.beta / self.alpha
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Protocol {
    Absolute,
    Relative,
}

impl Protocol {
    pub const BOTH: [Protocol; 2] = [Protocol::Absolute, Protocol::Relative];
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Protocol::Absolute => "absolute",
            Protocol::Relative => "relative",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectralReport {
    #[serde(rename = "eigenvalues")]
    pub spectrum: Spectrum,
    pub abs_criterion: f64,
    pub rel_criterion: f64,
    pub gershgorin_bound: f64,
    pub has_spanning_tree: bool,
}

impl SpectralReport {
    pub fn criterion(&self, protocol: Protocol) -> f64 {
        match protocol {
            Protocol::Absolute => self.abs_criterion,
            Protocol::Relative => self.rel_criterion,
        }
    }
}

pub fn analyze(m: &MixedGraph) -> Result<SpectralReport, SpectralError> {
    analyze_with(m, DEFAULT_ZERO_TOL)
}

/// Full spectral report for a mixed graph. Both criteria are reported as 0
/// when every eigenvalue is zero (edgeless graph); such a graph has no
/// spanning tree, so its verdict is NoConsensus regardless.
pub fn analyze_with(m: &MixedGraph, zero_tol: f64) -> Result<SpectralReport, SpectralError> {
    let lap = laplacian(m);
    let spectrum = eigenvalues(&lap.total)?;
    let or_zero = |r: Result<f64, SpectralError>| match r {
        Err(SpectralError::AllEigenvaluesZero) => Ok(0.0),
        other => other,
    };
    Ok(SpectralReport {
        abs_criterion: or_zero(abs_criterion(&spectrum, zero_tol))?,
        rel_criterion: or_zero(rel_criterion(&spectrum, zero_tol))?,
        gershgorin_bound: gershgorin_bound(&assumption_params(m)),
        has_spanning_tree: has_spanning_tree(m),
        spectrum,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Consensus,
    NoConsensus,
    Boundary,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VerdictWithMargin {
    pub verdict: Verdict,
    /// `beta^2 / alpha - criterion`.
    pub margin: f64,
}

/// Strict-inequality test of the protocol's criterion. Margins within
/// `margin_tol` of zero are reported as [`Verdict::Boundary`].
pub fn consensus_verdict(
    report: &SpectralReport,
    gains: GainPair,
    protocol: Protocol,
    margin_tol: f64,
) -> VerdictWithMargin {
    let margin = gains.ratio() - report.criterion(protocol);
    let verdict = if !report.has_spanning_tree || margin < -margin_tol {
        Verdict::NoConsensus
    } else if margin > margin_tol {
        Verdict::Consensus
    } else {
        Verdict::Boundary
    };
    VerdictWithMargin { verdict, margin }
}
