//! Scalability sweeps: one fixed gain pair applied to every member of a
//! growing mixed-graph family.

mod report;

pub use report::{write_sweep_csv, SWEEP_CSV_COLUMNS};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{classify_consistency, simulate, Consistency, SimVerdict, SimulationConfig};
use crate::graph::{gen_path, gen_path_ring, gen_random_capped, gen_star_mixed, laplacian, MixedGraph};
use crate::spectral::{
    analyze_with, consensus_verdict, GainPair, Protocol, Spectrum, Verdict, VerdictWithMargin, DEFAULT_MARGIN_TOL,
    DEFAULT_ZERO_TOL,
};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FamilyKind {
    /// Directed path without reverse edges.
    Path { weight: f64 },
    /// Path `1 -> ... -> n` plus one reverse edge from `n` to `1`.
    PathFullSpanReverse { weight: f64, reverse_weight: f64 },
    /// Star with hub weight `rho`; each reverse pair drawn with
    /// `reverse_density`.
    Star { rho: f64, reverse_density: f64, weight_bounds: (f64, f64) },
    /// Random DAG plus reverse edges with per-vertex neighbor caps.
    RandomMixed { zeta_cap: usize, xi_cap: usize, dag_density: f64, weight_bounds: (f64, f64) },
}

/// Inclusive size range with stride.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeRange {
    pub start: usize,
    pub end: usize,
    pub step: usize,
}

impl SizeRange {
    pub fn new(start: usize, end: usize, step: usize) -> Result<Self> {
        let r = Self { start, end, step };
        r.validate()?;
        Ok(r)
    }

    fn validate(&self) -> Result<()> {
        if self.start <= 2 {
            return Err(Error::InvalidArgument(format!("size range must start above 2, got {}", self.start)));
        }
        if self.end < self.start {
            return Err(Error::InvalidArgument(format!("empty size range {}:{}", self.start, self.end)));
        }
        if self.step == 0 {
            return Err(Error::InvalidArgument("size step must be positive".into()));
        }
        Ok(())
    }

    pub fn sizes(&self) -> impl Iterator<Item = usize> {
        (self.start..=self.end).step_by(self.step)
    }

    /// Same start and stride, ending at `end`.
    pub fn up_to(&self, end: usize) -> SizeRange {
        SizeRange { end, ..*self }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilySpec {
    #[serde(flatten)]
    pub kind: FamilyKind,
    pub sizes: SizeRange,
    /// Master seed; each size gets its own derived seed.
    pub seed: u64,
}

impl FamilySpec {
    pub fn path_ring(sizes: SizeRange) -> Self {
        Self { kind: FamilyKind::PathFullSpanReverse { weight: 1.0, reverse_weight: 1.0 }, sizes, seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        self.sizes.validate()?;
        // Building the smallest member checks the generator parameters.
        self.instance(self.sizes.start).map(|_| ())
    }

    /// The family member on `n` vertices. Members are built independently;
    /// `instance(n - 1)` need not be a subgraph of `instance(n)`.
    pub fn instance(&self, n: usize) -> Result<MixedGraph> {
        let seed = derive_seed(self.seed, n as u64);
        let m = match self.kind {
            FamilyKind::Path { weight } => gen_path(n, weight)?.into_mixed(),
            FamilyKind::PathFullSpanReverse { weight, reverse_weight } => gen_path_ring(n, weight, reverse_weight)?,
            FamilyKind::Star { rho, reverse_density, weight_bounds } => {
                gen_star_mixed(n, rho, reverse_density, weight_bounds, seed)?
            }
            FamilyKind::RandomMixed { zeta_cap, xi_cap, dag_density, weight_bounds } => {
                gen_random_capped(n, zeta_cap, xi_cap, dag_density, weight_bounds, seed)?
            }
        };
        Ok(m)
    }
}

/// SplitMix64 finalizer over `master` and `index`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Initial positions and velocities uniform in `[-1, 1]`.
pub fn initial_conditions(n: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let v0 = (0..n).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    (x0, v0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationOutcome {
    pub absolute: SimVerdict,
    pub relative: SimVerdict,
    pub absolute_consistency: Consistency,
    pub relative_consistency: Consistency,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    pub n: usize,
    /// Reverse-edge span `phi - theta`, absent without reverse edges.
    pub s: Option<usize>,
    pub abs_criterion: f64,
    pub rel_criterion: f64,
    pub gershgorin_bound: f64,
    pub has_spanning_tree: bool,
    pub absolute: VerdictWithMargin,
    pub relative: VerdictWithMargin,
    pub simulation: Option<SimulationOutcome>,
    #[serde(skip)]
    pub spectrum: Spectrum,
}

impl SweepRecord {
    pub fn verdict(&self, protocol: Protocol) -> VerdictWithMargin {
        match protocol {
            Protocol::Absolute => self.absolute,
            Protocol::Relative => self.relative,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PerProtocol<T> {
    pub absolute: T,
    pub relative: T,
}

impl<T> PerProtocol<T> {
    pub fn get(&self, p: Protocol) -> &T {
        match p {
            Protocol::Absolute => &self.absolute,
            Protocol::Relative => &self.relative,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub family: FamilySpec,
    pub gains: GainPair,
    pub records: Vec<SweepRecord>,
    /// Smallest swept size with a NoConsensus verdict.
    pub breaking_size: PerProtocol<Option<usize>>,
    /// Sizes whose verdict was Boundary; never counted as breaking.
    pub boundary_sizes: PerProtocol<Vec<usize>>,
}

impl SweepResult {
    /// JSON of the whole result; `full` adds each record's eigenvalues as
    /// `[re, im]` pairs.
    pub fn to_json(&self, full: bool) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("sweep result serializes");
        if full {
            let records = v["records"].as_array_mut().expect("records array");
            for (out, rec) in records.iter_mut().zip(&self.records) {
                out["eigenvalues"] = serde_json::to_value(&rec.spectrum).expect("spectrum serializes");
            }
        }
        v
    }
}

fn evaluate(spec: &FamilySpec, gains: GainPair, n: usize, sim: Option<&SimulationConfig>) -> Result<SweepRecord> {
    let m = spec.instance(n)?;
    let report = analyze_with(&m, DEFAULT_ZERO_TOL)?;
    let absolute = consensus_verdict(&report, gains, Protocol::Absolute, DEFAULT_MARGIN_TOL);
    let relative = consensus_verdict(&report, gains, Protocol::Relative, DEFAULT_MARGIN_TOL);
    let simulation = match sim {
        Some(cfg) => {
            let (x0, v0) = initial_conditions(n, derive_seed(spec.seed ^ 0x1C0D_E5EE_D000_0000, n as u64));
            let abs = simulate(&m, gains, Protocol::Absolute, &x0, &v0, cfg)?.verdict;
            let rel = simulate(&m, gains, Protocol::Relative, &x0, &v0, cfg)?.verdict;
            Some(SimulationOutcome {
                absolute: abs,
                relative: rel,
                absolute_consistency: classify_consistency(abs, absolute.verdict),
                relative_consistency: classify_consistency(rel, relative.verdict),
            })
        }
        None => None,
    };
    Ok(SweepRecord {
        n,
        s: laplacian(&m).span.map(|sp| sp.s),
        abs_criterion: report.abs_criterion,
        rel_criterion: report.rel_criterion,
        gershgorin_bound: report.gershgorin_bound,
        has_spanning_tree: report.has_spanning_tree,
        absolute,
        relative,
        simulation,
        spectrum: report.spectrum,
    })
}

fn at_size(n: usize) -> impl Fn(Error) -> Error {
    move |e| Error::AtSize { n, source: Box::new(e) }
}

/// Evaluates every size of the family with the same gains. Sizes are
/// processed in parallel; records are returned in size order.
pub fn run_sweep(
    spec: &FamilySpec,
    gains: GainPair,
    simulate_flag: bool,
    cfg: &SimulationConfig,
) -> Result<SweepResult> {
    spec.validate()?;
    if simulate_flag {
        cfg.validate()?;
    }
    let sim = simulate_flag.then_some(cfg);
    let sizes: Vec<usize> = spec.sizes.sizes().collect();
    let records =
        sizes.par_iter().map(|&n| evaluate(spec, gains, n, sim).map_err(at_size(n))).collect::<Result<Vec<_>>>()?;

    let first_break = |p: Protocol| records.iter().find(|r| r.verdict(p).verdict == Verdict::NoConsensus).map(|r| r.n);
    let boundaries =
        |p: Protocol| records.iter().filter(|r| r.verdict(p).verdict == Verdict::Boundary).map(|r| r.n).collect();
    Ok(SweepResult {
        family: *spec,
        gains,
        breaking_size: PerProtocol {
            absolute: first_break(Protocol::Absolute),
            relative: first_break(Protocol::Relative),
        },
        boundary_sizes: PerProtocol {
            absolute: boundaries(Protocol::Absolute),
            relative: boundaries(Protocol::Relative),
        },
        records,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BreakingSearch {
    /// Smallest size `<= n_cap` with a NoConsensus verdict.
    pub size: Option<usize>,
    /// Boundary sizes seen before the search stopped.
    pub boundary: Vec<usize>,
}

/// Scans sizes from the family's start (with its stride) up to `n_cap`,
/// stopping at the first NoConsensus verdict for `protocol`.
pub fn find_breaking_size(
    spec: &FamilySpec,
    gains: GainPair,
    protocol: Protocol,
    n_cap: usize,
) -> Result<BreakingSearch> {
    if n_cap < spec.sizes.start {
        return Err(Error::InvalidArgument(format!("n_cap {n_cap} is below the family start {}", spec.sizes.start)));
    }
    spec.validate()?;
    let sizes: Vec<usize> = spec.sizes.up_to(n_cap).sizes().collect();
    let chunk = rayon::current_num_threads().max(1) * 2;
    let mut boundary = Vec::new();
    for block in sizes.chunks(chunk) {
        let verdicts = block
            .par_iter()
            .map(|&n| evaluate(spec, gains, n, None).map(|r| (n, r.verdict(protocol).verdict)).map_err(at_size(n)))
            .collect::<Result<Vec<_>>>()?;
        for (n, v) in verdicts {
            match v {
                Verdict::NoConsensus => return Ok(BreakingSearch { size: Some(n), boundary }),
                Verdict::Boundary => boundary.push(n),
                Verdict::Consensus => {}
            }
        }
    }
    Ok(BreakingSearch { size: None, boundary })
}
