//! The `hiercon` command line.
//!
//! Exit codes for `analyze`: 0 Consensus, 2 NoConsensus, 3 Boundary. Every
//! command exits with 1 on invalid input.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::dynamics::{simulate, write_trace_csv, SimulationConfig, VerdictSidecar};
use crate::graph::GraphSpec;
use crate::spectral::{
    analyze_with, consensus_verdict, GainPair, Protocol, Verdict, DEFAULT_MARGIN_TOL, DEFAULT_ZERO_TOL,
};
use crate::sweep::{
    find_breaking_size, initial_conditions, run_sweep, write_sweep_csv, FamilyKind, FamilySpec, SizeRange,
    SWEEP_CSV_COLUMNS,
};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_NO_CONSENSUS: i32 = 2;
pub const EXIT_BOUNDARY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "hiercon",
    version,
    about = "Second-order consensus analysis for hierarchical networks with reverse edges"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectral report and consensus verdict for a graph spec file.
    Analyze(AnalyzeArgs),
    /// RK4 simulation; writes trace.csv and verdict.json.
    Simulate(SimulateArgs),
    /// Fixed-gain sweep over a graph family.
    #[command(after_help = sweep_help())]
    Sweep(SweepArgs),
    /// Write the graph spec of one family member.
    Gen(GenArgs),
}

fn sweep_help() -> String {
    format!(
        "sweep.csv columns: {}\n\ntrace.csv columns (simulate): t, x_1..x_n, v_1..v_n, pos_disagreement, vel_disagreement",
        SWEEP_CSV_COLUMNS.join(", ")
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Absolute,
    Relative,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Absolute => Protocol::Absolute,
            ProtocolArg::Relative => Protocol::Relative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    /// Directed path (no reverse edges).
    Path,
    /// Path plus the reverse edge from n to 1.
    PathRing,
    /// Star with random reverse edges.
    Star,
    /// Random DAG with capped random reverse edges.
    Random,
}

#[derive(Debug, Args)]
pub struct GainArgs {
    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
}

impl GainArgs {
    fn gains(&self) -> Result<GainPair> {
        Ok(GainPair::new(self.alpha, self.beta)?)
    }
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long, value_enum)]
    pub family: FamilyArg,
    /// DAG edge weight (path, path-ring).
    #[arg(long, default_value_t = 1.0)]
    pub weight: f64,
    /// Reverse edge weight (path-ring).
    #[arg(long, default_value_t = 1.0)]
    pub reverse_weight: f64,
    /// Hub weight (star).
    #[arg(long, default_value_t = 1.0)]
    pub rho: f64,
    /// Probability of each reverse pair (star).
    #[arg(long, default_value_t = 0.3)]
    pub reverse_density: f64,
    /// Probability of each extra DAG edge (random).
    #[arg(long, default_value_t = 0.3)]
    pub dag_density: f64,
    /// Superior-neighbor cap (random).
    #[arg(long, default_value_t = 3)]
    pub zeta: usize,
    /// Inferior-neighbor cap (random).
    #[arg(long, default_value_t = 2)]
    pub xi: usize,
    /// Lower bound of random edge weights (star, random).
    #[arg(long, default_value_t = 0.1)]
    pub weight_low: f64,
    /// Upper bound of random edge weights (star, random).
    #[arg(long, default_value_t = 2.0)]
    pub weight_high: f64,
    /// Master seed.
    #[arg(long, env = "HIERCON_SEED", default_value_t = 0)]
    pub seed: u64,
}

impl FamilyArgs {
    fn spec(&self, sizes: SizeRange) -> FamilySpec {
        let bounds = (self.weight_low, self.weight_high);
        let kind = match self.family {
            FamilyArg::Path => FamilyKind::Path { weight: self.weight },
            FamilyArg::PathRing => {
                FamilyKind::PathFullSpanReverse { weight: self.weight, reverse_weight: self.reverse_weight }
            }
            FamilyArg::Star => {
                FamilyKind::Star { rho: self.rho, reverse_density: self.reverse_density, weight_bounds: bounds }
            }
            FamilyArg::Random => FamilyKind::RandomMixed {
                zeta_cap: self.zeta,
                xi_cap: self.xi,
                dag_density: self.dag_density,
                weight_bounds: bounds,
            },
        };
        FamilySpec { kind, sizes, seed: self.seed }
    }
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = SimulationConfig::default().dt)]
    pub dt: f64,
    #[arg(long, default_value_t = SimulationConfig::default().t_max)]
    pub t_max: f64,
    #[arg(long, default_value_t = SimulationConfig::default().conv_tol)]
    pub conv_tol: f64,
    #[arg(long, default_value_t = SimulationConfig::default().div_tol)]
    pub div_tol: f64,
    /// Keep every k-th integration step in the trace.
    #[arg(long, default_value_t = SimulationConfig::default().sample_stride)]
    pub stride: usize,
}

impl SimArgs {
    fn config(&self) -> SimulationConfig {
        SimulationConfig {
            dt: self.dt,
            t_max: self.t_max,
            conv_tol: self.conv_tol,
            div_tol: self.div_tol,
            sample_stride: self.stride,
            ..SimulationConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub gains: GainArgs,
    #[arg(long, value_enum, default_value = "absolute")]
    pub protocol: ProtocolArg,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[arg(long, default_value_t = DEFAULT_MARGIN_TOL)]
    pub margin_tol: f64,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[command(flatten)]
    pub gains: GainArgs,
    #[arg(long, value_enum, default_value = "absolute")]
    pub protocol: ProtocolArg,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Seed for the uniform [-1, 1] initial conditions.
    #[arg(long, env = "HIERCON_SEED", default_value_t = 0)]
    pub seed: u64,
    /// Start every agent at this position.
    #[arg(long)]
    pub x0_const: Option<f64>,
    /// Start every agent with this velocity.
    #[arg(long)]
    pub v0_const: Option<f64>,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Size range `start:end[:step]`, inclusive.
    #[arg(long, value_parser = parse_range)]
    pub n: (usize, usize, usize),
    #[command(flatten)]
    pub gains: GainArgs,
    /// Also simulate both protocols at every size.
    #[arg(long)]
    pub simulate: bool,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Continue the breaking-size search past the range end up to this size.
    #[arg(long)]
    pub n_cap: Option<usize>,
    #[arg(long, value_enum, value_delimiter = ',', default_values = ["csv", "json"])]
    pub format: Vec<Format>,
    /// Include eigenvalues in the JSON output.
    #[arg(long)]
    pub full: bool,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_range(s: &str) -> std::result::Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |p: &str| p.trim().parse::<usize>().map_err(|e| format!("bad size '{p}': {e}"));
    match parts.as_slice() {
        [a, b] => Ok((num(a)?, num(b)?, 1)),
        [a, b, c] => Ok((num(a)?, num(b)?, num(c)?)),
        _ => Err(format!("expected start:end[:step], got '{s}'")),
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Consensus => EXIT_OK,
        Verdict::NoConsensus => EXIT_NO_CONSENSUS,
        Verdict::Boundary => EXIT_BOUNDARY,
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json value serializes"));
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    fs::write(path, text)?;
    Ok(())
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<i32> {
    let m = GraphSpec::load(&args.graph)?;
    let gains = args.gains.gains()?;
    let protocol = Protocol::from(args.protocol);
    let report = analyze_with(&m, args.zero_tol)?;
    let v = consensus_verdict(&report, gains, protocol, args.margin_tol);
    print_json(&json!({
        "protocol": protocol,
        "alpha": gains.alpha(),
        "beta": gains.beta(),
        "gain_ratio": gains.ratio(),
        "verdict": v.verdict,
        "margin": v.margin,
        "report": report,
    }));
    Ok(verdict_code(v.verdict))
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<i32> {
    let m = GraphSpec::load(&args.graph)?;
    let gains = args.gains.gains()?;
    let cfg = args.sim.config();
    let (mut x0, mut v0) = initial_conditions(m.n(), args.seed);
    if let Some(c) = args.x0_const {
        x0 = vec![c; m.n()];
    }
    if let Some(c) = args.v0_const {
        v0 = vec![c; m.n()];
    }
    let trace = simulate(&m, gains, args.protocol.into(), &x0, &v0, &cfg)?;
    fs::create_dir_all(&args.out_dir)?;
    write_trace_csv(&trace, fs::File::create(args.out_dir.join("trace.csv"))?)?;
    let sidecar = serde_json::to_value(VerdictSidecar::from(&trace))?;
    write_text(&args.out_dir.join("verdict.json"), &serde_json::to_string_pretty(&sidecar)?)?;
    print_json(&sidecar);
    Ok(EXIT_OK)
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<i32> {
    let (start, end, step) = args.n;
    let spec = args.family.spec(SizeRange::new(start, end, step)?);
    let gains = args.gains.gains()?;
    let result = run_sweep(&spec, gains, args.simulate, &args.sim.config())?;
    fs::create_dir_all(&args.out_dir)?;
    if args.format.contains(&Format::Csv) {
        write_sweep_csv(&result, fs::File::create(args.out_dir.join("sweep.csv"))?)?;
    }
    if args.format.contains(&Format::Json) {
        write_text(&args.out_dir.join("sweep.json"), &serde_json::to_string_pretty(&result.to_json(args.full))?)?;
    }
    let mut breaking = json!({
        "absolute": result.breaking_size.absolute,
        "relative": result.breaking_size.relative,
    });
    if let Some(cap) = args.n_cap {
        for p in Protocol::BOTH {
            if result.breaking_size.get(p).is_none() && cap > end {
                let found = find_breaking_size(&spec, gains, p, cap)?;
                breaking[p.to_string()] = json!(found.size);
            }
        }
    }
    print_json(&json!({
        "breaking_size": breaking,
        "boundary_sizes": result.boundary_sizes,
    }));
    Ok(EXIT_OK)
}

pub fn cmd_gen(args: &GenArgs) -> Result<i32> {
    if args.n <= 2 {
        return Err(Error::InvalidArgument(format!("n must exceed 2, got {}", args.n)));
    }
    let spec = args.family.spec(SizeRange::new(args.n, args.n, 1)?);
    let m = spec.instance(args.n)?;
    GraphSpec::save(&m, &args.out)?;
    Ok(EXIT_OK)
}

pub fn execute(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Gen(a) => cmd_gen(a),
    }
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
