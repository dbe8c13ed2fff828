//! Acceptance suite: one line per criterion, non-zero exit on any failure.
//!
//! Closed forms are re-derived here rather than taken from the library.

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use hiercon::dynamics::{
    classify_consistency, integrate, left_zero_eigenvector, simulate, Consistency, SimVerdict, SimulationConfig,
};
use hiercon::graph::{
    add_reverse_edges, build_dag, gen_path_ring, gen_random_capped, gen_random_mixed, gen_star_mixed, laplacian,
    MixedGraph,
};
use hiercon::spectral::{
    analyze, consensus_verdict, disc_union_distance, eigenvalues, gershgorin_bound, gershgorin_discs, GainPair,
    Protocol, Spectrum, Verdict, DEFAULT_MARGIN_TOL,
};
use hiercon::sweep::{find_breaking_size, initial_conditions, run_sweep, FamilySpec, SizeRange};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

type Outcome = Result<String, String>;
type Check<'a> = Box<dyn Fn() -> Outcome + 'a>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn gains(a: f64, b: f64) -> GainPair {
    GainPair::new(a, b).unwrap()
}

fn spectrum(m: &MixedGraph) -> Spectrum {
    eigenvalues(&laplacian(m).total).unwrap()
}

fn within(elapsed: Duration, limit_s: u64) -> Outcome {
    if elapsed > Duration::from_secs(limit_s) {
        Err(format!("took {elapsed:.2?}, limit {limit_s} s"))
    } else {
        Ok(format!("{elapsed:.2?}"))
    }
}

/// Multiset match by exhaustive minimum-cost pairing over sorted candidates.
fn multiset_gap(want: &[Complex64], got: &[Complex64]) -> f64 {
    assert_eq!(want.len(), got.len());
    let mut used = vec![false; got.len()];
    let mut worst: f64 = 0.0;
    for w in want {
        let (k, d) = got
            .iter()
            .enumerate()
            .filter(|(k, _)| !used[*k])
            .map(|(k, g)| (k, (g - w).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        used[k] = true;
        worst = worst.max(d);
    }
    worst
}

fn ring_oracle(s: usize) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0)];
    for i in 1..=s {
        let t = 2.0 * PI * i as f64 / (s + 1) as f64;
        v.push(Complex64::new(1.0 - t.cos(), t.sin()));
    }
    v
}

fn half_cot_sq(s: usize) -> f64 {
    let c = 1.0 / (PI / (s + 1) as f64).tan();
    0.5 * c * c
}

fn c1_ring_spectrum() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for s in 1..=50 {
        let got = match gen_path_ring(s + 1, 1.0, 1.0) {
            Ok(m) => spectrum(&m).eigenvalues,
            Err(_) => {
                // Two-vertex ring as the leading block of a 3-vertex graph.
                let m = add_reverse_edges(build_dag(3, [(2, 1, 1.0)]).unwrap(), [(1, 2, 1.0)]).unwrap();
                let mut ev = spectrum(&m).eigenvalues;
                let k = ev.iter().position(|z| z.norm() < 1e-12).unwrap();
                ev.remove(k);
                ev
            }
        };
        let gap = multiset_gap(&ring_oracle(s), &got);
        ensure!(gap <= 1e-8, "s = {s}: gap {gap:e}");
        worst = worst.max(gap);
    }
    Ok(format!("max gap {worst:.1e}, {}", within(start.elapsed(), 5)?))
}

fn c2_rel_criterion() -> Outcome {
    for (s, want) in [(3, 0.5), (4, 0.947_213_595_499_958), (5, 1.5), (9, 4.736_067_977_499_79)] {
        ensure!((half_cot_sq(s) - want).abs() < 1e-12, "oracle spot value s = {s}");
    }
    let mut worst: f64 = 0.0;
    for s in 2..=50 {
        let r = analyze(&gen_path_ring(s + 1, 1.0, 1.0).unwrap()).unwrap();
        let err = (r.rel_criterion - half_cot_sq(s)).abs();
        ensure!(err <= 1e-8, "s = {s}: {} vs {}", r.rel_criterion, half_cot_sq(s));
        worst = worst.max(err);
    }
    Ok(format!("max error {worst:.1e} over s = 2..50"))
}

fn c3_breaking_sizes() -> Outcome {
    let spec = FamilySpec::path_ring(SizeRange::new(3, 200, 1).unwrap());
    // Oracle: first n whose criterion exceeds beta^2 / alpha.
    let oracle = |ratio: f64| (3..=200).find(|&n| half_cot_sq(n - 1) > ratio);
    for (beta, want) in [(1.0, 6), (2.0, 10)] {
        let got = find_breaking_size(&spec, gains(1.0, beta), Protocol::Relative, 200).unwrap().size;
        ensure!(oracle(beta * beta) == Some(want), "oracle disagrees for beta = {beta}");
        ensure!(got == Some(want), "beta = {beta}: got {got:?}, want {want}");
    }
    let abs = find_breaking_size(&spec, gains(1.0, 2.0), Protocol::Absolute, 200).unwrap();
    ensure!(abs.size.is_none(), "absolute protocol broke at {:?}", abs.size);
    Ok("relative 6 and 10, absolute none up to 200".into())
}

struct CappedInstance {
    m: MixedGraph,
    bound: f64,
}

fn capped_corpus() -> Vec<CappedInstance> {
    (0..1000u64)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ k);
            let n = rng.gen_range(3..=60);
            let zeta = rng.gen_range(1..=3);
            let xi = rng.gen_range(0..=3);
            let density = rng.gen_range(0.0..=1.0);
            let m = gen_random_capped(n, zeta, xi, density, (1e-3, 2.0), k).unwrap();
            let bound = gershgorin_bound(&m.assumption_params());
            CappedInstance { m, bound }
        })
        .collect()
}

fn c4_gershgorin(corpus: &[CappedInstance]) -> Outcome {
    let start = Instant::now();
    let failures: Vec<String> = corpus
        .par_iter()
        .enumerate()
        .filter_map(|(k, inst)| {
            let p = inst.m.assumption_params();
            if p.zeta > 3 || p.xi > 3 || p.a_bar > 2.0 || p.a_bar_r > 2.0 {
                return Some(format!("instance {k} violates caps"));
            }
            let discs = gershgorin_discs(&laplacian(&inst.m).total);
            let r = analyze(&inst.m).unwrap();
            let outside = r.spectrum.eigenvalues.iter().map(|z| disc_union_distance(*z, &discs)).fold(0.0, f64::max);
            if outside > 1e-8 {
                return Some(format!("instance {k}: eigenvalue {outside:e} outside the discs"));
            }
            (r.abs_criterion > inst.bound + 1e-8)
                .then(|| format!("instance {k}: criterion {} > bound {}", r.abs_criterion, inst.bound))
        })
        .collect();
    ensure!(failures.is_empty(), "{}", failures[0]);
    Ok(format!("1000 graphs, n <= 60, {}", within(start.elapsed(), 60)?))
}

fn c5_absolute_scalability(corpus: &[CappedInstance]) -> Outcome {
    // Family-wide rule from the caps (zeta, xi <= 3, weights <= 2), and the
    // tighter per-instance rule from the measured parameters.
    let family = gains(1.0, (2.0 * (3.0 * 2.0 + 3.0 * 2.0) + 1.0f64).sqrt());
    let bad = corpus.par_iter().position_any(|inst| {
        let r = analyze(&inst.m).unwrap();
        let own = gains(1.0, (inst.bound + 1.0).sqrt());
        [family, own]
            .iter()
            .any(|g| consensus_verdict(&r, *g, Protocol::Absolute, DEFAULT_MARGIN_TOL).verdict != Verdict::Consensus)
    });
    ensure!(bad.is_none(), "corpus instance {bad:?} not Consensus");

    // Path ring: zeta = xi = 1, unit weights, bound 4.
    let spec = FamilySpec::path_ring(SizeRange::new(3, 200, 1).unwrap());
    let sweep = run_sweep(&spec, gains(1.0, 5f64.sqrt()), false, &SimulationConfig::default()).unwrap();
    let bad = sweep.records.iter().find(|r| r.absolute.verdict != Verdict::Consensus);
    ensure!(bad.is_none(), "path ring n = {} not Consensus", bad.unwrap().n);
    Ok("1000 corpus graphs and path ring n = 3..200".into())
}

fn c6_star_family() -> Outcome {
    let grid: Vec<GainPair> =
        [0.1, 1.0, 10.0].iter().flat_map(|&a| [0.1, 1.0, 10.0].map(move |b| gains(a, b))).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x57A2);
    let mut worst_im: f64 = 0.0;
    let mut worst_gap: f64 = 0.0;
    for k in 0..200u64 {
        let n = rng.gen_range(3..=40);
        let rho = rng.gen_range(0.05..=4.0);
        let density = rng.gen_range(0.0..=1.0);
        let m = gen_star_mixed(n, rho, density, (0.01, 4.0), k).unwrap();
        let r = analyze(&m).unwrap();
        let im = r.spectrum.max_abs_imag();
        ensure!(im <= 1e-8, "instance {k}: imaginary part {im:e}");
        // Oracle: 0 together with rho + p_ii for i = 1..n-1.
        let mut want = vec![Complex64::new(0.0, 0.0)];
        for i in 1..n {
            let p: f64 = m.reverse_edges().iter().filter(|e| e.child == i).map(|e| e.weight).sum();
            want.push(Complex64::new(rho + p, 0.0));
        }
        let gap = multiset_gap(&want, &r.spectrum.eigenvalues);
        ensure!(gap <= 1e-8, "instance {k} (n = {n}): gap {gap:e}");
        worst_im = worst_im.max(im);
        worst_gap = worst_gap.max(gap);
        for g in &grid {
            for p in Protocol::BOTH {
                let v = consensus_verdict(&r, *g, p, DEFAULT_MARGIN_TOL).verdict;
                ensure!(v == Verdict::Consensus, "instance {k}, {p}, {g:?}: {v:?}");
            }
        }
    }
    Ok(format!("200 stars, max |Im| {worst_im:.1e}, max gap {worst_gap:.1e}, 9 gain pairs"))
}

struct SimCase {
    m: MixedGraph,
    gains: GainPair,
    protocol: Protocol,
    verdict: Verdict,
    seed: u64,
}

fn simulation_corpus() -> Vec<SimCase> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5113);
    let mut cases = Vec::new();
    let mut seed = 0u64;
    while cases.len() < 200 {
        seed += 1;
        let n = rng.gen_range(4..=12);
        let m = gen_random_capped(
            n,
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(0.2..=0.6),
            (0.3, 2.0),
            seed,
        )
        .unwrap();
        let protocol = if rng.gen_bool(0.5) { Protocol::Absolute } else { Protocol::Relative };
        // Modest damping puts a fair share of cases past the criterion.
        let beta_max = if protocol == Protocol::Relative { 1.0 } else { 1.5 };
        let g = gains(rng.gen_range(0.3..=2.0), rng.gen_range(0.1..=beta_max));
        let v = consensus_verdict(&analyze(&m).unwrap(), g, protocol, DEFAULT_MARGIN_TOL);
        if v.margin.abs() > 0.1 {
            cases.push(SimCase { m, gains: g, protocol, verdict: v.verdict, seed });
        }
    }
    cases
}

fn c7_simulation_consistency() -> Outcome {
    let start = Instant::now();
    let cases = simulation_corpus();
    let cfg = SimulationConfig { dt: 1e-2, t_max: 5000.0, ..Default::default() };
    let results: Vec<Consistency> = cases
        .par_iter()
        .map(|c| {
            let (x0, v0) = initial_conditions(c.m.n(), c.seed);
            let tr = simulate(&c.m, c.gains, c.protocol, &x0, &v0, &cfg).unwrap();
            classify_consistency(tr.verdict, c.verdict)
        })
        .collect();
    let agree = results.iter().filter(|c| **c == Consistency::Agree).count();
    let unstable = cases.iter().filter(|c| c.verdict == Verdict::NoConsensus).count();
    ensure!(
        agree == cases.len(),
        "{agree}/{} agree; first miss at case {}",
        cases.len(),
        results.iter().position(|c| *c != Consistency::Agree).unwrap()
    );

    let ring = gen_path_ring(10, 1.0, 1.0).unwrap();
    let (x0, v0) = initial_conditions(10, 2024);
    let run = |p| simulate(&ring, gains(1.0, 2.0), p, &x0, &v0, &SimulationConfig::default()).unwrap().verdict;
    let rel = run(Protocol::Relative);
    let abs = run(Protocol::Absolute);
    ensure!(matches!(rel, SimVerdict::Diverged(_)), "ring n = 10 relative: {rel:?}");
    ensure!(matches!(abs, SimVerdict::Converged(_)), "ring n = 10 absolute: {abs:?}");
    Ok(format!(
        "{agree}/200 agree ({unstable} NoConsensus), ring n = 10 diverges/converges, {}",
        within(start.elapsed(), 300)?
    ))
}

fn c8_dynamics_invariants() -> Outcome {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let mut drift: f64 = 0.0;
    let mut decay: f64 = 0.0;
    for seed in 0..5 {
        let m = gen_random_mixed(10, 0.3, 6, (0.2, 2.0), seed).unwrap();
        let w = left_zero_eigenvector(&m).unwrap();
        let (x0, v0) = initial_conditions(10, seed);
        let (_, v) = integrate(&m, gains(1.0, 1.5), Protocol::Relative, &x0, &v0, 1e-3, 100_000).unwrap();
        drift = drift.max((dot(&w, &v) - dot(&w, &v0)).abs());

        let beta = 0.8;
        let v0: Vec<f64> = v0.iter().map(|v| v + 2.0).collect();
        let (_, v) = integrate(&m, gains(1.2, beta), Protocol::Absolute, &x0, &v0, 1e-3, 5_000).unwrap();
        let want = dot(&w, &v0) * (-beta * 5.0f64).exp();
        decay = decay.max(((dot(&w, &v) - want) / want).abs());
    }
    ensure!(drift <= 1e-6, "relative drift {drift:e}");
    ensure!(decay <= 1e-5, "absolute decay error {decay:e}");

    let m = gen_path_ring(6, 1.0, 1.0).unwrap();
    let (x0, v0) = initial_conditions(6, 1);
    let run = |h: f64| {
        let (x, v) =
            integrate(&m, gains(1.0, 2.0), Protocol::Absolute, &x0, &v0, h, (8.0 / h).round() as usize).unwrap();
        [x, v].concat()
    };
    let reference = run(0.1 / 8.0);
    let err = |h| run(h).iter().zip(&reference).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let ratio = err(0.1) / err(0.05);
    ensure!((8.0..=32.0).contains(&ratio), "step-halving ratio {ratio}");
    Ok(format!("drift {drift:.1e}, decay error {decay:.1e}, step-halving ratio {ratio:.2}"))
}

fn main() {
    let corpus = capped_corpus();
    let criteria: Vec<(&str, Check)> = vec![
        ("ring spectrum", Box::new(c1_ring_spectrum)),
        ("relative criterion closed form", Box::new(c2_rel_criterion)),
        ("breaking sizes", Box::new(c3_breaking_sizes)),
        ("Gershgorin bound", Box::new(|| c4_gershgorin(&corpus))),
        ("absolute-protocol scalability", Box::new(|| c5_absolute_scalability(&corpus))),
        ("star family", Box::new(c6_star_family)),
        ("simulation-spectrum consistency", Box::new(c7_simulation_consistency)),
        ("dynamics invariants", Box::new(c8_dynamics_invariants)),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS criterion {}: {name} ({detail})", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name} ({why})", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
