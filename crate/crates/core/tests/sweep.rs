use hiercon::dynamics::{Consistency, SimulationConfig};
use hiercon::spectral::{path_family_rel_criterion, GainPair, Protocol};
use hiercon::sweep::{find_breaking_size, run_sweep, write_sweep_csv, FamilyKind, FamilySpec, SizeRange};

fn gains(a: f64, b: f64) -> GainPair {
    GainPair::new(a, b).unwrap()
}

fn range(a: usize, b: usize) -> SizeRange {
    SizeRange::new(a, b, 1).unwrap()
}

#[test]
fn path_ring_records_match_closed_form() {
    let r =
        run_sweep(&FamilySpec::path_ring(range(3, 60)), gains(1.0, 1.0), false, &SimulationConfig::default()).unwrap();
    for rec in &r.records {
        let s = rec.s.unwrap();
        assert_eq!(s, rec.n - 1);
        let want = path_family_rel_criterion(s);
        assert!((rec.rel_criterion - want).abs() <= 1e-8 * want.max(1.0), "n = {}", rec.n);
        assert!(rec.abs_criterion <= 2.0 * 2.0 + 1e-12);
        assert!(rec.has_spanning_tree);
    }
}

#[test]
fn breaking_size_grows_with_gain_ratio() {
    let spec = FamilySpec::path_ring(range(3, 120));
    let mut last = 0;
    for ratio in [0.25f64, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let beta = ratio.sqrt();
        let b = find_breaking_size(&spec, gains(1.0, beta), Protocol::Relative, 120).unwrap();
        let n = b.size.expect("relative protocol eventually breaks");
        assert!(n >= last, "ratio {ratio}: {n} < {last}");
        last = n;
    }
}

#[test]
fn star_sweep_is_real_and_consensual() {
    let spec = FamilySpec {
        kind: FamilyKind::Star { rho: 1.0, reverse_density: 0.4, weight_bounds: (0.1, 2.0) },
        sizes: range(3, 40),
        seed: 11,
    };
    let r = run_sweep(&spec, gains(0.5, 0.5), false, &SimulationConfig::default()).unwrap();
    for rec in &r.records {
        assert!(rec.spectrum.max_abs_imag() <= 1e-8, "n = {}", rec.n);
    }
    assert_eq!(r.breaking_size.absolute, None);
    assert_eq!(r.breaking_size.relative, None);
}

#[test]
fn simulated_sweep_agrees_where_decisive() {
    let spec = FamilySpec {
        kind: FamilyKind::RandomMixed { zeta_cap: 2, xi_cap: 2, dag_density: 0.4, weight_bounds: (0.3, 2.0) },
        sizes: range(3, 10),
        seed: 5,
    };
    let cfg = SimulationConfig { dt: 1e-2, t_max: 4000.0, ..Default::default() };
    let r = run_sweep(&spec, gains(1.0, 1.2), true, &cfg).unwrap();
    let mut decisive = 0;
    for rec in &r.records {
        let sim = rec.simulation.unwrap();
        for (p, c) in [(Protocol::Absolute, sim.absolute_consistency), (Protocol::Relative, sim.relative_consistency)] {
            if rec.verdict(p).margin.abs() > 0.1 {
                assert_eq!(c, Consistency::Agree, "n = {}, {p}", rec.n);
                decisive += 1;
            }
        }
    }
    assert!(decisive > 0);
}

#[test]
fn sweeps_are_deterministic() {
    let spec = FamilySpec {
        kind: FamilyKind::RandomMixed { zeta_cap: 3, xi_cap: 3, dag_density: 0.5, weight_bounds: (0.1, 2.0) },
        sizes: SizeRange::new(5, 45, 4).unwrap(),
        seed: 42,
    };
    let cfg = SimulationConfig::default();
    let csv = |_| {
        let r = run_sweep(&spec, gains(1.0, 2.0), false, &cfg).unwrap();
        let mut buf = Vec::new();
        write_sweep_csv(&r, &mut buf).unwrap();
        (buf, r.to_json(true).to_string())
    };
    assert_eq!(csv(0), csv(1));
}

#[test]
fn boundary_sizes_never_break() {
    // beta^2 / alpha equal to the n = 4 criterion sits exactly on the boundary.
    let beta = path_family_rel_criterion(3).sqrt();
    let r =
        run_sweep(&FamilySpec::path_ring(range(3, 8)), gains(1.0, beta), false, &SimulationConfig::default()).unwrap();
    assert!(r.boundary_sizes.relative.contains(&4));
    assert_eq!(r.breaking_size.relative, Some(5));
}
