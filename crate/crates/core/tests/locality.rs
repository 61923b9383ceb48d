mod common;

use common::c;
use proptest::prelude::*;
use xferopt::dynamics::{optimize_time, Objective};
use xferopt::instances::{diagonal_spectrum, GenParams, Graph, Instance, InstanceKind};
use xferopt::locality::{
    lrb_cut_bound, lrb_epsilon, optimal_lrb_time, subgraph_time_estimate, worst_case_bound, CombinationRule,
    LocalSystem, LrbReport, SubgraphSpec, DEFAULT_QUAD_STEP, TABLE_TIME,
};
use xferopt::dynamics::TimeGrid;
use xferopt::pauli::build_h1;
use xferopt::ringfermion::ring_metrics;

/// `<Z_i Z_j>` after dense evolution of the plus state under the subgraph's `H₁`.
fn dense_edge(s: &SubgraphSpec, t: f64) -> f64 {
    let g = &s.graph;
    let n = g.n();
    let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
    let hf = common::diag(&common::ising_energies(n, &edges, g.biases()));
    let h1 = common::commutator(&common::driver(n), &hf) * c(0.0, -0.5);
    let psi = common::evolve(&h1, &common::plus(n), t);
    let (i, j) = s.target_edge;
    let zz: Vec<f64> = (0..1usize << n).map(|b| if ((b >> i) ^ (b >> j)) & 1 == 0 { 1.0 } else { -1.0 }).collect();
    common::expectation_diag(&psi, &zz)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn epsilon_is_monotone(k in 0usize..3, a in 0.0f64..0.3, b in 0.0f64..0.3) {
        let s = &SubgraphSpec::table_catalog()[k];
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let sys = LocalSystem::new(s).unwrap();
        let e_lo = sys.epsilon(lo, 2e-3).unwrap();
        let e_hi = sys.epsilon(hi, 2e-3).unwrap();
        prop_assert!(e_hi >= e_lo - 1e-12);
        prop_assert!(sys.bound_integrand(hi) >= 0.0);
    }

    #[test]
    fn report_bookkeeping(t in 0.0f64..1.0, local in -1.0f64..1.0, eps in 0.0f64..1.0, more in 0.0f64..1.0) {
        let r = LrbReport::new(t, local, eps);
        prop_assert_eq!(r.upper_estimate, local + eps);
        prop_assert!((r.cut_value - (1.0 - r.upper_estimate) / 2.0).abs() < 1e-15);
        prop_assert!(LrbReport::new(t, local, eps + more).cut_value <= r.cut_value);
    }
}

#[test]
fn edge_estimates_match_dense_evolution() {
    for s in SubgraphSpec::table_catalog().into_iter().chain([SubgraphSpec::path(6).unwrap()]) {
        let sys = LocalSystem::new(&s).unwrap();
        assert!(sys.edge_estimate(0.0).abs() < 1e-14, "{}", s.name);
        for t in [0.05, TABLE_TIME, 0.25] {
            assert!((sys.edge_estimate(t) - dense_edge(&s, t)).abs() < 1e-10, "{} t {t}", s.name);
        }
    }
}

#[test]
fn two_triangle_local_estimate() {
    let r = lrb_cut_bound(&SubgraphSpec::subgraph1(), TABLE_TIME).unwrap();
    assert!((r.local_estimate - (-0.2056)).abs() < 5e-4, "{}", r.local_estimate);
}

#[test]
fn table_values_are_stable() {
    let expect = [(-0.2057, 0.5640), (-0.2681, 0.5760), (-0.3303, 0.5879)];
    for (s, (local, cut)) in SubgraphSpec::table_catalog().iter().zip(expect) {
        let r = lrb_cut_bound(s, TABLE_TIME).unwrap();
        assert!((r.local_estimate - local).abs() < 1e-4, "{} local {}", s.name, r.local_estimate);
        assert!((r.cut_value - cut).abs() < 1e-4, "{} cut {}", s.name, r.cut_value);
    }
}

#[test]
fn epsilon_vanishes_at_zero_and_converges() {
    for s in SubgraphSpec::table_catalog() {
        assert_eq!(lrb_epsilon(&s, 0.0, DEFAULT_QUAD_STEP).unwrap(), 0.0);
        let coarse = lrb_epsilon(&s, TABLE_TIME, DEFAULT_QUAD_STEP).unwrap();
        let fine = lrb_epsilon(&s, TABLE_TIME, DEFAULT_QUAD_STEP / 2.0).unwrap();
        assert!((coarse - fine).abs() < 1e-4, "{}", s.name);
    }
    assert!(lrb_epsilon(&SubgraphSpec::subgraph1(), 0.1, 0.0).is_err());
}

#[test]
fn ring_path_bound_contains_large_ring() {
    let path = SubgraphSpec::path(6).unwrap();
    let sys = LocalSystem::new(&path).unwrap();
    let profile = sys.epsilon_profile(0.3, 1e-3).unwrap();
    for &(t, eps) in profile.iter().step_by(10) {
        // On a ring every edge is equivalent, so <ZZ> = <H_f>/n.
        let exact = ring_metrics(400, t).unwrap().energy_expectation / 400.0;
        let gap = (sys.edge_estimate(t) - exact).abs();
        assert!(gap <= eps + 1e-10, "t {t}: gap {gap} eps {eps}");
    }
}

#[test]
fn triangle_free_neighbourhood_goes_lowest() {
    let lowest: Vec<f64> = SubgraphSpec::table_catalog()
        .iter()
        .map(|s| {
            let sys = LocalSystem::new(s).unwrap();
            (0..=400).map(|k| sys.edge_estimate(k as f64 / 1000.0)).fold(f64::INFINITY, f64::min)
        })
        .collect();
    assert!(lowest[2] < lowest[1] && lowest[2] < lowest[0], "{lowest:?}");
}

#[test]
fn combination_rules() {
    let reports: Vec<LrbReport> =
        SubgraphSpec::table_catalog().iter().map(|s| lrb_cut_bound(s, TABLE_TIME).unwrap()).collect();
    let single = worst_case_bound(&reports[2..], CombinationRule::TriangleDeflation).unwrap();
    assert_eq!(single, reports[2].cut_value);
    // With these inputs the triangle-free neighbourhood binds.
    assert_eq!(worst_case_bound(&reports, CombinationRule::TriangleDeflation).unwrap(), reports[2].cut_value);
    assert_eq!(worst_case_bound(&reports, CombinationRule::Minimum).unwrap(), reports[0].cut_value);
    assert!(worst_case_bound(&[], CombinationRule::Minimum).is_err());
    assert!(worst_case_bound(&reports[..2], CombinationRule::TriangleDeflation).is_err());
}

#[test]
fn optimized_bound_time_beats_table_time() {
    let grid = TimeGrid::search(0.0, 0.2, 201).unwrap();
    let catalog = SubgraphSpec::table_catalog();
    let (t, value, reports) = optimal_lrb_time(&catalog, &grid, DEFAULT_QUAD_STEP, CombinationRule::TriangleDeflation).unwrap();
    let at_table: Vec<LrbReport> = catalog.iter().map(|s| lrb_cut_bound(s, TABLE_TIME).unwrap()).collect();
    assert!(value >= worst_case_bound(&at_table, CombinationRule::TriangleDeflation).unwrap() - 1e-4);
    assert!(t > 0.0 && t < 0.2);
    assert_eq!(reports.len(), 3);
}

#[test]
fn time_proxies() {
    let path = subgraph_time_estimate(&SubgraphSpec::path(4).unwrap(), (0.0, 1.0), 1000).unwrap();
    assert!((path - 0.22).abs() <= 0.01, "path4 {path}");
    let claw = subgraph_time_estimate(&SubgraphSpec::double_claw(), (0.0, 1.0), 1000).unwrap();
    assert!(claw < path, "double claw {claw}");
    let edge = SubgraphSpec::regular("edge", Graph::unweighted(2, &[(0, 1)]).unwrap(), (0, 1), 1).unwrap();
    let t = subgraph_time_estimate(&edge, (0.0, 1.0), 1000).unwrap();
    assert!(t > 0.0 && t < 1.0);
    let sys = LocalSystem::new(&edge).unwrap();
    assert!(sys.edge_estimate(1e-4) < sys.edge_estimate(0.0));
}

#[test]
fn regular_optimal_times_cluster() {
    let mut times = Vec::new();
    for n in [6, 8, 10, 12] {
        for seed in 0..25 {
            let inst = Instance::generate(InstanceKind::Regular3, n, seed, GenParams::default()).unwrap();
            let spec = diagonal_spectrum(&inst.graph).unwrap();
            let h = build_h1(&inst.graph).unwrap();
            times.push(optimize_time(&h, &spec, (0.0, 1.0), 200, Objective::Ratio).unwrap().t_star);
        }
    }
    times.sort_by(f64::total_cmp);
    let median = times[times.len() / 2];
    assert!((0.16..=0.19).contains(&median), "median t* {median}");
}

#[test]
fn catalogue_shapes() {
    assert!(SubgraphSpec::path(5).is_err());
    let s3 = SubgraphSpec::subgraph3();
    assert_eq!(s3.crossing, vec![2, 2, 0, 0, 2, 2]);
    let inst = s3.to_instance();
    assert_eq!(SubgraphSpec::from_instance(&inst, 3).unwrap().crossing, s3.crossing);
    assert!(SubgraphSpec::new("bad", Graph::unweighted(3, &[(0, 1)]).unwrap(), (1, 2), vec![0; 3]).is_err());
}
