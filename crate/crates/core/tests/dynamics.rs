mod common;

use common::{c, CMat, CVec};
use proptest::prelude::*;
use xferopt::dynamics::{
    evolve, evolve_qz_exp, measure, optimize_time, plus_state, time_sweep, Objective, StateVector, TimeGrid,
};
use xferopt::instances::{diagonal_spectrum, gen_ring, gen_sk, GenParams, Graph, Instance, InstanceKind};
use xferopt::pauli::{build_h1, build_h1_general, build_hf, normalize_energy, PauliString, PauliSum};
use xferopt::ringfermion::{ring_metrics, ring_optimize};

fn to_cvec(s: &StateVector) -> CVec {
    CVec::from_iterator(s.dim(), s.amplitudes().iter().copied())
}

fn dense_energies(g: &Graph) -> Vec<f64> {
    let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
    common::ising_energies(g.n(), &edges, g.biases())
}

fn random_sum() -> impl Strategy<Value = (usize, Vec<(String, f64)>)> {
    (1usize..=6).prop_flat_map(|n| {
        let letter = prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')];
        let word = proptest::collection::vec(letter, n).prop_map(|v| v.into_iter().collect::<String>());
        (Just(n), proptest::collection::vec((word, -1.5f64..1.5), 1..10))
    })
}

fn build(n: usize, terms: &[(String, f64)]) -> PauliSum {
    PauliSum::from_terms(n, terms.iter().map(|(w, k)| (PauliString::parse(w).unwrap(), *k))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn evolution_is_unitary_and_matches_dense((n, terms) in random_sum(), t in -2.0f64..2.0) {
        let h = build(n, &terms);
        prop_assume!(!h.is_empty());
        let psi = plus_state(n).unwrap();
        let out = evolve(&h, &psi, t, 1e-10).unwrap();
        prop_assert!((out.norm() - 1.0).abs() <= 1e-10);
        let exact = common::evolve(&common::dense_sum(n, &terms), &to_cvec(&psi), t);
        prop_assert!((to_cvec(&out) - exact).norm() <= 1e-9);
    }

    #[test]
    fn short_time_slope_is_non_negative(kind in prop_oneof![Just(InstanceKind::Erdos), Just(InstanceKind::Sk)], n in 3usize..=8, seed in 0u64..2000) {
        let inst = Instance::generate(kind, n, seed, GenParams::default()).unwrap();
        let spec = diagonal_spectrum(&inst.graph).unwrap();
        prop_assume!(inst.graph.has_terms() && spec.e_min < 0.0);
        let psi = plus_state(n).unwrap();
        let r0 = measure(&psi, &spec).unwrap().ratio;
        let delta = 1e-4;
        for power in [1, 3] {
            let h = build_h1_general(&inst.graph, power).unwrap();
            let r = measure(&evolve(&h, &psi, delta, 1e-12).unwrap(), &spec).unwrap().ratio;
            prop_assert!((r - r0) / delta >= -1e-6, "power {} slope {}", power, (r - r0) / delta);
        }
    }

    #[test]
    fn hf_alone_conserves_metrics(n in 2usize..=7, seed in 0u64..500, t in 0.0f64..5.0) {
        let g = gen_sk(n, seed).unwrap();
        let spec = diagonal_spectrum(&g).unwrap();
        let psi = evolve(&build_h1(&g).unwrap(), &plus_state(n).unwrap(), 0.2, 1e-12).unwrap();
        let before = measure(&psi, &spec).unwrap();
        let after = measure(&evolve(&build_hf(&g), &psi, t, 1e-12).unwrap(), &spec).unwrap();
        prop_assert!((before.ratio - after.ratio).abs() <= 1e-10);
        prop_assert!((before.pgs - after.pgs).abs() <= 1e-10);
        prop_assert!((before.sigma.unwrap() - after.sigma.unwrap()).abs() <= 1e-10);
    }
}

#[test]
fn krylov_agrees_with_dense_at_eight_qubits() {
    let g = gen_sk(8, 11).unwrap();
    let h = build_h1(&g).unwrap();
    let psi = plus_state(8).unwrap();
    let dense = h.to_dense().unwrap();
    for t in [0.05, 0.4, 1.7] {
        let out = evolve(&h, &psi, t, 1e-10).unwrap();
        let exact = common::evolve(&dense, &to_cvec(&psi), t);
        assert!((to_cvec(&out) - exact).norm() <= 1e-9, "t = {t}");
    }
}

#[test]
fn single_qubit_phase() {
    let z = PauliSum::from_terms(1, [(PauliString::parse("Z").unwrap(), 1.0)]).unwrap();
    let out = evolve(&z, &plus_state(1).unwrap(), std::f64::consts::FRAC_PI_2, 1e-12).unwrap();
    let a = std::f64::consts::FRAC_1_SQRT_2;
    assert!((out.amplitudes()[0] - c(0.0, -a)).norm() < 1e-12);
    assert!((out.amplitudes()[1] - c(0.0, a)).norm() < 1e-12);
    let same = evolve(&z, &plus_state(1).unwrap(), 0.0, 1e-12).unwrap();
    assert_eq!(same, plus_state(1).unwrap());
}

#[test]
fn plus_state_metrics_on_ring() {
    let g = gen_ring(4).unwrap();
    let m = measure(&plus_state(4).unwrap(), &diagonal_spectrum(&g).unwrap()).unwrap();
    assert!(m.ratio.abs() < 1e-15);
    assert!((m.pgs - 2.0 / 16.0).abs() < 1e-15);
    // The mean of E² is the number of ZZ terms.
    assert!((m.sigma.unwrap() - 0.5).abs() < 1e-15);
    let ground = StateVector::basis(4, 0b0101).unwrap();
    let m = measure(&ground, &diagonal_spectrum(&g).unwrap()).unwrap();
    assert_eq!((m.ratio, m.pgs, m.sigma.unwrap()), (1.0, 1.0, 0.0));
}

#[test]
fn ring_four_energy_matches_closed_form() {
    let g = gen_ring(4).unwrap();
    let out = evolve(&build_h1(&g).unwrap(), &plus_state(4).unwrap(), 0.23, 1e-12).unwrap();
    let e = common::expectation_diag(&to_cvec(&out), &dense_energies(&g));
    assert!((e - ring_metrics(4, 0.23).unwrap().energy_expectation).abs() < 1e-8);
}

#[test]
fn sweep_matches_single_shot_evolution() {
    let g = gen_ring(8).unwrap();
    let spec = diagonal_spectrum(&g).unwrap();
    let h = build_h1(&g).unwrap();
    let sweep = time_sweep(&h, &spec, &TimeGrid::new(0.0, 0.5, 50).unwrap(), 1e-12).unwrap();
    assert_eq!(sweep[0].1.ratio, 0.0);
    assert!(sweep[1].1.ratio > sweep[0].1.ratio);
    for &(t, m) in sweep.iter().step_by(7) {
        let single = measure(&evolve(&h, &plus_state(8).unwrap(), t, 1e-12).unwrap(), &spec).unwrap();
        assert!((single.ratio - m.ratio).abs() <= 1e-9 && (single.pgs - m.pgs).abs() <= 1e-9, "t = {t}");
    }
    let flat = time_sweep(&h, &spec, &TimeGrid::new(0.0, 0.0, 2).unwrap(), 1e-12).unwrap();
    assert_eq!(flat[0], flat[1]);
}

#[test]
fn ring_ten_optimum_and_objectives() {
    let g = gen_ring(10).unwrap();
    let spec = diagonal_spectrum(&g).unwrap();
    let h = build_h1(&g).unwrap();
    let tau = 2.0 * std::f64::consts::PI;
    let by_ratio = optimize_time(&h, &spec, (0.0, tau), 1000, Objective::Ratio).unwrap();
    let analytic = ring_optimize(10, (0.0, tau), 1000, Objective::Ratio).unwrap();
    assert!((by_ratio.t_star - analytic.t_star).abs() < 1e-6);
    assert!((by_ratio.metrics.ratio - analytic.metrics.ratio).abs() < 1e-9);
    assert!((by_ratio.t_star - 0.23).abs() < 0.01 && (by_ratio.metrics.ratio - 0.58).abs() < 0.01);
    let by_pgs = optimize_time(&h, &spec, (0.0, tau), 1000, Objective::Pgs).unwrap();
    assert!(by_pgs.t_star > by_ratio.t_star);
    let short = optimize_time(&h, &spec, (0.0, 0.1), 100, Objective::Ratio).unwrap();
    assert!(short.t_star <= 0.1 && short.constrained);
    assert!(!by_ratio.constrained);
}

/// Energy-normalized `-i[H_i, e^{iH₁T} H_f e^{-iH₁T}]`, built densely.
fn dense_qz_exp(g: &Graph, t: f64) -> CMat {
    let n = g.n();
    let hf = common::diag(&dense_energies(g));
    let hi = common::driver(n);
    let h1 = common::commutator(&hi, &hf) * c(0.0, -0.5);
    let u = (&h1 * c(0.0, -t)).exp();
    let rotated = u.adjoint() * hf * &u;
    let h = common::commutator(&hi, &rotated) * c(0.0, -1.0);
    let norm_sq = (&h * &h).trace().re / (1u64 << n) as f64;
    h * c((n as f64 / norm_sq).sqrt(), 0.0)
}

#[test]
fn exponential_correction_matches_dense() {
    let g = gen_ring(6).unwrap();
    let psi = plus_state(6).unwrap();
    let out = evolve_qz_exp(&g, 0.1, &psi, 1e-11).unwrap();
    let exact = common::evolve(&dense_qz_exp(&g, 0.1), &to_cvec(&psi), 0.1);
    assert!((to_cvec(&out) - exact).norm() <= 1e-8);
    assert_eq!(evolve_qz_exp(&g, 0.0, &psi, 1e-11).unwrap(), psi);
}

#[test]
fn exponential_correction_is_unitary() {
    let g = gen_sk(8, 5).unwrap();
    let out = evolve_qz_exp(&g, 0.2, &plus_state(8).unwrap(), 1e-10).unwrap();
    assert!((out.norm() - 1.0).abs() <= 1e-10);
}

#[test]
fn normalization_rescales_time() {
    let g = gen_sk(6, 2).unwrap();
    let h = build_h1(&g).unwrap();
    let hn = normalize_energy(&h, 6).unwrap();
    let f = (6.0 / h.norm_sq()).sqrt();
    let psi = plus_state(6).unwrap();
    let a = evolve(&h, &psi, 0.3 * f, 1e-12).unwrap();
    let b = evolve(&hn, &psi, 0.3, 1e-12).unwrap();
    assert!(a.fidelity(&b).unwrap() > 1.0 - 1e-12);
}
