mod common;

use proptest::prelude::*;
use xferopt::dynamics::{evolve, plus_state};
use xferopt::instances::{diagonal_spectrum, gen_ring, gen_sk, Graph};
use xferopt::pauli::{build_hf, build_hi};
use xferopt::qaoa::{edge_qaoa, qaoa_optimize, qaoa_state, ring_subgraph_report, BETA_MAX, GAMMA_MAX};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn phase_layer_keeps_magnitudes(seed in 0u64..500, gammas in proptest::collection::vec(0.0f64..GAMMA_MAX, 1..=3)) {
        let g = gen_sk(6, seed).unwrap();
        let betas = vec![0.0; gammas.len()];
        let s = qaoa_state(&g, &gammas, &betas).unwrap();
        for a in s.amplitudes() {
            prop_assert!((a.norm_sqr() - 1.0 / 64.0).abs() <= 1e-15);
        }
    }

    #[test]
    fn state_is_normalized(seed in 0u64..500, gamma in 0.0f64..GAMMA_MAX, beta in 0.0f64..BETA_MAX, p in 1usize..=3) {
        let g = gen_sk(8, seed).unwrap();
        let s = qaoa_state(&g, &vec![gamma; p], &vec![beta; p]).unwrap();
        prop_assert!((s.norm() - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn state_matches_independent_layers(seed in 0u64..500, gamma in 0.0f64..GAMMA_MAX, beta in 0.0f64..BETA_MAX) {
        let g = gen_sk(5, seed).unwrap();
        let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
        let energies = common::ising_energies(5, &edges, g.biases());
        let oracle = common::qaoa_state(5, &energies, &[gamma, 0.3], &[beta, 0.7]);
        let s = qaoa_state(&g, &[gamma, 0.3], &[beta, 0.7]).unwrap();
        for (a, b) in s.amplitudes().iter().zip(&oracle) {
            prop_assert!((a - b).norm() <= 1e-12);
        }
    }
}

#[test]
fn zero_angles_give_plus_state() {
    let g = gen_ring(4).unwrap();
    let s = qaoa_state(&g, &[0.0], &[0.0]).unwrap();
    assert!(s.fidelity(&plus_state(4).unwrap()).unwrap() > 1.0 - 1e-15);
    assert!(qaoa_state(&g, &[0.1, 0.2], &[0.3]).is_err());
    assert!(qaoa_state(&g, &[], &[]).is_err());
}

#[test]
fn layers_match_generic_evolution() {
    let g = gen_ring(4).unwrap();
    let psi = evolve(&build_hf(&g), &plus_state(4).unwrap(), 0.5, 1e-13).unwrap();
    let psi = evolve(&build_hi(4), &psi, 0.3, 1e-13).unwrap();
    let s = qaoa_state(&g, &[0.5], &[0.3]).unwrap();
    for (a, b) in s.amplitudes().iter().zip(psi.amplitudes()) {
        assert!((a - b).norm() <= 1e-10);
    }
}

#[test]
fn ring_ten_depth_one() {
    let g = gen_ring(10).unwrap();
    let r = qaoa_optimize(&g, &diagonal_spectrum(&g).unwrap(), 1, 60, true).unwrap();
    assert!((r.ratio - 0.5).abs() < 1e-3, "ratio {}", r.ratio);
    assert!((r.time - r.gammas[0] - r.betas[0]).abs() < 1e-15);
    assert!(!r.degenerate);
}

#[test]
fn depth_one_is_size_independent_on_rings() {
    let local = ring_subgraph_report(1, 60).unwrap();
    assert!((local.ratio - 0.5).abs() < 1e-6);
    for n in [8, 10, 12] {
        let g = gen_ring(n).unwrap();
        let r = qaoa_optimize(&g, &diagonal_spectrum(&g).unwrap(), 1, 60, true).unwrap();
        assert!((r.ratio - local.ratio).abs() < 1e-6, "n = {n}: {} vs {}", r.ratio, local.ratio);
    }
}

#[test]
fn depth_two_ring_constant() {
    let r = ring_subgraph_report(2, 40).unwrap();
    assert!((r.ratio - 2.0 / 3.0).abs() < 1e-4, "ratio {}", r.ratio);
}

#[test]
fn complete_graph_matches_fine_grid() {
    let g = Graph::unweighted(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let spec = diagonal_spectrum(&g).unwrap();
    let r = qaoa_optimize(&g, &spec, 1, 60, true).unwrap();
    let energy = |x: &[f64]| {
        let psi = common::qaoa_state(4, &spec.energies, &[x[0]], &[x[1]]);
        psi.iter().zip(&spec.energies).map(|(a, e)| a.norm_sqr() * e).sum::<f64>()
    };
    let (_, best) = common::grid_then_polish(&energy, &[GAMMA_MAX, BETA_MAX], 200);
    assert!((r.energy - best).abs() < 1e-4, "{} vs {best}", r.energy);
}

#[test]
fn triangle_free_edge_cut() {
    // Two adjacent degree-3 vertices with four distinct outer neighbours.
    let g = Graph::unweighted(6, &[(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
    let r = edge_qaoa(&g, (0, 1), 1, 60).unwrap();
    assert!(r.cut_fraction >= 0.6924 - 1e-3, "cut {}", r.cut_fraction);
    assert!((r.cut_fraction - 0.6925).abs() < 1e-3);
    assert!(edge_qaoa(&g, (0, 0), 1, 60).is_err());
}
