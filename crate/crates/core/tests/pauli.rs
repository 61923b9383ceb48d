mod common;

use common::c;
use proptest::prelude::*;
use xferopt::instances::{gen_ring, gen_sk, Graph};
use xferopt::pauli::{
    build_h1, build_hf, build_hi, build_hqz_series, commutator_over_2i, normalize_energy, trace_product, PauliString,
    PauliSum,
};

fn sum_strategy(n: usize) -> impl Strategy<Value = Vec<(String, f64)>> {
    let letter = prop_oneof![Just('I'), Just('X'), Just('Y'), Just('Z')];
    let word = proptest::collection::vec(letter, n).prop_map(|v| v.into_iter().collect::<String>());
    proptest::collection::vec((word, -2.0f64..2.0), 1..8)
}

fn to_sum(n: usize, terms: &[(String, f64)]) -> PauliSum {
    PauliSum::from_terms(n, terms.iter().map(|(w, k)| (PauliString::parse(w).unwrap(), *k))).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn commutator_is_antisymmetric((a, b) in (1usize..=4).prop_flat_map(|n| (sum_strategy(n), sum_strategy(n)))) {
        let n = a[0].0.len();
        let (a, b) = (to_sum(n, &a), to_sum(n, &b));
        let ab = commutator_over_2i(&a, &b).unwrap();
        let ba = commutator_over_2i(&b, &a).unwrap();
        for (p, k) in ab.iter() {
            // Summation order differs between the two products.
            prop_assert!((k + ba.coefficient(p)).abs() <= 1e-14 * k.abs().max(1.0), "{k} vs {}", ba.coefficient(p));
        }
        prop_assert_eq!(ab.len(), ba.len());
    }

    #[test]
    fn jacobi_identity((a, b, x) in (1usize..=4).prop_flat_map(|n| (sum_strategy(n), sum_strategy(n), sum_strategy(n)))) {
        let n = a[0].0.len();
        let (a, b, x) = (to_sum(n, &a), to_sum(n, &b), to_sum(n, &x));
        let br = |p: &PauliSum, q: &PauliSum| commutator_over_2i(p, q).unwrap();
        let total = br(&a, &br(&b, &x)).add(&br(&b, &br(&x, &a))).unwrap().add(&br(&x, &br(&a, &b))).unwrap();
        prop_assert!(total.is_empty(), "left over: {:?}", total.iter().collect::<Vec<_>>());
    }

    #[test]
    fn dense_lowering_agrees(terms in (1usize..=6).prop_flat_map(sum_strategy)) {
        let n = terms[0].0.len();
        let s = to_sum(n, &terms);
        let diff = s.to_dense().unwrap() - common::dense_sum(n, &terms);
        prop_assert!(common::max_abs(&diff) <= 1e-12);
    }

    #[test]
    fn dense_commutators((a, b) in (1usize..=5).prop_flat_map(|n| (sum_strategy(n), sum_strategy(n)))) {
        let n = a[0].0.len();
        let (da, db) = (common::dense_sum(n, &a), common::dense_sum(n, &b));
        let (a, b) = (to_sum(n, &a), to_sum(n, &b));
        let comm = common::commutator(&da, &db) * c(0.0, -0.5);
        prop_assert!(common::max_abs(&(commutator_over_2i(&a, &b).unwrap().to_dense().unwrap() - comm)) <= 1e-12);
    }

    #[test]
    fn normalization_identity(terms in (1usize..=6).prop_flat_map(sum_strategy)) {
        let n = terms[0].0.len();
        let s = to_sum(n, &terms);
        prop_assume!(!s.is_empty());
        let norm = normalize_energy(&s, n).unwrap();
        prop_assert!((norm.norm_sq() - n as f64).abs() <= 1e-12);
        let twice = normalize_energy(&norm, n).unwrap();
        prop_assert!(twice.max_abs_diff(&norm) <= 1e-14);
    }

    #[test]
    fn h1_has_no_overlap_with_driver(seed in 0u64..500, n in 2usize..=7) {
        let g = gen_sk(n, seed).unwrap();
        let h1 = build_h1(&g).unwrap();
        prop_assert!(trace_product(&build_hi(n), &h1).unwrap().abs() <= 1e-12);
        prop_assert!(trace_product(&build_hf(&g), &h1).unwrap().abs() <= 1e-12);
    }
}

#[test]
fn ring_h1_closed_form() {
    for n in [4, 5, 8] {
        let h1 = build_h1(&gen_ring(n).unwrap()).unwrap();
        let mut expect = PauliSum::zero(n);
        for j in 0..n {
            let k = (j + 1) % n;
            expect.add_term(PauliString::parse(&common::site_word(n, &[(j, 'Y'), (k, 'Z')])).unwrap(), 1.0).unwrap();
            expect.add_term(PauliString::parse(&common::site_word(n, &[(j, 'Z'), (k, 'Y')])).unwrap(), 1.0).unwrap();
        }
        assert_eq!(h1, expect, "n = {n}");
    }
}

#[test]
fn sk3_commutator_matches_dense() {
    let g = gen_sk(3, 4).unwrap();
    let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
    let hf = common::diag(&common::ising_energies(3, &edges, g.biases()));
    let dense = common::commutator(&common::driver(3), &hf) * c(0.0, -0.5);
    assert!(common::max_abs(&(build_h1(&g).unwrap().to_dense().unwrap() - dense)) <= 1e-12);
}

#[test]
fn hf_examples() {
    let g = Graph::new(2, &[(0, 1, 0.5)], vec![-1.0, 2.0]).unwrap();
    let hf = build_hf(&g);
    assert_eq!(hf.coefficient(&PauliString::parse("ZZ").unwrap()), 0.5);
    assert_eq!(hf.coefficient(&PauliString::parse("ZI").unwrap()), -1.0);
    assert_eq!(hf.coefficient(&PauliString::parse("IZ").unwrap()), 2.0);
    assert_eq!(hf.len(), 3);
}

#[test]
fn driver_expectation_on_plus() {
    let plus = common::plus(5);
    let e = (plus.adjoint() * build_hi(5).to_dense().unwrap() * &plus)[(0, 0)];
    assert!((e.re + 5.0).abs() < 1e-12);
}

#[test]
fn normalization_examples() {
    let zz = PauliSum::from_terms(2, [(PauliString::parse("ZZ").unwrap(), 1.0)]).unwrap();
    assert!((normalize_energy(&zz, 2).unwrap().coefficient(&PauliString::parse("ZZ").unwrap()) - 2f64.sqrt()).abs() < 1e-15);
    let ring = normalize_energy(&build_h1(&gen_ring(6).unwrap()).unwrap(), 6).unwrap();
    assert!(ring.iter().all(|(_, k)| (k - 0.5f64.sqrt()).abs() < 1e-15));
}

/// `-i[H_i, H_f + iT[H₁, H_f]]` and its next order, built densely.
fn dense_series(g: &Graph, t: f64, order: u8) -> common::CMat {
    let n = g.n();
    let edges: Vec<_> = g.edges().iter().map(|e| (e.i, e.j, e.w)).collect();
    let hf = common::diag(&common::ising_energies(n, &edges, g.biases()));
    let hi = common::driver(n);
    let h1 = common::commutator(&hi, &hf) * c(0.0, -0.5);
    let c1 = common::commutator(&h1, &hf);
    let c2 = common::commutator(&h1, &c1);
    let mut w = hf.clone();
    if order >= 1 {
        w += c1 * c(0.0, t);
    }
    if order >= 2 {
        w += c2 * c(-t * t / 2.0, 0.0);
    }
    common::commutator(&hi, &w) * c(0.0, -1.0)
}

#[test]
fn qz_series_matches_dense_expansion() {
    let ring = gen_ring(4).unwrap();
    for order in 0..=2 {
        let s = build_hqz_series(&ring, 0.1, order).unwrap().to_dense().unwrap();
        assert!(common::max_abs(&(s - dense_series(&ring, 0.1, order))) <= 1e-12, "order {order}");
    }
    let sk = gen_sk(4, 2).unwrap();
    let s = build_hqz_series(&sk, 0.07, 2).unwrap().to_dense().unwrap();
    assert!(common::max_abs(&(s - dense_series(&sk, 0.07, 2))) <= 1e-12);
}

#[test]
fn qz_series_limits() {
    let g = gen_sk(5, 3).unwrap();
    let h1 = build_h1(&g).unwrap();
    assert!(build_hqz_series(&g, 0.4, 0).unwrap().max_abs_diff(&h1.scaled(2.0)) == 0.0);
    assert!(build_hqz_series(&g, 0.0, 2).unwrap().max_abs_diff(&build_hqz_series(&g, 0.0, 0).unwrap()) == 0.0);
}
