//! Independent dense oracles shared by the integration tests. Nothing here
//! calls into the crate's simulation code.
#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn letter(ch: char) -> CMat {
    let z = c(0.0, 0.0);
    let o = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    match ch {
        'I' => CMat::from_row_slice(2, 2, &[o, z, z, o]),
        'X' => CMat::from_row_slice(2, 2, &[z, o, o, z]),
        'Y' => CMat::from_row_slice(2, 2, &[z, -i, i, z]),
        'Z' => CMat::from_row_slice(2, 2, &[o, z, z, -o]),
        _ => panic!("bad letter {ch}"),
    }
}

/// Character `k` acts on qubit `k`, the `k`-th least significant bit.
pub fn word(w: &str) -> CMat {
    let mut m = CMat::identity(1, 1);
    for ch in w.chars() {
        m = letter(ch).kronecker(&m);
    }
    m
}

/// Dense matrix of `Σ c_k word_k`.
pub fn dense_sum(n: usize, terms: &[(String, f64)]) -> CMat {
    let mut m = CMat::zeros(1 << n, 1 << n);
    for (w, k) in terms {
        m += word(w) * c(*k, 0.0);
    }
    m
}

pub fn site_word(n: usize, sites: &[(usize, char)]) -> String {
    let mut w = vec!['I'; n];
    for &(k, ch) in sites {
        w[k] = ch;
    }
    w.into_iter().collect()
}

/// `-Σ X_k`.
pub fn driver(n: usize) -> CMat {
    let terms: Vec<_> = (0..n).map(|k| (site_word(n, &[(k, 'X')]), -1.0)).collect();
    dense_sum(n, &terms)
}

/// Diagonal Ising energies with spin `+1` on bit 0.
pub fn ising_energies(n: usize, edges: &[(usize, usize, f64)], biases: &[f64]) -> Vec<f64> {
    let spin = |b: usize, k: usize| if (b >> k) & 1 == 0 { 1.0 } else { -1.0 };
    (0..1usize << n)
        .map(|b| {
            edges.iter().map(|&(i, j, w)| w * spin(b, i) * spin(b, j)).sum::<f64>()
                + biases.iter().enumerate().map(|(k, h)| h * spin(b, k)).sum::<f64>()
        })
        .collect()
}

pub fn diag(values: &[f64]) -> CMat {
    CMat::from_diagonal(&CVec::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0))))
}

pub fn plus(n: usize) -> CVec {
    let a = (1.0 / (1u64 << n) as f64).sqrt();
    CVec::from_element(1 << n, c(a, 0.0))
}

/// `e^{-iHt} ψ` through the dense matrix exponential.
pub fn evolve(h: &CMat, psi: &CVec, t: f64) -> CVec {
    (h * c(0.0, -t)).exp() * psi
}

pub fn expectation_diag(psi: &CVec, energies: &[f64]) -> f64 {
    psi.iter().zip(energies).map(|(a, e)| a.norm_sqr() * e).sum()
}

pub fn ground_probability(psi: &CVec, energies: &[f64]) -> f64 {
    let e_min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    psi.iter().zip(energies).filter(|(_, &e)| e <= e_min + 1e-9).map(|(a, _)| a.norm_sqr()).sum()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Plain QAOA state `Π e^{-iβ_k Σ X} e^{-iγ_k H_f} |+>`, one qubit rotation
/// at a time.
pub fn qaoa_state(n: usize, energies: &[f64], gammas: &[f64], betas: &[f64]) -> Vec<Complex64> {
    let mut psi = vec![c((1.0 / (1u64 << n) as f64).sqrt(), 0.0); 1 << n];
    for (g, b) in gammas.iter().zip(betas) {
        for (a, e) in psi.iter_mut().zip(energies) {
            *a *= Complex64::from_polar(1.0, -g * e);
        }
        // e^{-iβ(-X)} = cos β + i sin β X per qubit.
        let (s, co) = b.sin_cos();
        for k in 0..n {
            let bit = 1 << k;
            for x in 0..psi.len() {
                if x & bit == 0 {
                    let (u, v) = (psi[x], psi[x | bit]);
                    psi[x] = u * co + v * c(0.0, s);
                    psi[x | bit] = v * co + u * c(0.0, s);
                }
            }
        }
    }
    psi
}

/// Minimum of `f` over a uniform grid on the box, then coordinate search
/// with shrinking steps from the best grid point.
pub fn grid_then_polish(f: &dyn Fn(&[f64]) -> f64, hi: &[f64], points: usize) -> (Vec<f64>, f64) {
    let d = hi.len();
    let mut best = (vec![0.0; d], f64::INFINITY);
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    'outer: loop {
        for k in 0..d {
            x[k] = hi[k] * idx[k] as f64 / points as f64;
        }
        let v = f(&x);
        if v < best.1 {
            best = (x.clone(), v);
        }
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < points {
                continue 'outer;
            }
            idx[k] = 0;
        }
        break;
    }
    let mut step: Vec<f64> = hi.iter().map(|h| h / points as f64).collect();
    while step.iter().any(|s| *s > 1e-9) {
        let mut improved = false;
        for k in 0..d {
            for dir in [-1.0, 1.0] {
                let mut y = best.0.clone();
                y[k] += dir * step[k];
                let v = f(&y);
                if v < best.1 - 1e-15 {
                    best = (y, v);
                    improved = true;
                }
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
    best
}
