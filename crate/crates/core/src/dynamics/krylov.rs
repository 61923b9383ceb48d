//! Lanczos approximation of `e^{-iHt} v` for Hermitian `H`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use super::operator::LinearOperator;
use super::state::{inner, norm};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KrylovOptions {
    /// Largest Krylov subspace built per substep.
    pub max_dim: usize,
    /// Target error on the whole evolution.
    pub tol: f64,
    /// Ceiling on accepted substeps.
    pub max_substeps: usize,
}

impl Default for KrylovOptions {
    fn default() -> Self {
        Self { max_dim: 30, tol: 1e-10, max_substeps: 100_000 }
    }
}

impl KrylovOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }
}

/// Tridiagonal eigen-decomposition reused for several trial step sizes.
struct Projected {
    values: Vec<f64>,
    /// `first[l] = Q[0,l]`, `last[l] = Q[k-1,l]`.
    first: Vec<f64>,
    last: Vec<f64>,
    vectors: DMatrix<f64>,
}

impl Projected {
    fn new(alpha: &[f64], beta: &[f64]) -> Self {
        let k = alpha.len();
        let mut t = DMatrix::<f64>::zeros(k, k);
        for i in 0..k {
            t[(i, i)] = alpha[i];
            if i + 1 < k {
                t[(i, i + 1)] = beta[i];
                t[(i + 1, i)] = beta[i];
            }
        }
        let eig = SymmetricEigen::new(t);
        let first = (0..k).map(|l| eig.eigenvectors[(0, l)]).collect();
        let last = (0..k).map(|l| eig.eigenvectors[(k - 1, l)]).collect();
        Self { values: eig.eigenvalues.iter().copied().collect(), first, last, vectors: eig.eigenvectors }
    }

    /// Below this the eigen-sum in `tail` is pure cancellation noise.
    fn tail_floor(&self) -> f64 {
        8.0 * self.values.len() as f64 * f64::EPSILON
    }

    /// Last entry of `e^{-iTs} e_1`.
    fn tail(&self, s: f64) -> f64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for l in 0..self.values.len() {
            acc += Complex64::from_polar(self.last[l] * self.first[l], -self.values[l] * s);
        }
        acc.norm()
    }

    /// `e^{-iTs} e_1`.
    fn coefficients(&self, s: f64) -> Vec<Complex64> {
        let k = self.values.len();
        let phases: Vec<Complex64> =
            (0..k).map(|l| Complex64::from_polar(self.first[l], -self.values[l] * s)).collect();
        (0..k).map(|m| (0..k).map(|l| phases[l] * self.vectors[(m, l)]).sum()).collect()
    }
}

/// `e^{-i A t} v` with adaptive substeps. Negative `t` evolves backwards.
pub fn expm_action(op: &dyn LinearOperator, v: &[Complex64], t: f64, opts: &KrylovOptions) -> Result<Vec<Complex64>> {
    let dim = op.dim();
    if v.len() != dim {
        return Err(Error::Dimension { expected: dim, found: v.len() });
    }
    if !(opts.tol > 0.0) || opts.max_dim < 2 {
        return Err(Error::Parameter("krylov needs tol > 0 and max_dim >= 2".into()));
    }
    let total = t.abs();
    let sign = t.signum();
    let mut w = v.to_vec();
    if total == 0.0 {
        return Ok(w);
    }
    let mut done = 0.0;
    let mut substeps = 0;
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(opts.max_dim + 1);
    let mut scratch = vec![Complex64::new(0.0, 0.0); dim];
    while done < total {
        substeps += 1;
        if substeps > opts.max_substeps {
            return Err(Error::Convergence { residual: f64::NAN });
        }
        let remaining = total - done;
        let beta0 = norm(&w);
        if beta0 == 0.0 {
            return Ok(w);
        }
        basis.clear();
        basis.push(w.iter().map(|x| x / beta0).collect());
        let mut alpha = Vec::new();
        let mut beta = Vec::new();
        let mut scale = 0.0f64;
        let budget = |s: f64| opts.tol * s / total;
        let mut accepted: Option<(Projected, f64)> = None;
        for j in 0..opts.max_dim {
            op.apply(&basis[j], &mut scratch)?;
            let a = inner(&basis[j], &scratch).re;
            for (u, q) in scratch.iter_mut().zip(&basis[j]) {
                *u -= q * a;
            }
            if j > 0 {
                let b = beta[j - 1];
                for (u, q) in scratch.iter_mut().zip(&basis[j - 1]) {
                    *u -= q * b;
                }
            }
            // Full reorthogonalization keeps the basis unitary to round-off.
            for q in &basis {
                let c = inner(q, &scratch);
                for (u, qv) in scratch.iter_mut().zip(q) {
                    *u -= qv * c;
                }
            }
            alpha.push(a);
            let b = norm(&scratch);
            scale = scale.max(a.abs() + b + beta.last().copied().unwrap_or(0.0));
            if b <= 1e-13 * scale.max(1e-300) {
                // Invariant subspace: the projection is exact for any step.
                accepted = Some((Projected::new(&alpha, &beta), remaining));
                break;
            }
            let proj = Projected::new(&alpha, &beta);
            let tail = proj.tail(remaining);
            if beta0 * b * tail <= budget(remaining) || tail <= proj.tail_floor() {
                accepted = Some((proj, remaining));
                break;
            }
            if j + 1 == opts.max_dim {
                let mut s = remaining;
                while beta0 * b * proj.tail(s) > budget(s) && proj.tail(s) > proj.tail_floor() {
                    s *= 0.5;
                    if s < total * 1e-14 {
                        return Err(Error::Convergence { residual: beta0 * b * proj.tail(s) });
                    }
                }
                accepted = Some((proj, s));
                break;
            }
            beta.push(b);
            basis.push(scratch.iter().map(|x| x / b).collect());
        }
        let (proj, s) = accepted.expect("loop always accepts or errors");
        let coefs = proj.coefficients(sign * s);
        w.iter_mut().for_each(|x| *x = Complex64::new(0.0, 0.0));
        for (c, q) in coefs.iter().zip(&basis) {
            let c = c * beta0;
            for (x, qv) in w.iter_mut().zip(q) {
                *x += c * qv;
            }
        }
        done += s;
    }
    Ok(w)
}
