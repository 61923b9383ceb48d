use std::collections::BTreeMap;

use num_complex::Complex64;

use super::state::check_cap;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// Hermitian operator acting on `2ⁿ` amplitudes.
pub trait LinearOperator: Sync {
    fn dim(&self) -> usize;

    /// Writes `A·x` into `y`.
    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()>;
}

/// Above this many stored coefficients, groups fall back to on-the-fly signs.
const TABLE_BUDGET: usize = 1 << 25;

#[derive(Debug, Clone)]
enum Coefs {
    /// `coef[a]` multiplies `psi[a ^ x]`.
    Table(Vec<Complex64>),
    /// `(z mask, i^{#Y}·c)` pairs, signs evaluated per amplitude.
    Terms(Vec<(u64, Complex64)>),
}

#[derive(Debug, Clone)]
struct Group {
    x: u64,
    coefs: Coefs,
}

/// A `PauliSum` grouped by x-mask for matrix-free products.
///
/// `P|b> = i^{#Y} (-1)^{|b & z|} |b ^ x>`, so every string sharing an x-mask
/// contributes to the same permutation and only the per-amplitude weight
/// differs.
#[derive(Debug, Clone)]
pub struct CompiledOperator {
    n: usize,
    groups: Vec<Group>,
}

impl CompiledOperator {
    pub fn new(h: &PauliSum) -> Result<Self> {
        check_cap(h.n())?;
        let n = h.n();
        let mut by_mask: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for (p, c) in h.iter() {
            let (re, im) = p.apply_phase(0).as_pair();
            by_mask
                .entry(p.x_mask())
                .or_default()
                .push((p.z_mask(), Complex64::new(re as f64 * c, im as f64 * c)));
        }
        let tabulate = by_mask.len() << n <= TABLE_BUDGET;
        let groups = by_mask
            .into_iter()
            .map(|(x, terms)| Group {
                x,
                coefs: if tabulate { Coefs::Table(tabulate_group(n, x, &terms)) } else { Coefs::Terms(terms) },
            })
            .collect();
        Ok(Self { n, groups })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn group_count(&self) -> usize {
        self.groups.len()
    }

    /// `Σ w_k A_k` over operators on the same register.
    pub fn combine(parts: &[(&CompiledOperator, f64)]) -> Result<Self> {
        let n = parts.first().map(|(op, _)| op.n).ok_or_else(|| Error::Parameter("nothing to combine".into()))?;
        let dim = 1usize << n;
        let mut tables: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
        let mut terms: BTreeMap<u64, Vec<(u64, Complex64)>> = BTreeMap::new();
        for (op, w) in parts {
            if op.n != n {
                return Err(Error::Dimension { expected: n, found: op.n });
            }
            for g in &op.groups {
                match &g.coefs {
                    Coefs::Table(t) => {
                        let acc = tables.entry(g.x).or_insert_with(|| vec![Complex64::new(0.0, 0.0); dim]);
                        for (a, c) in acc.iter_mut().zip(t) {
                            *a += c * *w;
                        }
                    }
                    Coefs::Terms(ts) => {
                        terms.entry(g.x).or_default().extend(ts.iter().map(|&(z, c)| (z, c * *w)));
                    }
                }
            }
        }
        let mut groups: Vec<Group> = tables.into_iter().map(|(x, t)| Group { x, coefs: Coefs::Table(t) }).collect();
        groups.extend(terms.into_iter().map(|(x, t)| Group { x, coefs: Coefs::Terms(t) }));
        Ok(Self { n, groups })
    }

    pub fn expectation(&self, psi: &[Complex64]) -> Result<f64> {
        let mut y = vec![Complex64::new(0.0, 0.0); psi.len()];
        self.apply(psi, &mut y)?;
        Ok(super::state::inner(psi, &y).re)
    }
}

fn tabulate_group(n: usize, x: u64, terms: &[(u64, Complex64)]) -> Vec<Complex64> {
    let dim = 1usize << n;
    let mut out = vec![Complex64::new(0.0, 0.0); dim];
    for &(z, c) in terms {
        for (a, o) in out.iter_mut().enumerate() {
            let src = a as u64 ^ x;
            if (src & z).count_ones() & 1 == 0 {
                *o += c;
            } else {
                *o -= c;
            }
        }
    }
    out
}

impl LinearOperator for CompiledOperator {
    fn dim(&self) -> usize {
        1 << self.n
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        let dim = self.dim();
        if x.len() != dim || y.len() != dim {
            return Err(Error::Dimension { expected: dim, found: x.len().min(y.len()) });
        }
        y.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
        for g in &self.groups {
            let gx = g.x as usize;
            match &g.coefs {
                Coefs::Table(t) => {
                    if gx == 0 {
                        for ((yv, c), xv) in y.iter_mut().zip(t).zip(x) {
                            *yv += c * xv;
                        }
                    } else {
                        for (a, (yv, c)) in y.iter_mut().zip(t).enumerate() {
                            *yv += c * x[a ^ gx];
                        }
                    }
                }
                Coefs::Terms(ts) => {
                    for (a, yv) in y.iter_mut().enumerate() {
                        let src = a ^ gx;
                        let mut c = Complex64::new(0.0, 0.0);
                        for &(z, w) in ts {
                            if (src as u64 & z).count_ones() & 1 == 0 {
                                c += w;
                            } else {
                                c -= w;
                            }
                        }
                        *yv += c * x[src];
                    }
                }
            }
        }
        Ok(())
    }
}

/// Real diagonal operator, such as `H_f` from a spectrum.
#[derive(Debug, Clone)]
pub struct DiagonalOperator {
    pub diag: Vec<f64>,
}

impl LinearOperator for DiagonalOperator {
    fn dim(&self) -> usize {
        self.diag.len()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        if x.len() != self.diag.len() || y.len() != self.diag.len() {
            return Err(Error::Dimension { expected: self.diag.len(), found: x.len() });
        }
        for ((yv, xv), d) in y.iter_mut().zip(x).zip(&self.diag) {
            *yv = xv * *d;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::PauliString;

    #[test]
    fn matches_dense_lowering() {
        let terms = [("XYZI", 0.3), ("YYII", -1.1), ("ZIZZ", 0.7), ("IXIY", 0.25), ("XYIZ", 0.5)];
        let h = PauliSum::from_terms(4, terms.iter().map(|(w, c)| (PauliString::parse(w).unwrap(), *c))).unwrap();
        let dense = h.to_dense().unwrap();
        let op = CompiledOperator::new(&h).unwrap();
        let x: Vec<Complex64> = (0..16).map(|k| Complex64::new((k as f64).sin(), (k as f64 * 0.7).cos())).collect();
        let mut y = vec![Complex64::new(0.0, 0.0); 16];
        op.apply(&x, &mut y).unwrap();
        for r in 0..16 {
            let want: Complex64 = (0..16).map(|c| dense[(r, c)] * x[c]).sum();
            assert!((want - y[r]).norm() < 1e-13);
        }
        let both = CompiledOperator::combine(&[(&op, 2.0), (&op, -0.5)]).unwrap();
        let mut y2 = vec![Complex64::new(0.0, 0.0); 16];
        both.apply(&x, &mut y2).unwrap();
        for r in 0..16 {
            assert!((y2[r] - y[r] * 1.5).norm() < 1e-13);
        }
    }

    #[test]
    fn term_fallback_agrees_with_tables() {
        let h = PauliSum::from_terms(3, [("XZY", 0.4), ("XIZ", -0.2), ("IZY", 1.0)].iter().map(|(w, c)| (PauliString::parse(w).unwrap(), *c))).unwrap();
        let table = CompiledOperator::new(&h).unwrap();
        let mut fallback = table.clone();
        for g in &mut fallback.groups {
            let terms: Vec<(u64, Complex64)> = h
                .iter()
                .filter(|(p, _)| p.x_mask() == g.x)
                .map(|(p, c)| {
                    let (re, im) = p.apply_phase(0).as_pair();
                    (p.z_mask(), Complex64::new(re as f64 * c, im as f64 * c))
                })
                .collect();
            g.coefs = Coefs::Terms(terms);
        }
        let x: Vec<Complex64> = (0..8).map(|k| Complex64::new(k as f64, 1.0)).collect();
        let (mut a, mut b) = (vec![Complex64::default(); 8], vec![Complex64::default(); 8]);
        table.apply(&x, &mut a).unwrap();
        fallback.apply(&x, &mut b).unwrap();
        for k in 0..8 {
            assert!((a[k] - b[k]).norm() < 1e-13);
        }
    }
}
