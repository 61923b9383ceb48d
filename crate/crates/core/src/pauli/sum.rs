use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::string::{mul_unchecked, PauliString};
use crate::error::{Error, Result};

/// Coefficients at or below this magnitude are removed on simplification.
pub const DROP_TOL: f64 = 1e-12;

/// Largest register `to_dense` will lower.
pub const DENSE_CAP: usize = 12;

/// Real linear combination of Pauli strings, kept in canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliSum {
    pub fn zero(n: usize) -> Self {
        Self { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (PauliString, f64)>) -> Result<Self> {
        let mut s = Self::zero(n);
        for (p, c) in terms {
            s.add_term(p, c)?;
        }
        s.simplify();
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PauliString, f64)> + '_ {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(p).copied().unwrap_or(0.0)
    }

    /// Accumulates without dropping small coefficients; call `simplify` after.
    pub fn add_term(&mut self, p: PauliString, c: f64) -> Result<()> {
        if p.n() != self.n {
            return Err(Error::Dimension { expected: self.n, found: p.n() });
        }
        *self.terms.entry(p).or_insert(0.0) += c;
        Ok(())
    }

    pub fn simplify(&mut self) {
        self.terms.retain(|_, c| c.abs() > DROP_TOL);
    }

    pub fn scaled(&self, f: f64) -> Self {
        let mut s = Self { n: self.n, terms: self.terms.iter().map(|(p, c)| (*p, c * f)).collect() };
        s.simplify();
        s
    }

    /// `self + f·other`.
    pub fn add_scaled(&self, other: &PauliSum, f: f64) -> Result<Self> {
        check_n(self, other)?;
        let mut s = self.clone();
        for (p, c) in other.iter() {
            *s.terms.entry(*p).or_insert(0.0) += f * c;
        }
        s.simplify();
        Ok(s)
    }

    pub fn add(&self, other: &PauliSum) -> Result<Self> {
        self.add_scaled(other, 1.0)
    }

    pub fn sub(&self, other: &PauliSum) -> Result<Self> {
        self.add_scaled(other, -1.0)
    }

    /// Σ c², which equals `(1/2ⁿ) Tr(H²)`.
    pub fn norm_sq(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }

    pub fn max_abs_diff(&self, other: &PauliSum) -> f64 {
        let mut m: f64 = 0.0;
        for (p, c) in self.iter() {
            m = m.max((c - other.coefficient(p)).abs());
        }
        for (p, c) in other.iter() {
            if !self.terms.contains_key(p) {
                m = m.max(c.abs());
            }
        }
        m
    }

    /// Number of distinct x-masks, the cost driver of state-vector products.
    pub fn x_mask_count(&self) -> usize {
        let mut masks: Vec<u64> = self.terms.keys().map(|p| p.x_mask()).collect();
        masks.sort_unstable();
        masks.dedup();
        masks.len()
    }

    /// Operator product, defined only when the result is Hermitian (for
    /// example powers of a diagonal sum).
    pub fn mul(&self, other: &PauliSum) -> Result<Self> {
        check_n(self, other)?;
        let mut re: BTreeMap<PauliString, f64> = BTreeMap::new();
        let mut im: BTreeMap<PauliString, f64> = BTreeMap::new();
        for (p, a) in self.iter() {
            for (q, b) in other.iter() {
                let (ph, r) = mul_unchecked(p, q);
                let (pr, pi) = ph.as_pair();
                if pr != 0 {
                    *re.entry(r).or_insert(0.0) += pr as f64 * a * b;
                } else {
                    *im.entry(r).or_insert(0.0) += pi as f64 * a * b;
                }
            }
        }
        let residue = im.values().fold(0.0f64, |m, c| m.max(c.abs()));
        if residue > DROP_TOL {
            return Err(Error::Hermiticity(residue));
        }
        let mut s = Self { n: self.n, terms: re };
        s.simplify();
        Ok(s)
    }

    pub fn pow(&self, m: u32) -> Result<Self> {
        let mut out = PauliSum::from_terms(self.n, [(PauliString::identity(self.n), 1.0)])?;
        for _ in 0..m {
            out = out.mul(self)?;
        }
        Ok(out)
    }

    /// Lowers to a dense `2ⁿ × 2ⁿ` matrix.
    pub fn to_dense(&self) -> Result<DMatrix<Complex64>> {
        if self.n > DENSE_CAP {
            return Err(Error::ResourceLimit { what: "dense qubits", requested: self.n, limit: DENSE_CAP });
        }
        let dim = 1usize << self.n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        for (p, c) in self.iter() {
            for b in 0..dim {
                let (re, im) = p.apply_phase(b as u64).as_pair();
                let row = b ^ p.x_mask() as usize;
                m[(row, b)] += Complex64::new(re as f64 * c, im as f64 * c);
            }
        }
        Ok(m)
    }

    /// Parses the text format written by `Display`: one `±c.ccccc WORD` per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n = None;
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            let (c, w) = line
                .split_once(' ')
                .ok_or_else(|| Error::Parameter(format!("bad term line {line:?}")))?;
            let c: f64 = c.parse().map_err(|_| Error::Parameter(format!("bad coefficient {c:?}")))?;
            let p = PauliString::parse(w.trim())?;
            match n {
                None => n = Some(p.n()),
                Some(k) if k != p.n() => return Err(Error::Dimension { expected: k, found: p.n() }),
                _ => {}
            }
            terms.push((p, c));
        }
        let n = n.ok_or_else(|| Error::Parameter("empty pauli sum text".into()))?;
        Self::from_terms(n, terms)
    }
}

fn check_n(a: &PauliSum, b: &PauliSum) -> Result<()> {
    if a.n != b.n {
        return Err(Error::Dimension { expected: a.n, found: b.n });
    }
    Ok(())
}

/// `[a, b] / 2i`, exact up to floating-point products of coefficients.
pub fn commutator_over_2i(a: &PauliSum, b: &PauliSum) -> Result<PauliSum> {
    check_n(a, b)?;
    let mut out = PauliSum::zero(a.n);
    for (p, ca) in a.iter() {
        for (q, cb) in b.iter() {
            if p.commutes_with(q) {
                continue;
            }
            // pq = i^k r with k odd, so [p,q]/2i = i^{k-1} r = ±r.
            let (ph, r) = mul_unchecked(p, q);
            let sign = if ph.power() == 1 { 1.0 } else { -1.0 };
            *out.terms.entry(r).or_insert(0.0) += sign * ca * cb;
        }
    }
    out.simplify();
    Ok(out)
}

/// `(1/2ⁿ) Tr(ab)`.
pub fn trace_product(a: &PauliSum, b: &PauliSum) -> Result<f64> {
    check_n(a, b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    Ok(small.iter().map(|(p, c)| c * large.coefficient(p)).sum())
}

/// Rescales `h` by a positive factor so that `(1/2ⁿ) Tr(h²) = n`.
pub fn normalize_energy(h: &PauliSum, n: usize) -> Result<PauliSum> {
    let s = h.norm_sq();
    if s == 0.0 {
        return Err(Error::Normalization);
    }
    Ok(h.scaled((n as f64 / s).sqrt()))
}

/// Factor `f` with `normalize_energy(h) = f·h`.
pub fn normalization_factor(h: &PauliSum, n: usize) -> Result<f64> {
    let s = h.norm_sq();
    if s == 0.0 {
        return Err(Error::Normalization);
    }
    Ok((n as f64 / s).sqrt())
}

impl fmt::Display for PauliSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (p, c) in self.iter() {
            writeln!(f, "{c:+.5} {p}")?;
        }
        Ok(())
    }
}

impl FromStr for PauliSum {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}
