use super::string::{Letter, PauliString};
use super::sum::{commutator_over_2i, PauliSum};
use crate::error::{Error, Result};
use crate::instances::Graph;

/// Default ceiling on terms produced by nested commutators.
pub const DEFAULT_TERM_CAP: usize = 200_000;

/// `Σ w Z_i Z_j + Σ h Z_i`.
pub fn build_hf(g: &Graph) -> PauliSum {
    let n = g.n();
    let mut h = PauliSum::zero(n);
    for e in g.edges() {
        let p = PauliString::from_sites(n, &[(e.i, Letter::Z), (e.j, Letter::Z)]);
        h.add_term(p, e.w).expect("same register");
    }
    for (k, &b) in g.biases().iter().enumerate() {
        h.add_term(PauliString::single(n, k, Letter::Z), b).expect("same register");
    }
    h.simplify();
    h
}

/// `-Σ X_k`, whose ground state is the uniform superposition.
pub fn build_hi(n: usize) -> PauliSum {
    PauliSum::from_terms(n, (0..n).map(|k| (PauliString::single(n, k, Letter::X), -1.0)))
        .expect("same register")
}

/// `[H_i, H_f] / 2i = Σ w (Y_i Z_j + Z_i Y_j) + Σ h Y_i`.
pub fn build_h1(g: &Graph) -> Result<PauliSum> {
    build_h1_general(g, 1)
}

/// `[H_i, H_f^m] / 2i`, the monotone generalization of `H₁`.
pub fn build_h1_general(g: &Graph, power: u32) -> Result<PauliSum> {
    if !g.has_terms() {
        return Err(Error::ZeroHamiltonian("graph has no couplings or biases".into()));
    }
    if power == 0 {
        return Err(Error::Parameter("power must be at least 1".into()));
    }
    let hf = build_hf(g);
    let target = if power == 1 { hf } else { hf.pow(power)? };
    let h = commutator_over_2i(&build_hi(g.n()), &target)?;
    if h.is_empty() {
        return Err(Error::ZeroHamiltonian("commutator vanished".into()));
    }
    Ok(h)
}

/// Truncated expansion of the Zermello correction
/// `-i[H_i, e^{iH₁T} H_f e^{-iH₁T}] ≈ a + T b + T² c`.
#[derive(Debug, Clone, PartialEq)]
pub struct QzSeries {
    pub order: u8,
    pub a: PauliSum,
    pub b: PauliSum,
    pub c: PauliSum,
}

impl QzSeries {
    pub fn new(g: &Graph, order: u8) -> Result<Self> {
        Self::with_cap(g, order, DEFAULT_TERM_CAP)
    }

    pub fn with_cap(g: &Graph, order: u8, cap: usize) -> Result<Self> {
        if order > 2 {
            return Err(Error::Parameter(format!("series order {order} not in 0..=2")));
        }
        let n = g.n();
        let hi = build_hi(n);
        let hf = build_hf(g);
        let h1 = build_h1(g)?;
        let check = |s: &PauliSum| -> Result<()> {
            if s.len() > cap {
                return Err(Error::ResourceLimit { what: "pauli terms", requested: s.len(), limit: cap });
            }
            Ok(())
        };
        let a = h1.scaled(2.0);
        let mut b = PauliSum::zero(n);
        let mut c = PauliSum::zero(n);
        if order >= 1 {
            // [H₁, H_f] = 2i·c1, so T·[H_i, [H₁, H_f]] = -4T·[H_i, c1]/2i.
            let c1 = commutator_over_2i(&h1, &hf)?;
            check(&c1)?;
            b = commutator_over_2i(&hi, &c1)?.scaled(-4.0);
            check(&b)?;
            if order == 2 {
                // (iT²/2)·[H_i, [H₁, [H₁, H_f]]] = 4T²·[H_i, c2]/2i.
                let c2 = commutator_over_2i(&h1, &c1)?;
                check(&c2)?;
                c = commutator_over_2i(&hi, &c2)?.scaled(4.0);
                check(&c)?;
            }
        }
        Ok(Self { order, a, b, c })
    }

    pub fn n(&self) -> usize {
        self.a.n()
    }

    pub fn at(&self, t: f64) -> PauliSum {
        self.a
            .add_scaled(&self.b, t)
            .and_then(|s| s.add_scaled(&self.c, t * t))
            .expect("same register")
    }
}

/// The truncated correction evaluated at construction time `t_construct`.
/// Order 0 is exactly `2·H₁`.
pub fn build_hqz_series(g: &Graph, t_construct: f64, order: u8) -> Result<PauliSum> {
    Ok(QzSeries::new(g, order)?.at(t_construct))
}

/// `H₁ + H_QZ(T)`: the commutator Hamiltonian with the Zermello correction
/// added on top. Order 0 is `3·H₁`.
pub fn build_h1_corrected(g: &Graph, t_construct: f64, order: u8) -> Result<PauliSum> {
    build_h1(g)?.add(&build_hqz_series(g, t_construct, order)?)
}
