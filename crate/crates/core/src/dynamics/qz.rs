//! Zermello-corrected commutator Hamiltonians.
//!
//! The correction `H_QZ(T) = -i[H_i, e^{iH₁T} H_f e^{-iH₁T}]` depends on the
//! final time `T`; the construction time and the evolution time are the
//! same parameter, so each grid point needs a fresh evolution.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::evolve::evolve_operator;
use super::krylov::{expm_action, KrylovOptions};
use super::metrics::{measure, Metrics};
use super::operator::{CompiledOperator, DiagonalOperator, LinearOperator};
use super::state::{plus_state, StateVector};
use super::sweep::{maximize_on_grid, Objective, OptimizeOptions, OptimumReport, TimeGrid};
use crate::error::{Error, Result};
use crate::instances::{DiagonalSpectrum, Graph};
use crate::pauli::{build_h1, build_hi, trace_product, PauliSum, QzSeries};

/// Truncation of the correction: a series order or the full exponential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "String")]
pub enum QzOrder {
    Series(u8),
    Exp,
}

impl fmt::Display for QzOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QzOrder::Series(k) => write!(f, "{k}"),
            QzOrder::Exp => f.write_str("exp"),
        }
    }
}

impl FromStr for QzOrder {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "0" => Ok(QzOrder::Series(0)),
            "1" => Ok(QzOrder::Series(1)),
            "2" => Ok(QzOrder::Series(2)),
            "exp" => Ok(QzOrder::Exp),
            _ => Err(Error::Parameter(format!("order {s:?} is not one of 0|1|2|exp"))),
        }
    }
}

/// Orders are written as strings but numbers are accepted on input.
#[derive(Deserialize)]
#[serde(untagged)]
enum OrderRepr {
    Number(u8),
    Text(String),
}

impl TryFrom<OrderRepr> for QzOrder {
    type Error = Error;
    fn try_from(r: OrderRepr) -> Result<Self> {
        match r {
            OrderRepr::Number(k) => k.to_string().parse(),
            OrderRepr::Text(s) => s.parse(),
        }
    }
}

impl From<QzOrder> for String {
    fn from(o: QzOrder) -> String {
        o.to_string()
    }
}

/// How the correction enters the evolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QzCoupling {
    /// Raw `H₁ + H_QZ(T)` evolved for `T`.
    #[default]
    Corrected,
    /// `H_QZ(T)` alone, energy-normalized, evolved for `T`.
    Bare,
}

impl FromStr for QzCoupling {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "corrected" => Ok(QzCoupling::Corrected),
            "bare" => Ok(QzCoupling::Bare),
            _ => Err(Error::Parameter(format!("unknown coupling {s:?}"))),
        }
    }
}

/// `p0 + T p1 + T² p2` with cached compiled parts and Gram matrix.
struct Polynomial {
    compiled: [CompiledOperator; 3],
    gram: [[f64; 3]; 3],
}

impl Polynomial {
    fn new(parts: [PauliSum; 3]) -> Result<Self> {
        let mut gram = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                gram[i][j] = trace_product(&parts[i], &parts[j])?;
            }
        }
        let compiled = [
            CompiledOperator::new(&parts[0])?,
            CompiledOperator::new(&parts[1])?,
            CompiledOperator::new(&parts[2])?,
        ];
        Ok(Self { compiled, gram })
    }

    fn norm_sq(&self, t: f64) -> f64 {
        let pw = [1.0, t, t * t];
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += pw[i] * pw[j] * self.gram[i][j];
            }
        }
        s
    }

    fn at(&self, t: f64, scale: f64) -> Result<CompiledOperator> {
        CompiledOperator::combine(&[
            (&self.compiled[0], scale),
            (&self.compiled[1], scale * t),
            (&self.compiled[2], scale * t * t),
        ])
    }
}

/// Matrix-free `w·H₁ + H_QZ,exp(T)`; every product costs four exponential
/// actions of `H₁`.
pub struct QzExpOperator {
    hi: CompiledOperator,
    h1: CompiledOperator,
    hf: DiagonalOperator,
    t: f64,
    h1_weight: f64,
    scale: f64,
    inner: KrylovOptions,
}

impl QzExpOperator {
    pub fn new(g: &Graph, t: f64, coupling: QzCoupling) -> Result<Self> {
        let h1 = build_h1(g)?;
        let dim = 1usize << g.n();
        let diag = (0..dim).map(|b| g.energy(b)).collect();
        Ok(Self {
            hi: CompiledOperator::new(&build_hi(g.n()))?,
            h1: CompiledOperator::new(&h1)?,
            hf: DiagonalOperator { diag },
            t,
            h1_weight: if coupling == QzCoupling::Corrected { 1.0 } else { 0.0 },
            scale: 1.0,
            inner: KrylovOptions::with_tol(1e-13),
        })
    }

    /// `e^{iH₁T} H_f e^{-iH₁T} x`.
    fn rotated_hf(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        let a = expm_action(&self.h1, x, self.t, &self.inner)?;
        let mut b = vec![Complex64::new(0.0, 0.0); a.len()];
        self.hf.apply(&a, &mut b)?;
        expm_action(&self.h1, &b, -self.t, &self.inner)
    }

    /// `(1/2ⁿ) Tr(H²)` of the unscaled operator, by summing over basis
    /// columns. Costs `2ⁿ` products.
    pub fn norm_sq(&self) -> Result<f64> {
        let dim = self.dim();
        let mut e = vec![Complex64::new(0.0, 0.0); dim];
        let mut y = vec![Complex64::new(0.0, 0.0); dim];
        let mut acc = 0.0;
        for b in 0..dim {
            e[b] = Complex64::new(1.0, 0.0);
            self.apply_unscaled(&e, &mut y)?;
            acc += y.iter().map(|v| v.norm_sqr()).sum::<f64>();
            e[b] = Complex64::new(0.0, 0.0);
        }
        Ok(acc / dim as f64)
    }

    fn apply_unscaled(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        let dim = self.dim();
        let mut hix = vec![Complex64::new(0.0, 0.0); dim];
        self.hi.apply(x, &mut hix)?;
        let w_hix = self.rotated_hf(&hix)?;
        let wx = self.rotated_hf(x)?;
        let mut hi_wx = vec![Complex64::new(0.0, 0.0); dim];
        self.hi.apply(&wx, &mut hi_wx)?;
        let mut h1x = vec![Complex64::new(0.0, 0.0); dim];
        if self.h1_weight != 0.0 {
            self.h1.apply(x, &mut h1x)?;
        }
        let minus_i = Complex64::new(0.0, -1.0);
        for k in 0..dim {
            y[k] = minus_i * (hi_wx[k] - w_hix[k]) + h1x[k] * self.h1_weight;
        }
        Ok(())
    }
}

impl LinearOperator for QzExpOperator {
    fn dim(&self) -> usize {
        self.hi.dim()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        self.apply_unscaled(x, y)?;
        if self.scale != 1.0 {
            y.iter_mut().for_each(|v| *v *= self.scale);
        }
        Ok(())
    }
}

/// The Hamiltonian family `T ↦ H(T)` for one order and coupling.
pub struct QzFamily {
    graph: Graph,
    order: QzOrder,
    coupling: QzCoupling,
    poly: Option<Polynomial>,
    kopts: KrylovOptions,
}

impl QzFamily {
    pub fn new(g: &Graph, order: QzOrder, coupling: QzCoupling, kopts: KrylovOptions) -> Result<Self> {
        let poly = match order {
            QzOrder::Series(k) => {
                let s = QzSeries::new(g, k)?;
                let a = match coupling {
                    QzCoupling::Corrected => s.a.add(&build_h1(g)?)?,
                    QzCoupling::Bare => s.a.clone(),
                };
                Some(Polynomial::new([a, s.b, s.c])?)
            }
            QzOrder::Exp => None,
        };
        Ok(Self { graph: g.clone(), order, coupling, poly, kopts })
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    /// `(1/2ⁿ) Tr(H(T)²)` of the unnormalized family member.
    pub fn norm_sq(&self, t: f64) -> Result<f64> {
        match &self.poly {
            Some(p) => Ok(p.norm_sq(t)),
            None => QzExpOperator::new(&self.graph, t, self.coupling)?.norm_sq(),
        }
    }

    /// Time in normalized units: `T · sqrt(norm_sq / n)` for raw couplings, `T`
    /// when the family is already normalized.
    pub fn normalized_time(&self, t: f64) -> Result<f64> {
        match self.coupling {
            QzCoupling::Bare => Ok(t),
            QzCoupling::Corrected => Ok(t * (self.norm_sq(t)? / self.n() as f64).sqrt()),
        }
    }

    fn scale(&self, t: f64) -> Result<f64> {
        match self.coupling {
            QzCoupling::Corrected => Ok(1.0),
            QzCoupling::Bare => {
                let s = self.norm_sq(t)?;
                if s == 0.0 {
                    return Err(Error::Normalization);
                }
                Ok((self.n() as f64 / s).sqrt())
            }
        }
    }

    /// Evolves `psi` under `H(T)` for duration `T`.
    pub fn evolve(&self, t: f64, psi: &StateVector) -> Result<StateVector> {
        if psi.n() != self.n() {
            return Err(Error::Dimension { expected: self.n(), found: psi.n() });
        }
        if t == 0.0 {
            return Ok(psi.clone());
        }
        let scale = self.scale(t)?;
        match &self.poly {
            Some(p) => {
                let op = p.at(t, scale)?;
                evolve_operator(&op, psi, t, &self.kopts)
            }
            None => {
                let mut op = QzExpOperator::new(&self.graph, t, self.coupling)?;
                op.scale = scale;
                op.inner = KrylovOptions::with_tol((self.kopts.tol * 1e-3).max(1e-14));
                evolve_operator(&op, psi, t, &self.kopts)
            }
        }
    }

    pub fn metrics(&self, t: f64, spec: &DiagonalSpectrum) -> Result<Metrics> {
        measure(&self.evolve(t, &plus_state(self.n())?)?, spec)
    }

    pub fn order(&self) -> QzOrder {
        self.order
    }
}

/// Evolves under the energy-normalized exponential correction alone for
/// `t_param`, with construction time equal to `t_param`.
pub fn evolve_qz_exp(g: &Graph, t_param: f64, psi: &StateVector, tol: f64) -> Result<StateVector> {
    QzFamily::new(g, QzOrder::Exp, QzCoupling::Bare, KrylovOptions::with_tol(tol))?.evolve(t_param, psi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QzReport {
    pub order: QzOrder,
    pub coupling: QzCoupling,
    /// `t_star` is the shared construction/evolution time `T`.
    pub optimum: OptimumReport,
    pub normalized_time: f64,
}

/// Optimizes `T` over the grid, evolving from scratch at each point.
pub fn qz_optimize(
    g: &Graph,
    spec: &DiagonalSpectrum,
    order: QzOrder,
    coupling: QzCoupling,
    grid: &TimeGrid,
    objective: Objective,
    opts: &OptimizeOptions,
) -> Result<QzReport> {
    let family = QzFamily::new(g, order, coupling, opts.krylov)?;
    let samples = grid.points().into_iter().map(|t| family.metrics(t, spec)).collect::<Result<Vec<_>>>()?;
    let optimum = maximize_on_grid(grid, &samples, objective, opts, |t| family.metrics(t, spec))?;
    let normalized_time = family.normalized_time(optimum.t_star)?;
    Ok(QzReport { order, coupling, optimum, normalized_time })
}
