//! Time-optimal state transfer: the two-state rotation generator, its Pauli
//! expansion, the single-qubit geometry, and the closed-form dynamics of the
//! initial-state commutator `-i[|+><+|, f(H_f)]`.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{plus_state, LinearOperator, StateVector, SIM_CAP};
use crate::error::{Error, Result};
use crate::instances::DiagonalSpectrum;
use crate::pauli::{commutator_over_2i, PauliString, PauliSum, DENSE_CAP};

/// Overlaps below this count as orthogonal.
pub const ORTHOGONAL_TOL: f64 = 1e-12;

/// Largest anti-Hermitian residual accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    pub n: usize,
    pub entries: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(n: usize, entries: DMatrix<Complex64>) -> Result<Self> {
        if n > DENSE_CAP {
            return Err(Error::ResourceLimit { what: "dense qubits", requested: n, limit: DENSE_CAP });
        }
        let dim = 1usize << n;
        if entries.nrows() != dim || entries.ncols() != dim {
            return Err(Error::Dimension { expected: dim, found: entries.nrows().max(entries.ncols()) });
        }
        Ok(Self { n, entries })
    }

    pub fn from_pauli(h: &PauliSum) -> Result<Self> {
        Self::new(h.n(), h.to_dense()?)
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    /// Largest entry of `A - A†`.
    pub fn hermiticity_residual(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for r in 0..d {
            for c in r..d {
                worst = worst.max((self.entries[(r, c)] - self.entries[(c, r)].conj()).norm());
            }
        }
        worst
    }

    pub fn check_hermitian(&self) -> Result<()> {
        let r = self.hermiticity_residual();
        if r > HERMITIAN_TOL {
            return Err(Error::Hermiticity(r));
        }
        Ok(())
    }

    /// `e^{-iAt} ψ` through a Hermitian eigendecomposition.
    pub fn evolve(&self, psi: &StateVector, t: f64) -> Result<StateVector> {
        self.check_hermitian()?;
        if psi.n() != self.n {
            return Err(Error::Dimension { expected: self.n, found: psi.n() });
        }
        let eig = SymmetricEigen::new(self.entries.clone());
        let v = &eig.eigenvectors;
        let x = nalgebra::DVector::from_column_slice(psi.amplitudes());
        let mut c = v.adjoint() * x;
        for (k, e) in eig.eigenvalues.iter().enumerate() {
            c[k] *= Complex64::from_polar(1.0, -e * t);
        }
        StateVector::from_amplitudes(self.n, (v * c).as_slice().to_vec())
    }
}

impl LinearOperator for DenseOperator {
    fn dim(&self) -> usize {
        self.entries.nrows()
    }

    fn apply(&self, x: &[Complex64], y: &mut [Complex64]) -> Result<()> {
        let d = self.dim();
        if x.len() != d || y.len() != d {
            return Err(Error::Dimension { expected: d, found: x.len() });
        }
        for (r, yr) in y.iter_mut().enumerate() {
            *yr = (0..d).map(|c| self.entries[(r, c)] * x[c]).sum();
        }
        Ok(())
    }
}

/// `ψ_f` with its global phase turned so `<ψ_i|ψ_f>` is real and
/// non-negative, plus that overlap.
fn aligned_target(psi_i: &StateVector, psi_f: &StateVector) -> Result<(StateVector, f64)> {
    let ov = psi_i.inner(psi_f)?;
    let mag = ov.norm();
    if mag < ORTHOGONAL_TOL {
        return Err(Error::OrthogonalStates(mag));
    }
    let rot = ov.conj() / mag;
    let amps = psi_f.amplitudes().iter().map(|a| a * rot).collect();
    Ok((StateVector::from_amplitudes(psi_f.n(), amps)?, mag.min(1.0)))
}

/// `H_opt = -i(|ψ_i><ψ_f| - |ψ_f><ψ_i|)` after aligning the phase of `ψ_f`.
pub fn hopt_from_states(psi_i: &StateVector, psi_f: &StateVector) -> Result<DenseOperator> {
    if psi_i.n() != psi_f.n() {
        return Err(Error::Dimension { expected: psi_i.n(), found: psi_f.n() });
    }
    if psi_i.n() > DENSE_CAP {
        return Err(Error::ResourceLimit { what: "dense qubits", requested: psi_i.n(), limit: DENSE_CAP });
    }
    let (f, _) = aligned_target(psi_i, psi_f)?;
    let a = psi_i.amplitudes();
    let b = f.amplitudes();
    let d = a.len();
    let minus_i = Complex64::new(0.0, -1.0);
    let entries = DMatrix::from_fn(d, d, |r, c| minus_i * (a[r] * b[c].conj() - b[r] * a[c].conj()));
    DenseOperator::new(psi_i.n(), entries)
}

/// `arccos|<ψ_f|ψ_i>| / sqrt(1 - |<ψ_f|ψ_i>|²)`, the duration under
/// `hopt_from_states`.
pub fn transfer_time(psi_i: &StateVector, psi_f: &StateVector) -> Result<f64> {
    let (_, c) = aligned_target(psi_i, psi_f)?;
    let s = (1.0 - c * c).max(0.0).sqrt();
    if s < 1e-15 {
        return Ok(0.0);
    }
    Ok(c.acos() / s)
}

/// Coefficients `(1/2ⁿ) Tr(P A)` over all `4ⁿ` strings, dropping those
/// below `1e-12`.
pub fn pauli_expand(a: &DenseOperator) -> Result<PauliSum> {
    a.check_hermitian()?;
    let n = a.n;
    let dim = a.dim();
    let mut out = PauliSum::zero(n);
    for x in 0..dim as u64 {
        for z in 0..dim as u64 {
            let p = PauliString::from_masks(n, x, z);
            let mut tr = ZERO;
            for c in 0..dim {
                let (re, im) = p.apply_phase(c as u64).as_pair();
                let col = c ^ x as usize;
                tr += Complex64::new(re as f64, im as f64) * a.entries[(c, col)];
            }
            let coef = tr / dim as f64;
            if coef.im.abs() > 1e-10 {
                return Err(Error::Hermiticity(coef.im.abs()));
            }
            if coef.re.abs() > 1e-12 {
                out.add_term(p, coef.re)?;
            }
        }
    }
    Ok(out)
}

/// Bloch vector and trace part of a 2×2 Hermitian matrix.
fn bloch(h: &DenseOperator) -> Result<(f64, [f64; 3])> {
    if h.n != 1 {
        return Err(Error::Dimension { expected: 1, found: h.n });
    }
    let e = &h.entries;
    let m = [e[(0, 1)].re, -e[(0, 1)].im, (e[(0, 0)].re - e[(1, 1)].re) / 2.0];
    Ok(((e[(0, 0)].re + e[(1, 1)].re) / 2.0, m))
}

fn unit(v: [f64; 3]) -> Result<[f64; 3]> {
    let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    if r < 1e-14 {
        return Err(Error::TrivialTransfer);
    }
    Ok([v[0] / r, v[1] / r, v[2] / r])
}

/// `[H_i, H_f]/2i` and the time `θ / 2δE` that carries the ground state of
/// `hi` to that of `hf`, with `θ` the angle between the Bloch vectors.
pub fn single_qubit_optimal(hi: &DenseOperator, hf: &DenseOperator) -> Result<(PauliSum, f64)> {
    hi.check_hermitian()?;
    hf.check_hermitian()?;
    let (_, m) = bloch(hi)?;
    let (_, nv) = bloch(hf)?;
    let (mh, nh) = (unit(m)?, unit(nv)?);
    let cross = [
        mh[1] * nh[2] - mh[2] * nh[1],
        mh[2] * nh[0] - mh[0] * nh[2],
        mh[0] * nh[1] - mh[1] * nh[0],
    ];
    let sin = cross.iter().map(|c| c * c).sum::<f64>().sqrt();
    if sin < 1e-12 {
        return Err(Error::TrivialTransfer);
    }
    let h1 = commutator_over_2i(&pauli_expand(hi)?, &pauli_expand(hf)?)?;
    let cos = mh[0] * nh[0] + mh[1] * nh[1] + mh[2] * nh[2];
    // The ground state of hi sits at -m̂, perpendicular to the rotation
    // axis, so δE is the norm of the H₁ Bloch vector.
    let delta_e = h1.iter().map(|(_, c)| c * c).sum::<f64>().sqrt();
    Ok((h1, sin.atan2(cos) / (2.0 * delta_e)))
}

/// Named spectral functions `f` for the initial-state commutator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum SpectralFunction {
    Identity,
    Power(u32),
    /// `e^{-E}`.
    Exp,
    /// Indicator of the ground energy.
    GroundProjector,
}

impl SpectralFunction {
    pub fn eval(self, e: f64, spec: &DiagonalSpectrum) -> f64 {
        match self {
            SpectralFunction::Identity => e,
            SpectralFunction::Power(m) => e.powi(m as i32),
            SpectralFunction::Exp => (-e).exp(),
            SpectralFunction::GroundProjector => {
                if (e - spec.e_min).abs() <= 1e-9 * spec.e_min.abs().max(1.0) {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralFunction::Identity => f.write_str("identity"),
            SpectralFunction::Power(m) => write!(f, "power{m}"),
            SpectralFunction::Exp => f.write_str("exp"),
            SpectralFunction::GroundProjector => f.write_str("ground-projector"),
        }
    }
}

impl FromStr for SpectralFunction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "identity" => Ok(SpectralFunction::Identity),
            "exp" => Ok(SpectralFunction::Exp),
            "ground-projector" => Ok(SpectralFunction::GroundProjector),
            _ => s
                .strip_prefix("power")
                .and_then(|m| m.parse().ok())
                .map(SpectralFunction::Power)
                .ok_or_else(|| Error::Parameter(format!("unknown spectral function {s:?}"))),
        }
    }
}

impl TryFrom<String> for SpectralFunction {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SpectralFunction> for String {
    fn from(f: SpectralFunction) -> String {
        f.to_string()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LpaReport {
    pub function: SpectralFunction,
    pub beta: f64,
    /// `<+|ω>`, real by construction; may be negative.
    pub overlap: f64,
    pub t_omega: f64,
    pub t_omega_perp: f64,
    pub pgs_at_omega: f64,
    pub energy_at_omega: f64,
    pub ratio_at_omega: f64,
}

/// `f(E_b)` per basis state, `Σ f²`, and `Σ f`.
fn spectral_values(spec: &DiagonalSpectrum, f: SpectralFunction) -> Result<(Vec<f64>, f64, f64)> {
    let vals: Vec<f64> = spec.energies.iter().map(|&e| f.eval(e, spec)).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter(format!("{f} is not finite on the spectrum")));
    }
    let sq: f64 = vals.iter().map(|v| v * v).sum();
    if sq == 0.0 {
        return Err(Error::DegenerateFunction);
    }
    let sum = vals.iter().sum();
    Ok((vals, sq, sum))
}

pub fn lpa_metrics(spec: &DiagonalSpectrum, f: SpectralFunction) -> Result<LpaReport> {
    let (vals, sq, sum) = spectral_values(spec, f)?;
    let dim = spec.dim() as f64;
    let overlap = (sum / (dim.sqrt() * sq.sqrt())).clamp(-1.0, 1.0);
    let beta = ((1.0 - overlap * overlap).max(0.0) * sq / dim).sqrt();
    let (t_omega, t_omega_perp) = if beta > 0.0 {
        (overlap.acos() / beta, std::f64::consts::FRAC_PI_2 / beta)
    } else {
        (0.0, f64::INFINITY)
    };
    let g = spec.degeneracy as f64;
    let pgs_at_omega = g * f.eval(spec.e_min, spec).powi(2) / sq;
    let energy_at_omega = spec.energies.iter().zip(&vals).map(|(e, v)| e * v * v).sum::<f64>() / sq;
    Ok(LpaReport {
        function: f,
        beta,
        overlap,
        t_omega,
        t_omega_perp,
        pgs_at_omega,
        energy_at_omega,
        ratio_at_omega: energy_at_omega / spec.e_min,
    })
}

/// `cos(βt)|+> + sin(βt)|ω⊥>`.
pub fn lpa_evolve(spec: &DiagonalSpectrum, f: SpectralFunction, t: f64) -> Result<StateVector> {
    let (vals, sq, _) = spectral_values(spec, f)?;
    let report = lpa_metrics(spec, f)?;
    let plus = plus_state(spec.n)?;
    if report.beta == 0.0 {
        return Ok(plus);
    }
    let p = 1.0 / (spec.dim() as f64).sqrt();
    let c = report.overlap;
    let s = (1.0 - c * c).sqrt();
    let (sn, cs) = (report.beta * t).sin_cos();
    let amps = vals
        .iter()
        .map(|v| {
            let perp = (v / sq.sqrt() - c * p) / s;
            Complex64::new(cs * p + sn * perp, 0.0)
        })
        .collect();
    StateVector::from_amplitudes(spec.n, amps)
}

/// `|ω> = f(H_f)|+> / ‖f(H_f)|+>‖`.
pub fn lpa_target(spec: &DiagonalSpectrum, f: SpectralFunction) -> Result<StateVector> {
    let (vals, sq, _) = spectral_values(spec, f)?;
    let norm = sq.sqrt();
    StateVector::from_amplitudes(spec.n, vals.iter().map(|v| Complex64::new(v / norm, 0.0)).collect())
}

/// Dense `-i[|+><+|, f(H_f)]` for cross-checks on small registers.
pub fn lpa_hamiltonian_dense(spec: &DiagonalSpectrum, f: SpectralFunction) -> Result<DenseOperator> {
    if spec.n > DENSE_CAP.min(SIM_CAP) {
        return Err(Error::ResourceLimit { what: "dense qubits", requested: spec.n, limit: DENSE_CAP });
    }
    let (vals, _, _) = spectral_values(spec, f)?;
    let d = spec.dim();
    let p = 1.0 / d as f64;
    // [P, F]_{rc} = P_{rc} (f_c - f_r) with P the all-1/d projector.
    let entries = DMatrix::from_fn(d, d, |r, c| Complex64::new(0.0, -p * (vals[c] - vals[r])));
    DenseOperator::new(spec.n, entries)
}
