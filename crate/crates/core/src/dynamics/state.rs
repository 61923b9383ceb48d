use num_complex::Complex64;

use crate::error::{Error, Result};

/// Default ceiling on simulated qubits.
pub const SIM_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    pub fn from_amplitudes(n: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1usize << n {
            return Err(Error::Dimension { expected: 1 << n, found: amps.len() });
        }
        Ok(Self { n, amps })
    }

    /// Computational basis state `|b>`.
    pub fn basis(n: usize, b: usize) -> Result<Self> {
        check_cap(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        amps[b] = Complex64::new(1.0, 0.0);
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(&self.amps)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::Dimension { expected: self.n, found: other.n });
        }
        Ok(inner(&self.amps, &other.amps))
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn normalized(mut self) -> Result<Self> {
        let nrm = self.norm();
        if nrm == 0.0 {
            return Err(Error::Parameter("cannot normalize the zero vector".into()));
        }
        for a in &mut self.amps {
            *a /= nrm;
        }
        Ok(self)
    }
}

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Parameter("register needs at least one qubit".into()));
    }
    if n > SIM_CAP {
        return Err(Error::ResourceLimit { what: "simulated qubits", requested: n, limit: SIM_CAP });
    }
    Ok(())
}

/// Uniform superposition `|+>^n`, the ground state of `-Σ X`.
pub fn plus_state(n: usize) -> Result<StateVector> {
    check_cap(n)?;
    let a = (1.0 / (1u64 << n) as f64).sqrt();
    Ok(StateVector { n, amps: vec![Complex64::new(a, 0.0); 1 << n] })
}

pub(crate) fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}
