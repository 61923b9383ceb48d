use serde::{Deserialize, Serialize};

use super::state::StateVector;
use crate::error::{Error, Result};
use crate::instances::DiagonalSpectrum;

/// Figures of merit of a state with respect to `H_f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    pub energy_expectation: f64,
    /// `<H_f> / E_min`.
    pub ratio: f64,
    /// Probability mass on the ground space.
    pub pgs: f64,
    /// Standard deviation of `H_f` over `|E_min|`; absent from closed forms
    /// that do not provide it.
    pub sigma: Option<f64>,
}

pub fn measure(psi: &StateVector, spec: &DiagonalSpectrum) -> Result<Metrics> {
    if psi.dim() != spec.dim() {
        return Err(Error::Dimension { expected: spec.dim(), found: psi.dim() });
    }
    measure_probabilities(&psi.probabilities(), spec)
}

pub(crate) fn measure_probabilities(probs: &[f64], spec: &DiagonalSpectrum) -> Result<Metrics> {
    if spec.e_min >= 0.0 {
        return Err(Error::Degenerate(format!("ground energy {} is not negative", spec.e_min)));
    }
    let mut mean = 0.0;
    for (p, e) in probs.iter().zip(&spec.energies) {
        mean += p * e;
    }
    let mut var = 0.0;
    for (p, e) in probs.iter().zip(&spec.energies) {
        var += p * (e - mean) * (e - mean);
    }
    let pgs: f64 = spec.ground_indices.iter().map(|&b| probs[b]).sum();
    Ok(Metrics {
        energy_expectation: mean,
        ratio: mean / spec.e_min,
        pgs,
        sigma: Some(var.max(0.0).sqrt() / spec.e_min.abs()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::plus_state;
    use crate::instances::{diagonal_spectrum, gen_ring};

    #[test]
    fn plus_state_on_ring_four() {
        let spec = diagonal_spectrum(&gen_ring(4).unwrap()).unwrap();
        let m = measure(&plus_state(4).unwrap(), &spec).unwrap();
        assert!(m.ratio.abs() < 1e-15);
        assert!((m.pgs - 2.0 / 16.0).abs() < 1e-15);
        let second: f64 = spec.energies.iter().map(|e| e * e).sum::<f64>() / 16.0;
        assert!((m.sigma.unwrap() - second.sqrt() / 4.0).abs() < 1e-15);
    }

    #[test]
    fn ground_basis_state() {
        let spec = diagonal_spectrum(&gen_ring(4).unwrap()).unwrap();
        let m = measure(&StateVector::basis(4, 0b0101).unwrap(), &spec).unwrap();
        assert_eq!((m.ratio, m.pgs, m.sigma), (1.0, 1.0, Some(0.0)));
    }
}
