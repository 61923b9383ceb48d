use super::krylov::{expm_action, KrylovOptions};
use super::operator::{CompiledOperator, LinearOperator};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::pauli::PauliSum;

/// `e^{-iht} ψ` by Krylov exponential action.
pub fn evolve(h: &PauliSum, psi: &StateVector, t: f64, tol: f64) -> Result<StateVector> {
    if h.n() != psi.n() {
        return Err(Error::Dimension { expected: h.n(), found: psi.n() });
    }
    let op = CompiledOperator::new(h)?;
    evolve_compiled(&op, psi, t, &KrylovOptions::with_tol(tol))
}

pub fn evolve_compiled(op: &CompiledOperator, psi: &StateVector, t: f64, opts: &KrylovOptions) -> Result<StateVector> {
    evolve_operator(op, psi, t, opts)
}

pub fn evolve_operator(op: &dyn LinearOperator, psi: &StateVector, t: f64, opts: &KrylovOptions) -> Result<StateVector> {
    let out = expm_action(op, psi.amplitudes(), t, opts)?;
    StateVector::from_amplitudes(psi.n(), out)
}
