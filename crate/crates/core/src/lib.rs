//! Commutator Hamiltonians for combinatorial optimization.
//!
//! The crate builds `H₁ = [H_i, H_f]/2i` and its relatives for Ising
//! problems, evolves the uniform superposition under them, and compares the
//! outcome with QAOA, analytic ring solutions, and locality bounds.
//!
//! Bit convention: qubit `k` is bit `k` of a basis index and spin `+1` is
//! bit value 0.

pub mod dynamics;
pub mod error;
pub mod harness;
pub mod instances;
pub mod locality;
pub mod pauli;
pub mod qaoa;
pub mod ringfermion;
pub mod rng;
pub mod transfer;

pub use error::{Error, Result};
