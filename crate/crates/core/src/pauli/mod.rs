//! Real-coefficient Pauli algebra and the Hamiltonians built from it.

mod build;
mod string;
mod sum;

pub use build::{
    build_h1, build_h1_corrected, build_h1_general, build_hf, build_hi, build_hqz_series, QzSeries,
    DEFAULT_TERM_CAP,
};
pub use string::{pauli_mul, Letter, PauliString, Phase, MAX_QUBITS};
pub use sum::{
    commutator_over_2i, normalization_factor, normalize_energy, trace_product, PauliSum, DENSE_CAP, DROP_TOL,
};
