//! State-vector evolution, observables, and time optimization.

mod evolve;
mod krylov;
mod metrics;
mod operator;
mod qz;
mod state;
mod sweep;

pub use evolve::{evolve, evolve_compiled, evolve_operator};
pub use krylov::{expm_action, KrylovOptions};
pub use metrics::{measure, Metrics};
pub use operator::{CompiledOperator, DiagonalOperator, LinearOperator};
pub use qz::{evolve_qz_exp, qz_optimize, QzCoupling, QzExpOperator, QzFamily, QzOrder, QzReport};
pub use state::{plus_state, StateVector, SIM_CAP};
pub use sweep::{
    maximize_on_grid, optimize_time, optimize_time_with, time_sweep, Objective, OptimizeOptions, OptimumReport,
    TimeGrid,
};
