use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("resource limit: {what} ({requested} > {limit})")]
    ResourceLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    #[error("degenerate problem: {0}")]
    Degenerate(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("zero hamiltonian: {0}")]
    ZeroHamiltonian(String),

    #[error("cannot normalize an empty sum")]
    Normalization,

    #[error("krylov evolution did not converge (residual estimate {residual:.3e})")]
    Convergence { residual: f64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("states are orthogonal (|overlap| = {0:.3e})")]
    OrthogonalStates(f64),

    #[error("operator is not hermitian (deviation {0:.3e})")]
    Hermiticity(f64),

    #[error("bloch vectors are parallel; nothing to transfer")]
    TrivialTransfer,

    #[error("spectral function vanishes on the spectrum")]
    DegenerateFunction,

    #[error("recipe {recipe}: {reason}")]
    Recipe { recipe: String, reason: String },

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
