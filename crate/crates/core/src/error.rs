use alloc::string::String;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("operation requires {expected} parties, got {found}")]
    UnsupportedArity { expected: usize, found: usize },

    #[error("amplitude vector has length {found}, expected {expected}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("state vector has norm {norm}, expected 1")]
    NotNormalized { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("density matrix has trace {trace}, expected 1")]
    TraceInvalid { trace: f64 },

    #[error("density matrix has negative eigenvalue {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("state is not antisymmetric (residual {residual:e})")]
    NotAntisymmetric { residual: f64 },

    #[error("state is not supported on the fermionic sector (residual {residual:e})")]
    NotFermionicSupport { residual: f64 },

    #[error("Schmidt block of dimension {dim} at value {value} cannot be paired")]
    OddSlaterBlock { dim: usize, value: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;
