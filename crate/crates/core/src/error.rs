use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("{what} is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd {
        what: String,
        min_eigenvalue: f64,
    },
    #[error("{what} does not have unit trace (trace {trace})")]
    NotNormalized { what: String, trace: f64 },
    #[error("{label}: effects do not sum to the identity (max deviation {deviation:.3e})")]
    NotAPovm { label: String, deviation: f64 },
    #[error("{label}: Kraus operators are not complete (max deviation {deviation:.3e})")]
    IncompleteKraus { label: String, deviation: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation requires qubit operators, got dimension {0}")]
    NotQubit(usize),
    #[error("enumeration of {count} strategies exceeds the cap of {cap}")]
    CapExceeded { count: u128, cap: usize },
    #[error("family is not monotone: feasible at {feasible_at} but infeasible at {infeasible_at}")]
    NonMonotone { feasible_at: f64, infeasible_at: f64 },
    #[error("scenario schema error: {0}")]
    Schema(String),
    #[error("internal invariant breach: {0}")]
    Internal(String),
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by the caller's data rather than by the engine itself.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Internal(_) | Error::NonMonotone { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
