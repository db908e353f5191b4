use thiserror::Error;

/// A violated density-matrix invariant, with the measured residual.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValidationError {
    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("matrix is not Hermitian: max |a_ij - conj(a_ji)| = {residual:e}")]
    NotHermitian { residual: f64 },
    #[error("matrix does not have unit trace: |tr - 1| = {residual:e}")]
    NotUnitTrace { residual: f64 },
    #[error("matrix is not positive semidefinite: min eigenvalue = {min_eigenvalue:e}")]
    NotPositive { min_eigenvalue: f64 },
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error("Kraus set is not trace preserving: max |sum K^dag K - I| = {residual:e}")]
    NonTracePreserving { residual: f64 },
    #[error("channel output failed validation: {0}")]
    InvalidState(ValidationError),
    #[error("parameter {name} = {value} is outside [0, 1]")]
    ParamOutOfRange { name: &'static str, value: f64 },
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },
    #[error("unknown state id `{0}`")]
    UnknownState(String),
    #[error("{}: {source}", path.display())]
    File {
        path: std::path::PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Wraps an I/O failure with the path it concerns.
    pub fn file(path: impl Into<std::path::PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::File { path, source }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
