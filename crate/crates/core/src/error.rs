use thiserror::Error;

/// Errors shared by every module. The CLI maps the variants onto exit codes.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("positive-dimensional ideal: no leading monomial is a pure power of `{0}`")]
    PositiveDimensional(String),
    #[error("inconsistent linear system at row {row}")]
    Inconsistent { row: usize },
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("eigenvalue iteration did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("degenerate point: {0}")]
    Degenerate(String),
    #[error("solve failed: {0}")]
    Solve(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
