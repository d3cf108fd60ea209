use thiserror::Error;

/// Errors raised anywhere in the surrogate pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index set is not downward closed: predecessor {missing} of {index} is missing")]
    NotDownwardClosed { index: String, missing: String },

    #[error("duplicate multi-index {0}")]
    DuplicateIndex(String),

    #[error("duplicate interpolation node {0}")]
    DuplicateNode(f64),

    #[error("Legendre order {order} exceeds the supported maximum {max}")]
    OrderTooLarge { order: u32, max: u32 },

    #[error("parameter point has no coordinate for active dimension {0}")]
    MissingCoordinate(usize),

    #[error("no sample stored for grid point [{0}]")]
    MissingSample(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("parameter coordinate y_{dim} = {value} lies outside [-1, 1]")]
    CoordinateOutOfRange { dim: usize, value: f64 },

    #[error("cube membership violated at coordinate {index}: |c| = {value:e} > bound {bound:e}")]
    CubeMembership { index: usize, value: f64, bound: f64 },

    #[error("ellipticity violated: min(abar + a) = {min:e} on the collocation grid, a_min = {a_min:e}")]
    Ellipticity { min: f64, a_min: f64 },

    #[error("linear solver did not converge in {iterations} iterations (relative residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("config key `{key}`: {message}")]
    Config { key: String, message: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn config(key: &str, message: impl Into<String>) -> Self {
        Error::Config {
            key: key.to_string(),
            message: message.into(),
        }
    }

    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } => 2,
            Error::Ellipticity { .. } | Error::NoConvergence { .. } => 3,
            Error::CubeMembership { .. } | Error::CoordinateOutOfRange { .. } => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
