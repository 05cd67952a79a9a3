use thiserror::Error;

pub type Result<T> = std::result::Result<T, NeedletError>;

/// Errors raised by the library.
///
/// [`NeedletError::class`] groups them into parameter, resource and numeric
/// failures, which the command-line front end maps onto exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum NeedletError {
    #[error("invalid degree {degree}: must be at most {cap}")]
    InvalidDegree { degree: usize, cap: usize },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {0}: only d = 1 and d = 2 are implemented")]
    UnsupportedDimension(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),

    #[error("insufficient quadrature: order {order} < required {required}")]
    InsufficientQuadrature { order: usize, required: usize },

    #[error("resource limit: {what} needs {requested}, budget is {budget}")]
    ResourceLimit {
        what: &'static str,
        requested: u128,
        budget: u128,
    },

    #[error("frame depth: degree {degree} exceeds 4^{j_max} = {limit}")]
    FrameDepth {
        degree: usize,
        j_max: usize,
        limit: usize,
    },

    #[error("invalid index: level {level}, node {node}")]
    InvalidIndex { level: usize, node: usize },

    #[error("coefficients were produced by a different frame")]
    FrameMismatch,

    #[error("grid too coarse: {points_per_unit} points per unit, need at least {required}")]
    Resolution {
        points_per_unit: usize,
        required: usize,
    },

    #[error("projection tail indicator {tail:.3e} exceeds {limit:.1e}")]
    IngestionAccuracy { tail: f64, limit: f64 },

    #[error("zero function has no norm ratio")]
    ZeroFunction,

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("i/o failure: {0}")]
    Io(String),
}

/// Coarse classification of a [`NeedletError`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parameter,
    Resource,
    Numeric,
}

impl NeedletError {
    pub fn class(&self) -> ErrorClass {
        match self {
            NeedletError::ResourceLimit { .. } | NeedletError::Io(_) => ErrorClass::Resource,
            NeedletError::NumericFailure(_) | NeedletError::IngestionAccuracy { .. } => {
                ErrorClass::Numeric
            }
            _ => ErrorClass::Parameter,
        }
    }
}
