use thiserror::Error;

/// Errors reported by the estimation and selection routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("kernel second moment integral diverges")]
    NonIntegrableSecondMoment,
    #[error("kernel is not square integrable")]
    NonIntegrableSquare,
    #[error("kernel has vanishing second moment; second-order bandwidth formula does not apply")]
    DegenerateKernel,
    #[error("curvature estimate is not positive: {0}")]
    DegenerateCurvature(f64),
    #[error("invalid parameter for {family}: {message}")]
    InvalidParameter { family: String, message: String },
    #[error("x = {0} coincides with a kink point; probe one-sided")]
    AtKinkPoint(f64),
    #[error("sample is empty")]
    EmptySample,
    #[error("sample has {actual} observations, need at least {required}")]
    InsufficientSample { required: usize, actual: usize },
    #[error("dimension mismatch: sample dim {sample}, query dim {query}")]
    DimensionMismatch { sample: usize, query: usize },
    #[error("sample has zero spread")]
    ZeroSpread,
    #[error("unknown kernel name: {0}")]
    UnknownKernel(String),
    #[error("unknown selector name: {0}")]
    UnknownSelector(String),
    #[error("vectors have mismatched lengths: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least {required} points, got {actual}")]
    InsufficientPoints { required: usize, actual: usize },
    #[error("file not found: {0}")]
    FileNotFound(String),
    #[error("unknown column: {0}")]
    UnknownColumn(String),
    #[error("parse error at row {row}: {message}")]
    ParseError { row: usize, message: String },
    #[error("config error at line {line}: {message}")]
    ConfigError { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code classification used by the CLI.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ConfigError { .. }
            | Error::UnknownKernel(_)
            | Error::UnknownSelector(_)
            | Error::InvalidParameter { .. } => 2,
            Error::FileNotFound(_)
            | Error::UnknownColumn(_)
            | Error::ParseError { .. }
            | Error::EmptySample
            | Error::InsufficientSample { .. }
            | Error::Io(_) => 3,
            _ => 4,
        }
    }
}
