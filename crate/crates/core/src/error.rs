use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("iterations are 1-indexed; got n = 0")]
    ZeroIteration,

    #[error("invalid learning rate: {0}")]
    InvalidSchedule(String),

    #[error("non-finite input to {0}")]
    NonFinite(&'static str),

    #[error("label {y} is not valid for the {family} loss")]
    InvalidLabel { family: &'static str, y: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(
        "fixed point outside its bracket [{lo}, {hi}]: the loss is not convex in the predictor"
    )]
    BracketViolation { lo: f64, hi: f64 },

    #[error("fixed point did not converge after {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("dataset is empty")]
    EmptyDataset,

    #[error("config: {0}")]
    Config(String),

    #[error("unknown {kind} `{name}` (expected one of: {expected})")]
    Unknown {
        kind: &'static str,
        name: String,
        expected: &'static str,
    },

    #[error(
        "slope fit needs at least {needed} finite positive points in the window, found {found}"
    )]
    TooFewPoints { needed: usize, found: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the filesystem rather than by bad input.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io(_))
    }
}
