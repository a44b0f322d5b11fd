use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Validation errors carry enough context to point at the offending entry;
/// callers that only need a pass/fail can match on the variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("negative mass {value:e} at flat index {index} (below -{tol:e})")]
    NegativeMass { index: usize, value: f64, tol: f64 },

    #[error("probabilities sum to {sum} ({excess:+e} from 1, tolerance {tol:e})")]
    NotNormalized { sum: f64, excess: f64, tol: f64 },

    #[error("conditioning on zero-probability event '{symbol}'")]
    ZeroEvent { symbol: String },

    #[error("axis mismatch: {0}")]
    AxisMismatch(String),

    #[error("posterior undefined: marginal mass of '{symbol}' is zero")]
    UndefinedPosterior { symbol: String },

    #[error("zero mass at '{symbol}': construction needs strictly positive entries")]
    ZeroMass { symbol: String },

    #[error("{what} has size {size}, exceeding the cap of {cap}")]
    TooLarge {
        what: &'static str,
        size: u128,
        cap: u128,
    },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("dataset too small: {rows} rows, need at least {min}")]
    TooSmall { rows: usize, min: usize },

    #[error("column '{column}' is not binary: {arity} categories")]
    NotBinary { column: String, arity: usize },

    #[error("no column named '{0}'")]
    MissingColumn(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("training diverged: {0}")]
    Divergence(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(format!("json: {e}"))
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(format!("csv: {e}"))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
