use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: parse error: {message}")]
    Parse {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("{line}:{col}: sort error: {message}")]
    Sort {
        line: usize,
        col: usize,
        message: String,
    },

    #[error("malformed script: {0}")]
    Script(String),

    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("unsupported logic `{0}` (expected QF_NIA, QF_UFNIA, QF_DTNIA or QF_UFDTNIA)")]
    UnsupportedLogic(String),

    #[error("position {0} is not valid in this formula")]
    InvalidPosition(String),

    #[error("let expansion grew the script from {before} to more than {limit} term nodes")]
    LetExpansionTooLarge { before: usize, limit: usize },

    #[error("search box has {size} assignments, budget is {budget}")]
    BudgetExceeded { size: u128, budget: u128 },

    #[error("invariant violation: {0}")]
    Invariant(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Inconsistent command line options.
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("{0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
