//! Error type shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// All failure modes the toolkit reports.
///
/// Every variant maps to a process exit code: configuration and usage
/// problems exit with 2, everything else with 1.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input data; `row` is 1-based counting the header as row 1.
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },

    /// Input violates a structural contract (duplicate headers, non-binary
    /// target, column/encoder mismatch).
    #[error("schema error: {0}")]
    Schema(String),

    /// Invalid configuration or unusable command-line input.
    #[error("config error: {0}")]
    Config(String),

    /// A pipeline stage produced an unusable intermediate result.
    #[error("pipeline error: {0}")]
    Pipeline(String),

    /// A statistic is undefined for the given input.
    #[error("stat error: {0}")]
    Stat(String),

    /// Argument outside a function's mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Dimension mismatch between data and model.
    #[error("shape error: {0}")]
    Shape(String),

    /// Class balancing impossible (e.g. a single class present).
    #[error("balance error: {0}")]
    Balance(String),

    /// Stratified folds cannot be formed.
    #[error("stratification error: {0}")]
    Stratification(String),

    /// Feature selection kept nothing.
    #[error("selection error: {0}")]
    Selection(String),

    /// A learner could not be trained on the given data.
    #[error("training error: {0}")]
    Train(String),

    /// Training produced non-finite values.
    #[error("divergence error at epoch {epoch}: {message}")]
    Divergence { epoch: usize, message: String },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable exit code contract: 0 success, 1 internal/data error,
    /// 2 usage/config error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) => 2,
            _ => 1,
        }
    }

    /// Prefixes the failing pipeline stage onto the message, keeping the
    /// variant (and therefore the exit code) intact.
    pub fn in_stage(self, stage: &str) -> Error {
        let tag = |m: String| format!("stage {stage}: {m}");
        match self {
            Error::Parse { row, message } => Error::Parse {
                row,
                message: tag(message),
            },
            Error::Schema(m) => Error::Schema(tag(m)),
            Error::Config(m) => Error::Config(tag(m)),
            Error::Pipeline(m) => Error::Pipeline(tag(m)),
            Error::Stat(m) => Error::Stat(tag(m)),
            Error::Domain(m) => Error::Domain(tag(m)),
            Error::Shape(m) => Error::Shape(tag(m)),
            Error::Balance(m) => Error::Balance(tag(m)),
            Error::Stratification(m) => Error::Stratification(tag(m)),
            Error::Selection(m) => Error::Selection(tag(m)),
            Error::Train(m) => Error::Train(tag(m)),
            Error::Divergence { epoch, message } => Error::Divergence {
                epoch,
                message: tag(message),
            },
            Error::Io(e) => Error::Pipeline(tag(format!("io error: {e}"))),
            Error::Csv(e) => Error::Pipeline(tag(format!("csv error: {e}"))),
            Error::Json(e) => Error::Pipeline(tag(format!("serialization error: {e}"))),
        }
    }
}
