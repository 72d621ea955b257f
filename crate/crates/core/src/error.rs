use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: labels have {labels} points, predictions have {predictions}")]
    LengthMismatch { labels: usize, predictions: usize },

    #[error("invalid binary value {value} at index {index}: expected 0 or 1")]
    InvalidFlag { index: usize, value: f64 },

    #[error("invalid attack setup: {0}")]
    InvalidSetup(String),

    #[error("alpha ({alpha}) exceeds series length ({len})")]
    AlphaTooLarge { alpha: usize, len: usize },

    #[error("event {start}..={end} does not fit in a series of length {len}")]
    EventOutOfRange {
        start: usize,
        end: usize,
        len: usize,
    },

    #[error("row {row}: {message}")]
    Ingestion { row: usize, message: String },

    #[error("channel mismatch: model expects {expected} channels, frame has {found}")]
    ChannelMismatch { expected: usize, found: usize },

    #[error("training frame needs at least 2 rows, got {0}")]
    TooFewRows(usize),

    #[error("score series is empty")]
    EmptyScores,

    #[error("infeasible event layout: {0}")]
    InfeasibleLayout(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model file: {0}")]
    Model(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_same_len(labels: usize, predictions: usize) -> Result<()> {
    if labels != predictions {
        return Err(Error::LengthMismatch {
            labels,
            predictions,
        });
    }
    Ok(())
}
