use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Structural problem in an input file (bad header, wrong cell count, ...).
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },

    #[error("duplicate word '{0}'")]
    DuplicateWord(String),

    #[error("duplicate across sections: '{0}'")]
    DuplicateAcrossSections(String),

    #[error("empty section [{0}]")]
    EmptySection(&'static str),

    #[error("invalid word '{0}': words must be non-empty and contain no whitespace")]
    InvalidWord(String),

    #[error("{kind} '{word}' absent")]
    MissingWord { kind: &'static str, word: String },

    #[error("row '{row}', column '{col}': {msg}")]
    BadCell { row: String, col: String, msg: String },

    #[error("distribution sums to {sum} for '{word}'")]
    BadDistribution { word: String, sum: f64 },

    #[error("zero-norm vector for '{0}'")]
    ZeroNorm(String),

    #[error("noun has no observations: '{0}'")]
    NoObservations(String),

    #[error("count overflow: {0}")]
    Overflow(String),

    #[error("degenerate pair: both nouns are index {0}")]
    DegeneratePair(usize),

    #[error("index {index} out of range for {kind} of size {len}")]
    OutOfRange {
        kind: &'static str,
        index: usize,
        len: usize,
    },

    #[error("role mismatch: model is {model}, configuration is {config}")]
    RoleMismatch {
        model: crate::rsa::Role,
        config: crate::rsa::Role,
    },

    #[error("metric mismatch: expected {expected}, found {found}")]
    MetricMismatch {
        expected: crate::association::Metric,
        found: crate::association::Metric,
    },

    #[error("no association table loaded for metric {0}")]
    MissingMetric(crate::association::Metric),

    #[error("lexicon mismatch: {0}")]
    LexiconMismatch(String),

    #[error("rationality parameter must be finite and > 0, got {0}")]
    InvalidAlpha(f64),

    #[error("invalid model spec '{0}': expected metric:literal or metric:pragmatic[:alpha]")]
    InvalidModelSpec(String),

    #[error("support mismatch: {0}")]
    SupportMismatch(String),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid settings: {0}")]
    InvalidSettings(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(line: usize, msg: impl Into<String>) -> Self {
        Error::Format {
            line,
            msg: msg.into(),
        }
    }
}
