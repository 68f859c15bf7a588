use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },

    #[error("unknown tag symbol `{symbol}`")]
    UnknownTag { symbol: String },

    #[error("untagged token `{text}` (sentence {sentence}, token {index})")]
    UntaggedToken {
        text: String,
        sentence: usize,
        index: usize,
    },

    #[error("corpus shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid fold count k={k} for {n} sentences (need 2 <= k <= n)")]
    InvalidFoldCount { k: usize, n: usize },

    #[error("corpus is empty")]
    EmptyCorpus,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("model format version {found} is not supported (this build reads version {supported})")]
    ModelVersion { found: u32, supported: u32 },

    #[error("corrupt model payload: {0}")]
    ModelCorrupt(String),

    #[error("phrase [{start}, {end}) is not in the phrase list")]
    PhraseNotFound { start: usize, end: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
