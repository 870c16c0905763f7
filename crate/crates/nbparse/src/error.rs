use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("head rule file, line {line}: {message}")]
    HeadRules { line: usize, message: String },

    #[error("malformed tree: {0}")]
    MalformedTree(String),

    #[error("empty sentence")]
    EmptySentence,

    #[error("illegal transition {transition}: {reason}")]
    IllegalTransition { transition: String, reason: String },

    #[error("configuration is not terminal: {0}")]
    NotTerminal(String),

    #[error("invalid transition string {0:?}")]
    TransitionSyntax(String),

    #[error("no legal transition available")]
    NoLegalTransition,

    #[error("dynamic oracle returned no zero-cost transition (sentence {sentence}, step {step})")]
    EmptyZeroCost { sentence: usize, step: usize },

    #[error("model file, line {line}: {message}")]
    Model { line: usize, message: String },

    #[error("sentence {index}: {message}")]
    Mismatch { index: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
