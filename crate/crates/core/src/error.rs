use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("undecided at precision cap {cap}: {context}")]
    PrecisionExhausted { cap: u32, context: String },

    #[error("{what} exceeds cap {cap}: need {need}")]
    CapExceeded { what: &'static str, need: String, cap: u64 },

    #[error("no admissible sequence term at level {level} below cap {cap}")]
    NoAdmissibleTerm { level: usize, cap: u64 },

    #[error("depth {requested} unreachable: term {at} is symbolic (tail-only)")]
    DepthUnreachable { requested: usize, at: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
