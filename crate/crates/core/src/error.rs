use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by expression handling, the norm engine and the witness
/// constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected length {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    #[error("generator index {index} out of range for dimension {dim} (indices start at 1)")]
    Index { index: usize, dim: usize },

    #[error("syntax error at line {line}, column {column}: expected {expected}, found {found}")]
    Parse {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error(
        "capacity exceeded: {what} needs {required} free sign bits but the enumeration cap is {cap}; \
         use the heuristic (uncertified) constraint instead"
    )]
    Capacity {
        what: String,
        required: usize,
        cap: usize,
    },

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    /// Capacity and domain errors map to a distinct CLI exit status.
    pub fn is_capacity_or_domain(&self) -> bool {
        matches!(
            self,
            Error::Capacity { .. } | Error::Domain(_) | Error::Degenerate(_)
        )
    }
}
