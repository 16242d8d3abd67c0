use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid multi-index: {0}")]
    InvalidIndex(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("series parameters mismatch: (n={0}, q={1}) vs (n={2}, q={3})")]
    SeriesMismatch(usize, usize, usize, usize),

    #[error("degree {0} exceeds truncation degree {1}")]
    DegreeExceeded(usize, usize),

    #[error("generator index {0} out of range for rank {1}")]
    GeneratorOutOfRange(usize, usize),

    #[error("component count mismatch: {0} vs {1}")]
    ComponentMismatch(usize, usize),

    #[error("component {0} out of range (diagram has {1})")]
    ComponentOutOfRange(usize, usize),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("braid is not pure; strand permutation {0:?}")]
    NonPureBraid(Vec<usize>),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
