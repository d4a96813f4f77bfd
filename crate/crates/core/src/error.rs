use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty code: a set or chain code needs at least one entry")]
    EmptyCode,
    #[error("invalid segment [{p}, {q}] for a chain with last index {last}")]
    InvalidSegment { p: usize, q: usize, last: usize },
    #[error("radius must be positive")]
    NonPositiveRadius,
    #[error("epsilon must be positive")]
    NonPositiveEpsilon,
    #[error("search stopped undecided at cap {cap}")]
    UndecidedAtCap { cap: u64 },
    #[error("search budget of {steps} steps exhausted")]
    BudgetExhausted { steps: u64 },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("fixture error: {0}")]
    Fixture(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
