use thiserror::Error;

/// Errors raised by the exact level-set machinery.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TakagiError {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The binary orbit of a rational is longer than the exactness cap allows.
    #[error("orbit period exceeds the cap of {cap} states")]
    OrbitTooLong { cap: usize },

    /// A Takagi expansion violates the admissibility rules.
    #[error("inadmissible expansion: {0}")]
    Inadmissible(String),

    /// An exact value was requested from a truncated expansion.
    #[error("expansion {0} is truncated; no exact value available")]
    Truncated(String),

    /// The level set is infinite, so it cannot be enumerated point by point.
    #[error("level set at {0} is infinite")]
    InfiniteLevelSet(String),

    /// The work budget ran out before a certificate closed the computation.
    #[error("budget of {budget} exhausted")]
    BudgetExhausted { budget: u64 },

    /// A configurable size cap was exceeded.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, TakagiError>;
