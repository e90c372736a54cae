use thiserror::Error;

/// Errors produced by the library. Infeasibility and instability are not
/// errors: they are reported through `SolveResult` and `StabilityReport`.
#[derive(Debug, Error)]
pub enum Error {
    #[error("discount factor {0} is outside [0, 1)")]
    DiscountOutOfRange(String),

    #[error("game has no actions")]
    EmptyGame,

    #[error("payoff sequence cycle must be nonempty")]
    EmptyCycle,

    #[error("hazing cost must be a positive integer, got {0}")]
    NonPositiveHazing(i64),

    #[error("threshold {threshold} exceeds the final hazing threshold {delta}")]
    ThresholdAboveDelta { threshold: i64, delta: i64 },

    #[error("step {step} refers to action {index}, but the alphabet has {len} actions")]
    InvalidStep { step: usize, index: usize, len: usize },

    #[error("sequence is not stable in the limit (first violation at step {0})")]
    NotStable(usize),

    #[error("epsilon must lie in (0, 1], got {0}")]
    InvalidEpsilon(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("invalid ussp instance: {0}")]
    InvalidUssp(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
