use thiserror::Error;

/// Everything that can go wrong while building, refining, or checking a construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("node collision: {0}")]
    NodeCollision(String),

    #[error("precision exhausted: {requested} bits requested, ceiling is {ceiling} bits")]
    PrecisionExhausted { requested: u32, ceiling: u32 },

    #[error("bad seed: {0}")]
    BadSeed(String),

    #[error("search exhausted at step {step}: no admissible offset 2^-m with m <= {cap}")]
    SearchExhausted { step: usize, cap: u32 },

    #[error("requested dimension {requested} exceeds construction depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },

    #[error("spectral oracle failure: {0}")]
    OracleFailure(String),

    #[error("no n in [2, {depth}] with j(n) = {k}")]
    EmptyWindow { k: usize, depth: usize },

    #[error("undecided at {bits} bits: {what}")]
    Undecided { what: String, bits: u32 },

    #[error("construction invariant violated: {0}")]
    InvariantViolated(String),

    #[error("corrupt state: {0}")]
    CorruptState(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
