use thiserror::Error;

/// Errors produced anywhere in the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("weight for player {player}, strategy {strategy} must be positive and finite, got {value}")]
    NonPositiveWeight {
        player: usize,
        strategy: usize,
        value: f64,
    },

    #[error("non-finite payoff entry: {0}")]
    NonFiniteEntry(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("malformed JSON: {0}")]
    MalformedJson(String),

    #[error("schema violation: {0}")]
    SchemaViolation(String),

    #[error("duplicate axis {0}")]
    DuplicateAxis(usize),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("wrong player count: {0}")]
    WrongPlayerCount(String),

    #[error("non-uniform weights: {0}")]
    NonUniformWeights(String),

    #[error("not a potential game: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotAPotentialGame { residual: f64, tolerance: f64 },

    #[error("not zero-sum equivalent: residual {residual:e} exceeds tolerance {tolerance:e}")]
    NotZeroSumEquivalent { residual: f64, tolerance: f64 },

    #[error("finite-difference stencil leaves the box: {0}")]
    StencilOutOfBox(String),

    #[error("box must lie strictly inside (0, +inf) on every axis: {0}")]
    BoxNotPositive(String),
}

pub type Result<T> = std::result::Result<T, Error>;
