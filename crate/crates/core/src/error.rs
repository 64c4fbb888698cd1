use thiserror::Error;

/// Errors raised by the algebra, tower, period and L-function layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("operands live at different tower levels ({0} vs {1})")]
    LevelMismatch(usize, usize),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("not an Eisenstein polynomial: {0}")]
    NotEisenstein(String),
    #[error("fixed-point iteration did not converge: {0}")]
    NonConvergence(String),
    #[error("unsupported Kummer exponent: {0}")]
    UnsupportedKummer(String),
    #[error("tower degree {degree} exceeds the configured bound {bound}")]
    TowerBound { degree: u64, bound: u64 },
    #[error("extension is inseparable or the derivative vanishes within precision")]
    Inseparable,
    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),
    #[error("embeddings belong to different components ({0} vs {1})")]
    MixedComponent(usize, usize),
    #[error("wild component {0}: series path unavailable")]
    WildUnsupported(usize),
    #[error("wild component {component} is missing: {fields}")]
    MissingWildTable { component: usize, fields: String },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("pole or zero at the evaluation point: {0}")]
    Pole(String),
    #[error("leading term is ambiguous: minimum valuation attained twice")]
    AmbiguousLeadingTerm,
    #[error("Hensel lifting failed: {0}")]
    HenselFailure(String),
    #[error("not a unit: {0}")]
    NonUnit(String),
    #[error("cross-check mismatch: {0}")]
    CrossCheck(String),
}

pub type Result<T> = std::result::Result<T, Error>;
