use thiserror::Error;

/// Errors raised by the engine. Every variant has a stable name used by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("Laurent tail overflow: exponent {exponent} is below -{tail}")]
    TailOverflow { exponent: i64, tail: u32 },
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("insufficient precision: {0}")]
    InsufficientPrecision(String),
    #[error("group law axiom failed: {0}")]
    AxiomFailure(String),
    #[error("not a Q-algebra: {0}")]
    NotQAlgebra(String),
    #[error("nonzero constant term: {0}")]
    ConstantTerm(String),
    #[error("not nilpotent: {0}")]
    NotNilpotent(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("unrepresentable: {0}")]
    Unrepresentable(String),
    #[error("isomorphism is not strict: {0}")]
    NonStrict(String),
    #[error("non-convergent configuration: {0}")]
    NonConvergent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    pub fn name(&self) -> &'static str {
        match self {
            Error::RingMismatch(_) => "RingMismatch",
            Error::ContextMismatch(_) => "ContextMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::TailOverflow { .. } => "TailOverflow",
            Error::TruncationTooSmall(_) => "TruncationTooSmall",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::AxiomFailure(_) => "AxiomFailure",
            Error::NotQAlgebra(_) => "NotQAlgebra",
            Error::ConstantTerm(_) => "ConstantTerm",
            Error::NotNilpotent(_) => "NotNilpotent",
            Error::Pole(_) => "Pole",
            Error::Unrepresentable(_) => "Unrepresentable",
            Error::NonStrict(_) => "NonStrict",
            Error::NonConvergent(_) => "NonConvergent",
            Error::Parse(_) => "Parse",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
