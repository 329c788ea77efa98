use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("unknown field spec `{0}` (expected `padic:<p>` or `laurent:<p>`)")]
    BadFieldSpec(String),
    #[error("denominator is zero")]
    DenominatorZero,
    #[error("division by an element indistinguishable from zero")]
    DivisionByZeroLike,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("element is not a square")]
    NotASquare,
    #[error("input is indistinguishable from zero")]
    ZeroLikeInput,
    #[error("indeterminate at working precision: {0}")]
    Indeterminate(String),
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("matrix determinant does not agree with 1 (det = {0})")]
    NotUnimodular(String),
    #[error("parse error in `{literal}` at position {position}: {message}")]
    Parse {
        literal: String,
        position: usize,
        message: String,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures caused by finite precision rather than bad input.
    pub fn is_precision_related(&self) -> bool {
        matches!(
            self,
            Error::PrecisionExhausted(_) | Error::Indeterminate(_) | Error::DivisionByZeroLike
        )
    }
}
