use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("invalid field {0}")]
    InvalidField(String),
    #[error("field of order {order} exceeds the configured limit {limit}")]
    FieldTooLarge { order: u64, limit: u64 },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("{0} is not a monic irreducible polynomial")]
    NotIrreducible(String),
    #[error("value has a pole at place {0}")]
    NotIntegralAtPlace(String),
    #[error("exponent {i} is divisible by the characteristic {p}")]
    ExponentDivisibleByP { i: u32, p: u32 },
    #[error("exponent must be positive")]
    NonPositiveExponent,
    #[error("precision exhausted: need {needed} terms, have {available}")]
    PrecisionExhausted { needed: i64, available: i64 },
    #[error("Hensel condition failed: v(f(x0)) = {value_order}, v(f'(x0)) = {derivative_order}")]
    HenselConditionFailed { value_order: i64, derivative_order: i64 },
    #[error("place {0} is ramified in the family; Frobenius is undefined")]
    RamifiedPlaceForFrobenius(String),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

impl Error {
    pub(crate) fn parse(pos: usize, msg: impl Into<String>) -> Self {
        Error::Parse { pos, msg: msg.into() }
    }
}
