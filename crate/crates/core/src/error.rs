use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported characteristic {0}")]
    UnsupportedCharacteristic(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("value {0} is not integral")]
    NonIntegral(String),
    #[error("operation needs positive characteristic")]
    NeedsPositiveCharacteristic,
    #[error("series is not a unit: constant term must be a nonzero constant")]
    NotAUnit,
    #[error("precision underflow: result would be known only below t^{0}")]
    PrecisionUnderflow(i64),
    #[error("coefficient of t^{exponent} is beyond precision {precision}")]
    BeyondPrecision { exponent: i64, precision: i64 },
    #[error("form has pole order {found}, exceeding the allowed {allowed}")]
    PoleTooDeep { found: i64, allowed: i64 },
    #[error("incompatible operands: {0}")]
    Incompatible(String),
    #[error("form degree {0} is not supported here")]
    UnsupportedDegree(usize),
    #[error("level {0} is not supported here")]
    UnsupportedLevel(u32),
    #[error("not a member of the filtration at level {0}")]
    NotMember(u32),
    #[error("fiber element is not additive: {0}")]
    NotAdditive(String),
    #[error("Frobenius exponent {found} exceeds the bound {bound}")]
    FrobeniusBound { found: u32, bound: u32 },
    #[error("Witt length {0} is not supported")]
    UnsupportedWittLength(usize),
    #[error("inexact division while building universal Witt polynomials")]
    InexactWittDivision,
    #[error("curve parametrisation must have positive t-valuation")]
    BadCurve,
    #[error("invalid input: {0}")]
    Input(String),
}

pub type Result<T> = std::result::Result<T, Error>;
