//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("p = {0} is not prime")]
    NotPrime(u32),
    #[error("unsupported field size: {0}")]
    UnsupportedField(String),
    #[error("modulus is not irreducible over F_{p}: {detail}")]
    ReducibleModulus { p: u32, detail: String },
    #[error("invalid modulus: {0}")]
    InvalidModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("series is zero within tracked precision; valuation undetermined")]
    ValuationUndetermined,
    #[error("insufficient precision: needed {needed}, have {have}")]
    InsufficientPrecision { needed: i64, have: i64 },
    #[error("not a q-th power in K: {0}")]
    NotAQthPower(String),
    #[error("exact division left a nonzero remainder")]
    NonzeroRemainder,
    #[error("index {index} exceeds cap {cap} for q = {q}")]
    IndexCap { index: usize, cap: usize, q: u32 },
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },
    #[error("argument outside domain: {0}")]
    OutsideDomain(String),
    #[error("series does not converge: {0}")]
    Divergent(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
