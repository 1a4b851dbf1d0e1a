use thiserror::Error;

use crate::rootsys::Weight;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported root system {label}{rank}")]
    UnsupportedType { label: String, rank: usize },

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("Weyl group of order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u64, cap: u64 },

    #[error("weight {0} is not dominant")]
    NotDominant(Weight),

    #[error("{0} is not prime")]
    NotPrime(i64),

    #[error("character is not W-invariant at weight {0}")]
    NotWInvariant(Weight),

    #[error("highest-weight peeling did not terminate at weight {0}")]
    NonTerminating(Weight),

    #[error("composition factors of a module below {0} could not be certified exactly")]
    Ambiguous(Weight),

    #[error("the induced module of highest weight {0} is simple")]
    SimpleModule(Weight),

    #[error("operation requires type A, got type {0}")]
    WrongType(String),

    #[error("p = {p} is smaller than h - 1 = {}", h - 1)]
    PTooSmall { p: i64, h: i64 },

    #[error("integer overflow")]
    Overflow,

    #[error("sum formula for {lambda} has negative coefficient {coeff} at L{mu}")]
    NegativeLayer {
        lambda: Weight,
        mu: Weight,
        coeff: i64,
    },

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error("cache file: {0}")]
    Cache(String),
}
