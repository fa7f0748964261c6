use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("extension degree must be odd, got {0}")]
    EvenDegree(usize),
    #[error("extension degree {0} outside supported range 3..=13")]
    DegreeOutOfRange(usize),
    #[error("modulus {modulus} must be monic of degree {expected}")]
    ModulusShape { modulus: String, expected: usize },
    #[error("modulus {modulus} is reducible: divisible by {factor}{}", root.map(|r| format!(" (root {r})")).unwrap_or_default())]
    ReducibleModulus {
        modulus: String,
        factor: String,
        root: Option<u8>,
    },
    #[error("cannot parse field element {text:?}: {reason}")]
    Parse { text: String, reason: String },
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("{0} is not a nonzero square")]
    NotASquare(String),
    #[error("difference a must be nonzero")]
    ZeroDifference,
    #[error("u = {u} is in class {class}, outside U0 \\ F3")]
    OutOfDomain { u: String, class: String },
    #[error("closed-form term {term} not integral: {numerator} / {denominator}")]
    NonIntegral {
        term: &'static str,
        numerator: i64,
        denominator: i64,
    },
    #[error("inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
