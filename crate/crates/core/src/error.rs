use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("family constraint violated: {0}")]
    FamilyConstraint(String),
    #[error("polynomial is not squarefree")]
    NotSquarefree,
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("field of order {0} exceeds the table-arithmetic limit")]
    FieldTooLarge(u64),
    #[error("modulus mismatch")]
    ModulusMismatch,
    #[error("trivial character has no polynomial L-function")]
    TrivialCharacter,
    #[error("odd character: trace convention undefined")]
    OddCharacter,
    #[error("character is not periodic modulo its declared modulus")]
    NotPeriodic,
    #[error("non-integral L-coefficient at degree {0}")]
    NonIntegral(usize),
    #[error("L-function degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("singular matrix")]
    Singular,
    #[error("enumeration budget of {limit} exceeded (needed {needed})")]
    BudgetExceeded { limit: u64, needed: u128 },
    #[error("root finding failed: {0}")]
    RootFinding(String),
    #[error("certification failure: {0}")]
    Certification(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("corrupt record: {0}")]
    CorruptRecord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
