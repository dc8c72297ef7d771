use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("tower error: {0}")]
    Tower(String),
    #[error("ring has no cyclotomic constants: {0}")]
    NotCyclotomic(String),
    #[error("tau is undefined at level 0")]
    LevelZero,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    #[error("not a unit: {0}")]
    NotUnit(String),
    #[error("undecidable: {0}")]
    Undecidable(String),
    #[error("ideal membership undecidable: {0}")]
    MembershipUndecidable(String),
    #[error("eta is a zero divisor in the base")]
    EtaZeroDivisor,
    #[error("not Galois: determinant {det}")]
    NotGalois { det: String },
    #[error("linear solve failed: {0}")]
    SolveFailed(String),
    #[error("unsupported base: {0}")]
    UnsupportedBase(String),
    #[error("rank {rank} exceeds cap {cap}")]
    RankOverflow { rank: usize, cap: usize },
    #[error("characteristic mismatch: {0}")]
    CharMismatch(String),
    #[error("not Azumaya: {0}")]
    NotAzumaya(String),
    #[error("ideal product is not S: {0}")]
    ProductNotS(String),
    #[error("not suitable: {0}")]
    NotSuitable(String),
    #[error("certificate failed: {0}")]
    CertFailed(String),
    #[error("unknown lemma {name}; registry: {known}")]
    UnknownLemma { name: String, known: String },
    #[error("internal error: {0}")]
    Internal(String),
}
