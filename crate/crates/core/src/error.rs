use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MgError {
    #[error("invalid Cartan matrix: {0}")]
    InvalidCartan(String),
    #[error("unknown type label `{0}`")]
    UnknownType(String),
    #[error("group too large or infinite (more than {0} elements)")]
    GroupTooLarge(usize),
    #[error("mismatched datum")]
    MismatchedDatum,
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error("word `{0}` is not reduced")]
    NotReduced(String),
    #[error("cannot parse word `{0}`")]
    BadWord(String),
    #[error("element is not a minimal coset representative")]
    NotInQuotient,
    #[error("unknown vertex")]
    UnknownVertex,
    #[error("vertex set is not s-invariant")]
    NotInvariant,
    #[error("degree bound too small")]
    BoundTooSmall,
    #[error("not graded free at this bound")]
    NotGradedFree,
    #[error("input is not BMP-presented")]
    NotBmpPresented,
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, MgError>;
