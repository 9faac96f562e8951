use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("exact division failed: divisor does not divide dividend")]
    NotDivisible,
    #[error("rational function with zero denominator")]
    ZeroDenominator,
    #[error("lattice vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("gamma_twist is only defined on elements without a T_gamma component")]
    MixedInput,
    #[error("multisegments have different infinitesimal data")]
    DifferentInfinitesimal,
    #[error("multisegment is not fixed by gamma duality")]
    NotGammaFixed,
    #[error("segments are not in standard order: {0}")]
    UnorderedSegments(String),
    #[error("bad specialization q = {0}")]
    BadSpecialization(String),
    #[error("intertwiner denominator vanishes at the inducing character: {0}")]
    SingularDenominator(String),
    #[error("irreducible factor could not be labelled: {0}")]
    LabelMatchFailure(String),
    #[error("module does not have a unique irreducible quotient: {0}")]
    NotUniqueQuotient(String),
    #[error("multiplicity recipe not validated for size {0}")]
    RecipeUnvalidated(usize),
    #[error("entry requires the oracle above its threshold: dimension {dim} > {threshold}")]
    OracleRequired { dim: usize, threshold: usize },
    #[error("linear system is singular: {0}")]
    SingularSystem(String),
    #[error("oracle could not decide irreducibility: {0}")]
    OracleUndecided(String),
    #[error("module relation violated: {0}")]
    RelationFailure(String),
    #[error("invalid input: {0}")]
    BadInput(String),
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::BadInput(e.to_string())
    }
}
