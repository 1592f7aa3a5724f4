use thiserror::Error;

use crate::subset::Subset;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set of {size} elements exceeds the cap of {cap}")]
    CapExceeded { size: usize, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("matrix has no columns")]
    EmptyMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("element {element} is outside the ground set of size {ground}")]
    ElementOutOfRange { element: usize, ground: usize },
    #[error("bases have unequal sizes ({0} and {1})")]
    UnequalBasisSizes(usize, usize),
    #[error("basis family is empty")]
    NoBases,
    #[error("basis exchange fails for {first} and {second} at element {element}")]
    ExchangeViolation { first: Subset, second: Subset, element: usize },
    #[error("circuits {0} and {1} are nested; a circuit family must be an antichain")]
    NotAntichain(Subset, Subset),
    #[error("circuit elimination fails for {first} and {second} at element {element}")]
    CircuitElimination { first: Subset, second: Subset, element: usize },
    #[error("{0} is not a flat")]
    NotFlat(Subset),
    #[error("flats {0} and {1} are not nested")]
    NotNested(Subset, Subset),
    #[error("requires a loopfree matroid; loops: {0}")]
    Loops(Subset),
    #[error("requires a connected matroid; found {0} connected components")]
    Disconnected(usize),
    #[error("requires an essential arrangement (full row rank); matrix rank {rank} < {rows} rows")]
    NotEssential { rank: usize, rows: usize },
    #[error("not a maximal chain of flats: {0}")]
    NotMaximalChain(String),
    #[error("malformed partition: {0}")]
    MalformedPartition(String),
    #[error("not a building set; order isomorphism fails below {0}")]
    NotBuildingSet(Subset),
    #[error("matrix does not preserve the all-ones direction")]
    NotQuotientMap,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
