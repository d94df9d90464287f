use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("invariant factors must be >= 2 and each must divide the next: {0:?}")]
    InvariantFactorChain(Vec<String>),

    #[error("endomorphism is not well defined: {0}")]
    IllDefinedEndomorphism(String),

    #[error("map is not an automorphism: {0}")]
    NotAutomorphism(String),

    #[error("element does not belong to the group: {0}")]
    InvalidElement(String),

    #[error("Reidemeister number is infinite")]
    InfiniteReidemeister,

    #[error("not a permutation of 1..{degree}: {detail}")]
    InvalidPermutation { degree: usize, detail: String },

    #[error("{what} exceeds the configured cap of {cap}")]
    CapExceeded { what: &'static str, cap: usize },

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("generator images do not extend to a homomorphism")]
    NotHomomorphism,

    #[error("homomorphism is not bijective")]
    NotBijective,

    #[error("expected {expected} generator images, got {found}")]
    ImageCount { expected: usize, found: usize },

    #[error("subset is not a subgroup")]
    NotSubgroup,

    #[error("subgroup is not normal")]
    NotNormal,

    #[error("subgroup is not invariant under the automorphism")]
    NotInvariant,

    #[error("group is not abelian: {0}")]
    NotAbelian(&'static str),

    #[error("no suitable prime below {0}")]
    NoSuitablePrime(u64),

    #[error("character table inconsistency: {0}")]
    CharacterTable(String),

    #[error("sequence has an infinite entry at n = {0}")]
    InfiniteEntry(usize),

    #[error("automorphism order not found within {0} iterations")]
    OrderNotFound(usize),

    #[error("{0}")]
    Serialization(String),
}

impl Error {
    pub fn is_cap_exceeded(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}
