use thiserror::Error;

/// Errors produced when building or combining the finite structures.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("element index {index} out of range for carrier of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("unknown element label `{0}`")]
    UnknownLabel(String),

    #[error("operands live over different posets")]
    PosetMismatch,

    #[error("not a lattice: {0}")]
    NotLattice(String),

    #[error("lattice is not distributive: {0}")]
    NotDistributive(String),

    #[error("boolean algebra needs at least one atom")]
    EmptyAtomSet,

    #[error("map is not a morphism: violates {0}")]
    NotMorphism(String),

    #[error("semilattice has no element besides the bottom; the free frame over it is degenerate")]
    DegenerateBase,

    #[error("vector algebra dimension must be at least 1")]
    ZeroDimension,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("function is not normal (it differs from its normalization)")]
    NotNormal,

    #[error("{what} would enumerate {size} items, above the cap of {cap}")]
    CapExceeded { what: String, size: u64, cap: u64 },

    #[error("cannot parse rational `{0}`")]
    BadRational(String),

    #[error("invalid input: {0}")]
    BadInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
