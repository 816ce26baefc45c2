use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unsupported type: {0}")]
    Unsupported(String),
    #[error("rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("cannot reflect in an isotropic vector")]
    Isotropic,
    #[error("reflection image leaves the half-integer lattice")]
    NonLattice,
    #[error("element cap of {cap} exceeded")]
    CapExceeded { cap: usize },
    #[error("map does not permute the root set")]
    NotAnAutomorphism,
    #[error("element does not normalize the frame")]
    NotNormalizing,
    #[error("coordinate context mismatch")]
    ContextMismatch,
    #[error("variable {0} is not covered by the coordinate map")]
    UncoveredVariable(usize),
    #[error("invalid index tuple: {0}")]
    InvalidIndex(String),
    #[error("squared norm {0} is not a power of two times a square")]
    UnsupportedNorm(String),
    #[error("orbit of size {size} is not acted on simply transitively by a quotient of order {quotient}")]
    NotSimplyTransitive { size: usize, quotient: usize },
    #[error("coset key is not faithful: {orbit} x {subgroup} != {order}; fall back to enumerating W")]
    NotFaithful { orbit: u64, subgroup: u64, order: u64 },
    #[error("orbit of fold {found} found, need at least {required}")]
    FoldTooSmall { found: u32, required: u32 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by a resource cap rather than bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
