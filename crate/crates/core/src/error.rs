use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty input")]
    EmptyInput,

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("negative entry in a vector that must lie in the nonnegative orthant: {0:?}")]
    NegativeEntry(Vec<i64>),

    #[error("invalid flag for this series: {0}")]
    InvalidFlag(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the series has no sections in degrees 1..={0}")]
    NoSections(u32),

    #[error("degree {0} of the series is empty")]
    EmptyDegree(u32),

    #[error("series is not generically finite up to degree {0}")]
    NotGenericallyFinite(u32),

    #[error("multiplicativity violated: S_{k} + S_{l} contains {point:?} which is not in S_{}", .k + .l)]
    Multiplicativity { k: u32, l: u32, point: Vec<i64> },

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("polyhedron is unbounded")]
    Unbounded,

    #[error("fiber is empty")]
    EmptyFiber,

    #[error("point {0} lies outside the interior of the support cone")]
    OutOfSupport(String),

    #[error("condition (GF') violated: {0}")]
    GfPrime(String),

    #[error("zero ideal")]
    ZeroIdeal,

    #[error("check refused: {0}")]
    Refused(String),

    #[error("dimension-zero subvariety unsupported")]
    ZeroDimensional,
}
