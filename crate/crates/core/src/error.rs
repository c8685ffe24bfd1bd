use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("index {index} out of range 1..={bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("pair ({0},{1}) is not an independent generator index")]
    NotIndependent(usize, usize),
    #[error("elements belong to different algebras")]
    ContextMismatch,
    #[error("rank parameter n must be at least 1")]
    InvalidRank,
    #[error("{0}")]
    Degenerate(String),
    #[error("dimension {dim} exceeds cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("spectrum is not rational: residual factor of degree {0}")]
    NonRationalSpectrum(usize),
    #[error("projector spec invalid: {0}")]
    InvalidProjector(String),
    #[error("statistics do not match the algebra sign")]
    StatisticsMismatch,
    #[error("no annihilating polynomial of degree <= {0} found")]
    NoRelation(usize),
    #[error("unknown check id `{0}`")]
    UnknownCheck(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
