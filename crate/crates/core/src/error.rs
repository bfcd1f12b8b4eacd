use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Validation,
    Numerical,
    Io,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph `{0}` is disconnected")]
    Disconnected(String),
    #[error("edge `{edge}` references unknown vertex `{vertex}`")]
    DanglingEndpoint { edge: String, vertex: String },
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("first Betti number {betti} does not match torus rank {rank}")]
    BettiMismatch { betti: usize, rank: usize },
    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("weight violation on edge `{edge}`: {reason}")]
    WeightViolation { edge: String, reason: String },
    #[error("weights are toric-degenerate: {0}")]
    Degenerate(String),
    #[error("lifted action is not unimodular (det = {0})")]
    NotUnimodular(i64),
    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("eigen-solver failed to converge after {0} sweeps")]
    NoConvergence(usize),
    #[error("homomorphism check failed: {0}")]
    Homomorphism(String),
    #[error("group closure exceeded cap {0}")]
    CapExceeded(usize),
    #[error("cocycle order {order} exceeds maximum {max}")]
    MaxOrderExceeded { order: u64, max: u64 },
    #[error("numerical contract violated: {0}")]
    Contract(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown built-in graph `{0}` (expected one of P, D, G, honeycomb)")]
    UnknownBuiltin(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::NotHermitian(_)
            | Error::NoConvergence(_)
            | Error::Homomorphism(_)
            | Error::CapExceeded(_)
            | Error::MaxOrderExceeded { .. }
            | Error::NotUnimodular(_)
            | Error::Contract(_) => ErrorKind::Numerical,
            Error::Io(_) => ErrorKind::Io,
            _ => ErrorKind::Validation,
        }
    }

    pub fn contract(msg: impl Into<String>) -> Self {
        Error::Contract(msg.into())
    }
}
