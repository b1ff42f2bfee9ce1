use thiserror::Error;

use crate::walks::AdmissibilityReport;

/// Errors raised by graph construction, measure kernels and oracles.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProximityError {
    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge weight must be finite and strictly positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("{0} requires an undirected graph")]
    DirectedUnsupported(&'static str),

    #[error("{0} requires a directed graph")]
    UndirectedUnsupported(&'static str),

    #[error("scale factor must be positive and finite, got {0}")]
    NonPositiveScale(f64),

    #[error("weight matrix is not symmetric (entry ({row}, {col}) differs by {diff:e})")]
    AsymmetricWeights { row: usize, col: usize, diff: f64 },

    #[error("{what} exceeds the configured cap: {actual} > {limit}")]
    CapExceeded {
        what: &'static str,
        limit: usize,
        actual: usize,
    },

    #[error("edge weight {0} is not a probability in [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("route series does not converge: {}", .0.diagnostic())]
    Divergent(Box<AdmissibilityReport>),

    #[error("rank-one update is singular: 1 - delta * p_tk = {0:e}")]
    SingularUpdate(f64),

    #[error("matrix is numerically singular")]
    Singular,

    #[error("alpha must be nonzero")]
    ZeroAlpha,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("vertex set is not a macrovertex: {0}")]
    InvalidMacrovertex(String),
}

pub type Result<T> = std::result::Result<T, ProximityError>;
