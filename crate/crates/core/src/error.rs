use thiserror::Error;

use crate::pauli::Basis;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("label space mismatch: {left} vs {right}")]
    LabelSpaceMismatch { left: usize, right: usize },

    #[error("vertex {0} is not part of the graph")]
    UnknownVertex(usize),

    #[error("invalid edge ({0}, {1})")]
    InvalidEdge(usize, usize),

    #[error("special neighbor {w0:?} is not a neighbor of {vertex} for an x measurement")]
    InvalidSpecialNeighbor { vertex: usize, w0: Option<usize> },

    #[error("graph has {vertices} vertices, above the limit of {limit} for exact stabilizer evaluation")]
    GraphTooLarge { vertices: usize, limit: usize },

    #[error("dense oracle refuses {qubits} qubits (limit {limit})")]
    OracleTooLarge { qubits: usize, limit: usize },

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("invalid time parameter: {0}")]
    InvalidTime(String),

    #[error("channel weights sum to {0}, expected 1")]
    NotNormalized(f64),

    #[error("operator support leaves the target vertices")]
    SupportLeak,

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("invalid measurement pattern: {0}")]
    InvalidPattern(String),

    #[error("measurement of vertex {vertex} in basis {basis} has no valid translation")]
    Untranslatable { vertex: usize, basis: Basis },

    #[error("chain of {0} qubits is too short")]
    ChainTooShort(usize),

    #[error("exhaustive search over a {0}-qubit path exceeds the configured cap of {1}")]
    SearchTooLarge(usize, usize),

    #[error("targets {0} and {1} are not connected in the resource state")]
    Disconnected(usize, usize),

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("invalid config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
