use thiserror::Error;

use crate::model::{VertexId, Violation};

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid graph: {}", list(.0))]
    InvalidGraph(Vec<Violation>),
    #[error("representation has no coordinate for {0}")]
    MissingCoordinate(VertexId),
    #[error("rectangles {0} and {1} overlap on their layer")]
    RowOverlap(VertexId, VertexId),
    #[error("bad epsilon: {0}")]
    Epsilon(String),
    #[error("network infeasible: {0}")]
    Infeasible(String),
    #[error("internal solver error: {0}")]
    Internal(String),
    #[error("unsupported input: {0}")]
    Unsupported(String),
    #[error("instance too large for the oracle: {0}")]
    TooLarge(String),
    #[error("oracle disagrees: {0}")]
    OracleMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn list(v: &[Violation]) -> String {
    v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
