use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("family `{family}`: {u} lists {v} as a neighbour but not vice versa")]
    AsymmetricAdjacency {
        family: String,
        u: Vertex,
        v: Vertex,
    },

    #[error("family `{family}`: vertex {vertex} has infinitely many neighbours")]
    UnboundedNeighborhood { family: String, vertex: Vertex },

    #[error("horizon {actual} is too small for {context}; required horizon is {required}")]
    HorizonTooSmall {
        required: u32,
        actual: u32,
        context: String,
    },

    #[error("unknown end `{0}`")]
    UnknownEnd(String),

    #[error("vertex {0} is not part of the truncation")]
    UnknownVertex(String),

    #[error("regions {first} and {second} touch")]
    TouchingRegions { first: usize, second: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("envelope contract violated: {0}")]
    EnvelopeContract(String),

    #[error("region contract violated: {0}")]
    RegionContract(String),

    #[error("invalid graph input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures caused by a horizon below some stabilization certificate.
    pub fn is_certificate(&self) -> bool {
        matches!(self, Error::HorizonTooSmall { .. })
    }
}
