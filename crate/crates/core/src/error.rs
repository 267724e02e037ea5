use std::path::PathBuf;

use thiserror::Error;

use crate::exposure::Arm;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: self-loop on vertex {vertex}")]
    SelfLoop { line: usize, vertex: usize },

    #[error("line {line}: vertex id {id} out of range for a graph with {num_vertices} vertices")]
    VertexOutOfRange {
        line: usize,
        id: usize,
        num_vertices: usize,
    },

    #[error("invalid vertex id {vertex} (graph has {num_vertices} vertices)")]
    InvalidVertex { vertex: usize, num_vertices: usize },

    #[error("invalid partition: vertex {vertex} has no cluster")]
    MissingVertex { vertex: usize },

    #[error("invalid partition: vertex {vertex} listed more than once")]
    DuplicateVertex { vertex: usize },

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("degenerate treatment probability p = {0}; expected 0 < p < 1")]
    DegenerateProbability(f64),

    #[error("vertex {vertex} is exposed to {arm} but its exposure probability is zero")]
    ZeroProbability { vertex: usize, arm: Arm },

    #[error("vertex {vertex} is exposed but has no observed response")]
    MissingResponse { vertex: usize },

    #[error("no joint exposure probability for dependent pair ({i}, {j})")]
    MissingJoint { i: usize, j: usize },

    #[error("exact probabilities are only available for neighborhood exposure, not `{0}`")]
    UnsupportedSpec(String),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub(crate) fn check_probability(p: f64) -> Result<()> {
    if p > 0.0 && p < 1.0 {
        Ok(())
    } else {
        Err(Error::DegenerateProbability(p))
    }
}
