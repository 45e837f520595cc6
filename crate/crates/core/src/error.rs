use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("point coincides with the inversion center of step {step}")]
    SingularPoint { step: usize },

    #[error("vertex {vertex} maps to a singular point of the deformation (step {step})")]
    SingularVertex { vertex: usize, step: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid transformation: {0}")]
    InvalidTransform(String),

    #[error("complex Mobius coefficients are degenerate (ad - bc = 0)")]
    DegenerateCoefficients,

    #[error("input lies on the pole of the complex Mobius map")]
    PoleAtInput,

    #[error("invalid field: {0}")]
    InvalidField(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("{path}:{line}: face has {count} vertices, only triangles are supported")]
    NonTriangleFace {
        path: PathBuf,
        line: usize,
        count: usize,
    },

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("vertex {0} is out of range")]
    VertexOutOfRange(usize),

    #[error("vertex {0} has a non-manifold neighborhood")]
    NonManifoldVertex(usize),

    #[error("vertex {0} has an inconsistently oriented fan")]
    NonOrientableFan(usize),

    #[error("vertex {vertex} has {found} neighbors, at least {required} required")]
    TooFewNeighbors {
        vertex: usize,
        found: usize,
        required: usize,
    },

    #[error("vertex {0} is on the boundary")]
    BoundaryVertex(usize),

    #[error("face {0} has zero area")]
    DegenerateTriangle(usize),

    #[error("correspondence is empty")]
    EmptyCorrespondence,

    #[error("descriptor set is empty")]
    EmptyDescriptors,

    #[error("every descriptor dimension has zero spread")]
    AllDimensionsDegenerate,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
