use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Crate-wide error type. Variants carry enough context to locate the
/// offending layer, parameter, or file without a debugger.
#[derive(Debug, Error)]
pub enum Error {
    #[error("layer {layer}: expected input width {expected}, got {got}")]
    LayerDim {
        layer: usize,
        expected: usize,
        got: usize,
    },

    #[error("shape mismatch in {context}: expected {expected:?}, got {got:?}")]
    Shape {
        context: String,
        expected: Vec<usize>,
        got: Vec<usize>,
    },

    #[error("non-finite gradient for parameter '{param}'; step rejected")]
    NonFiniteGradient { param: String },

    #[error("non-finite loss: {context}")]
    NonFiniteLoss { context: String },

    #[error("non-finite values produced in {context}")]
    NonFinite { context: String },

    #[error("empty point cloud: {0}")]
    EmptyCloud(&'static str),

    #[error("degenerate geometry: {0}")]
    Degenerate(String),

    #[error("triangle {triangle} references vertex {vertex}, but mesh has {vertex_count} vertices")]
    TriangleIndex {
        triangle: usize,
        vertex: usize,
        vertex_count: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("unknown object id {0}")]
    UnknownObject(usize),

    #[error("unknown split protocol '{0}'")]
    UnknownProtocol(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("training diverged at epoch {epoch}: total loss {loss:.6e} exceeds guard")]
    Diverged { epoch: usize, loss: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by user input (bad arguments, missing files)
    /// as opposed to internal invariant violations.
    pub fn is_user_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidArg(_)
                | Error::UnknownObject(_)
                | Error::UnknownProtocol(_)
                | Error::Io(_)
                | Error::Dataset(_)
                | Error::Checkpoint(_)
        )
    }
}
