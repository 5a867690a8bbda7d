use thiserror::Error;

/// Line-number wrapper used when formatting load errors.
fn at(line: &Option<usize>) -> String {
    match line {
        Some(l) => format!(" at line {l}"),
        None => String::new(),
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("self-loop on vertex {vertex}{}", at(line))]
    SelfLoop { line: Option<usize>, vertex: usize },

    #[error("duplicate edge {u}-{v}{}", at(line))]
    DuplicateEdge {
        line: Option<usize>,
        u: usize,
        v: usize,
    },

    #[error("edge {u}-{v} is listed for {u} but not for {v}")]
    Asymmetric { u: usize, v: usize },

    #[error("vertex {vertex} out of range for graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("vertex {vertex} listed twice")]
    DuplicateVertex { vertex: usize },

    #[error("header declares {declared} edges but {found} were read")]
    EdgeCountMismatch { declared: usize, found: usize },

    #[error("graph has no edges")]
    Edgeless,

    #[error("infeasible generator parameters: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("normalized Laplacian undefined: vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("need at least two vertices, got {0}")]
    TooSmall(usize),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("graph with {0} vertices exceeds the dense limit")]
    TooLarge(usize),

    #[error("graph is disconnected")]
    Disconnected,
}

#[derive(Debug, Error)]
pub enum CutError {
    #[error("test vector is constant after removing the kernel direction")]
    ConstantVector,

    #[error("vector has length {found}, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("vertex {0} is isolated")]
    IsolatedVertex(usize),

    #[error("need at least two vertices, got {0}")]
    TooSmall(usize),

    #[error("exhaustive search limited to {limit} vertices, got {n}")]
    TooLarge { n: usize, limit: usize },

    #[error(transparent)]
    Spectral(#[from] SpectralError),
}
