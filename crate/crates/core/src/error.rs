use thiserror::Error;

/// Errors raised by graph construction, trace handling and reconstruction.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("self-loop ({0}, {0}) is not allowed in a simple graph")]
    SelfLoop(usize),

    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EdgeOutOfRange { u: usize, v: usize, n: usize },

    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("{family} graph needs at least {min} vertices, got {n}")]
    TooFewVertices {
        family: &'static str,
        min: usize,
        n: usize,
    },

    #[error("probability {0} is outside [0, 1]")]
    InvalidProbability(f64),

    #[error("graphs have different vertex counts ({0} vs {1})")]
    VertexCountMismatch(usize, usize),

    #[error("trace length must be at least 2, got {0}")]
    TraceLength(usize),

    #[error("trace contains vertex {0} more than once")]
    DuplicateVertex(usize),

    #[error("operation requires traces of size {expected}, trace set has size {found}")]
    TraceSize { expected: usize, found: usize },

    #[error("trace of size {size} exceeds the ordering search cap of {cap}")]
    TraceCapExceeded { size: usize, cap: usize },

    #[error("pair ({0}, {1}) must be an edge of the graph")]
    NotAnEdge(usize, usize),

    #[error("pair ({0}, {1}) must not be an edge of the graph")]
    IsAnEdge(usize, usize),

    #[error("{0} must be between 0 and {1}")]
    IndexRange(&'static str, usize),

    #[error("n must be at least 3 for the error-rate formulas, got {0}")]
    TheoryDomain(usize),

    #[error("summation for {what} produced {value}, outside [0, 1]")]
    ProbabilityOverflow { what: &'static str, value: f64 },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
