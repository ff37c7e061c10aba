use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("duplicate {kind} name `{name}`")]
    DuplicateName { kind: &'static str, name: String },

    #[error("arrow `{arrow}` refers to undeclared vertex `{vertex}`")]
    DanglingEndpoint { arrow: String, vertex: String },

    #[error("quiver has an oriented cycle through `{0}`")]
    OrientedCycle(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),

    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("negative entry in dimension vector {0}")]
    NegativeDimension(String),

    #[error("representations live on different quivers")]
    QuiverMismatch,

    #[error("quiver is not connected")]
    Disconnected,

    #[error("Euler form <dim V, dim W> = {0}, expected 0")]
    EulerNonzero(i64),

    #[error("symbolic limit exceeded: {0}")]
    SymbolicLimitExceeded(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("decomposition is unstable across seeds: {0}")]
    Unstable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
