use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("closure condition fails: {0}")]
    ClosureFails(String),
    #[error("cap exceeded: {0}")]
    CapExceeded(String),
    #[error("map is not invertible: {0}")]
    NotInvertible(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("unknown symbol `{0}`")]
    Unknown(String),
    #[error("scene is not trivial: {0}")]
    SceneNotTrivial(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
