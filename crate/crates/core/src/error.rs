use thiserror::Error;

/// Errors produced by the board, circuit, simulator and QASM layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("board size must be at least 1")]
    ZeroSize,
    #[error("{what} = {value} exceeds the supported bound {bound}")]
    SizeBound {
        what: &'static str,
        value: usize,
        bound: usize,
    },
    #[error("index error: {0}")]
    Index(String),
    #[error("qubit {qubit} out of range for a {total}-qubit register")]
    QubitOutOfRange { qubit: usize, total: usize },
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("encoding error: {0}")]
    Encoding(String),
    #[error("state error: {0}")]
    State(String),
    #[error("malformed board: {0}")]
    Board(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
