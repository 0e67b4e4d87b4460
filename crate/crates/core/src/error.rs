use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("qubit index {index} out of range for a {qubits}-qubit register")]
    QubitOutOfRange { index: usize, qubits: usize },

    #[error("repeated target qubit {0}")]
    RepeatedTarget(usize),

    #[error("unsupported scenario: {0}")]
    Scenario(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("job {job}, setting {setting}: {message}")]
    Counts {
        job: usize,
        setting: String,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
