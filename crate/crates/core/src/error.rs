use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} qubits, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid Pauli string {0:?}")]
    ParsePauli(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    #[error("unsupported coupling: {0}")]
    UnsupportedCoupling(String),

    #[error("invalid flag-bridge spec: {0}")]
    Spec(String),

    #[error("malformed circuit: {0}")]
    Structure(String),

    #[error("gates do not commute: {0}")]
    Commutation(String),

    #[error("fault does not bind to a circuit location: {0}")]
    FaultBinding(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("circuit set is not fault-tolerant: {0}")]
    NotFaultTolerant(String),

    #[error("unknown {kind} {name:?}")]
    Unknown { kind: &'static str, name: String },

    #[error("layout error: {0}")]
    Layout(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub(crate) fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}
