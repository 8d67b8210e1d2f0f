use thiserror::Error;

/// Errors raised by the runtime model and its circuit machinery.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("width mismatch: {left} vs {right} qubits")]
    WidthMismatch { left: usize, right: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("unknown gate kind `{0}`")]
    UnknownGate(String),

    #[error("circuit needs {needed} qubits but the coupling map has {available}")]
    MapTooSmall { needed: usize, available: usize },

    #[error("invalid coupling map: {0}")]
    InvalidCouplingMap(String),

    #[error(
        "circuit width {width} exceeds the simulator cap of {cap} qubits; raise the cap or use a narrower circuit"
    )]
    SimulatorCap { width: usize, cap: usize },

    #[error("feature vector has {got} components, family expects {expected}")]
    FeatureLength { expected: usize, got: usize },

    #[error("backend `{0}` not found in registry")]
    UnknownBackend(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("fit is rank deficient: {0} cannot be identified from these observations")]
    Unidentifiable(String),

    #[error("underdetermined fit: {got} observations, need at least {needed}")]
    Underdetermined { got: usize, needed: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
