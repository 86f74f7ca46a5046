use thiserror::Error;

/// Errors raised by the simulator, the analytics and the protocol drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QinfoError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains a non-finite entry")]
    NonFinite,
    #[error("matrix is not Hermitian (max |m - m^dagger| = {0:e})")]
    NotHermitian(f64),
    #[error("matrix is not unitary (max |U^dagger U - I| = {0:e})")]
    NotUnitary(f64),
    #[error("state is not normalized (norm^2 = {0})")]
    NotNormalized(f64),
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("index {index} out of range for {bound}")]
    IndexOutOfRange { index: usize, bound: usize },
    #[error("invalid qubit targets: {0}")]
    InvalidTargets(String),
    #[error("partial trace needs at least one kept subsystem")]
    EmptyKeep,
    #[error("bipartition must leave qubits on both sides")]
    TrivialPartition,
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("requested output length {requested} exceeds key length {available}")]
    OutputTooLong { requested: usize, available: usize },
    #[error("json fixture: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, QinfoError>;
