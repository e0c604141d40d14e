use thiserror::Error;

pub type Result<T, E = BellError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BellError {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension {0} exceeds the cap of 4096 (12 qubits)")]
    SizeCap(usize),

    #[error("expectation has non-negligible imaginary part {0:e} (operator not Hermitian?)")]
    NonHermitianExpectation(f64),

    #[error("matrix is not symmetric (residual {0:e})")]
    NotSymmetric(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid observable: {0}")]
    InvalidObservable(String),

    #[error("party {party} out of range for {n_parties} parties")]
    PartyOutOfRange { party: usize, n_parties: usize },

    #[error("{name} = {value} is out of range")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("{name} = {value:e} overshoots its analytic range beyond the clamp tolerance")]
    Overshoot { name: &'static str, value: f64 },

    #[error("operators do not act on disjoint blocks (commutator norm {0:e})")]
    NonCommutingBlocks(f64),

    #[error("no Svetlichny equivalence found for MK operator at n = {0}")]
    NoEquivalence(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for BellError {
    fn from(e: std::io::Error) -> Self {
        BellError::Io(e.to_string())
    }
}
