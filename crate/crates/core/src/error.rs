use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m^dagger| = {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("operator has eigenvalue {max_eigenvalue} above one")]
    EigenvalueAboveOne { max_eigenvalue: f64 },
    #[error("matrix is not unitary (max |u u^dagger - I| = {residual:e})")]
    NotUnitary { residual: f64 },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("malformed operand: {0}")]
    Malformed(String),
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },
    #[error("qubits are linearly dependent (|det| = {det:e})")]
    LinearlyDependent { det: f64 },
    #[error("bad mode index {index} for a {modes}-mode network")]
    BadModeIndex { index: usize, modes: usize },
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("unknown outcome label `{0}`")]
    UnknownOutcomeLabel(String),
    #[error("eta1 = {0} lies outside the POVM regime [1/5, 4/5]")]
    EtaOutOfPovmRegime(f64),
    #[error("the assembled discriminator network exists only for eta1 = 1/2 (got {0})")]
    UnsupportedEta(f64),
    #[error("the ideal Kerr model has no misclassification rate")]
    IdealModelHasNoError,
    #[error("invalid probability {0}")]
    InvalidProbability(f64),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
