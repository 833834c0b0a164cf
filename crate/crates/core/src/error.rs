use thiserror::Error;

/// Errors raised by sector construction, model assembly and the spectral routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid sector: {0}")]
    InvalidSector(String),

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("sector dimension {dim} exceeds the configured cap {cap}")]
    DimensionCap { dim: u128, cap: usize },

    #[error("index {index} out of range for a sector of dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state {0} does not belong to the sector")]
    StateNotInSector(String),

    #[error("basis sector does not match the model sector")]
    BasisMismatch,

    #[error("operation not supported for this sector: {0}")]
    Unsupported(String),

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("Floquet eigenvalue modulus {modulus} deviates from one beyond {tolerance}")]
    ModulusDrift { modulus: f64, tolerance: f64 },

    #[error("compute budget exceeded: {0}")]
    Budget(String),

    #[error("no crossing found: {0}")]
    NoCrossing(String),

    #[error("degenerate fit: {0}")]
    DegenerateFit(String),
}

/// Coarse classification used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Budget,
    Numerical,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InvalidSector(_)
            | Error::InvalidParams(_)
            | Error::IndexOutOfRange { .. }
            | Error::StateNotInSector(_)
            | Error::BasisMismatch
            | Error::Unsupported(_) => ErrorClass::Config,
            Error::DimensionCap { .. } | Error::Budget(_) => ErrorClass::Budget,
            Error::Eigensolver(_)
            | Error::ModulusDrift { .. }
            | Error::NoCrossing(_)
            | Error::DegenerateFit(_) => ErrorClass::Numerical,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
