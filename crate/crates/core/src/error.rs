use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("could not generate a physical state after {attempts} attempts")]
    GenerationFailure { attempts: usize },

    #[error("local data inconsistent: det(V1 - Gamma1) = {det:e} < -{tol:e}")]
    InconsistentLocalData { det: f64, tol: f64 },

    #[error("out of domain: {0}")]
    OutOfDomain(String),

    #[error("numerical inconsistency: {0}")]
    NumericalInconsistency(String),

    #[error("singular block: {0}")]
    SingularBlock(String),

    #[error("mean parity {mean_parity:e} is too close to zero to recover Gamma1")]
    DegenerateParity { mean_parity: f64 },

    #[error("phase undetermined ({reason}); recovered magnitude {magnitude}")]
    PhaseUndetermined { magnitude: f64, reason: String },

    #[error("inconsistent input: {0}")]
    InconsistentInput(String),

    #[error("sign of I3 is unresolved")]
    SignUnresolved,

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
