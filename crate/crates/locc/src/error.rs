use gaussent_fock::FockError;
use thiserror::Error;

use crate::transcript::Transcript;
use crate::wire::FrameError;

pub type Result<T, E = LoccError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum LoccError {
    #[error("invalid shot plan: {0}")]
    InvalidPlan(String),
    #[error("protocol violation at seq {seq}: {reason}")]
    ProtocolViolation { seq: u64, reason: String },
    #[error("channel error: {0}")]
    Channel(String),
    #[error("replay diverged from transcript: {0}")]
    ReplayMismatch(String),
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Core(#[from] gaussent_core::Error),
    #[error(transparent)]
    Fock(#[from] FockError),
}

/// A failed run together with everything Alice logged before the failure.
#[derive(Debug, Error)]
#[error("{error}")]
pub struct ProtocolFailure {
    #[source]
    pub error: LoccError,
    pub transcript: Transcript,
}
