use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FockError {
    #[error("cutoff {cutoff} too small: leakage {leakage:e} exceeds {threshold:e}")]
    CutoffTooSmall {
        cutoff: usize,
        leakage: f64,
        threshold: f64,
    },
    #[error("state has nonzero displacement <a{mode}> = {value:e}")]
    NonzeroDisplacement { mode: usize, value: f64 },
    #[error("mean parity {mean_parity:e} of mode 2 is too close to zero")]
    DegenerateParity { mean_parity: f64 },
    #[error("invalid density operator: {0}")]
    InvalidDensity(String),
    #[error("invalid cutoff: {0}")]
    InvalidCutoff(String),
    #[error(transparent)]
    Core(#[from] gaussent_core::Error),
}

pub type Result<T, E = FockError> = std::result::Result<T, E>;
