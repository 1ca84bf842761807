//! Separability and entanglement of two-mode Gaussian states from locally
//! measurable blocks.
//!
//! Alice holds `V1`, receives `V2` from Bob, and obtains the Schur
//! complement `Gamma1` from her moments conditioned on Bob's parity outcomes.
//! Those three blocks fix every local symplectic invariant of the state
//! except the sign of `det C`, which is enough to run the Simon test and to
//! quantify entanglement.

pub mod entanglement;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod reconstruction;

pub use entanglement::{analyze, analyze_with, AnalysisConfig, EntanglementReport, LocalData};
pub use error::{Error, Result};
pub use gaussian::{CovarianceMatrix, InvariantSet, LocalBlock};
