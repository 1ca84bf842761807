//! Brute-force ground truth on a truncated two-mode Fock space.
//!
//! States are built by evolving the number-state ensemble of a thermal
//! product through Gaussian gates, each applied as the exponential of its
//! truncated ladder-operator generator. The resulting density operators give
//! exact (up to truncation) moments, parity-conditioned states, partial
//! transposes and entropies against which the Gaussian formulas are checked.

pub mod circuit;
pub mod error;
pub mod moments;
pub mod sampling;
mod sparse;
pub mod state;
pub mod verify;

pub use circuit::{CircuitParseError, Gate, GaussianCircuit};
pub use error::{FockError, Result};
pub use moments::{
    conditioned_moments, covariance_from_state, gamma1_oracle, log_negativity_oracle,
    parity_decompose, ppt_trace_norm, purity_oracle, vn_entropy_reduced, ParityDecomposition,
};
pub use state::{
    build_state, build_state_with, recommended_cutoff, validate, Cutoffs, FockOperator,
};
