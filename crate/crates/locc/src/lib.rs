//! Simulation of the local-measurement entanglement protocol between two
//! isolated parties.
//!
//! Alice and Bob share many copies of a two-mode state. Each performs local
//! tomography; Bob reports his block and measures the parity of his mode on
//! further copies, telling Alice which copies were even or odd; Alice splits
//! her conditional measurements accordingly and assembles the Schur
//! complement, then analyses the state. The roles run concurrently and talk
//! only through an [`Endpoint`].

pub mod channel;
pub mod error;
pub mod estimate;
pub mod lab;
pub mod message;
pub mod protocol;
pub mod roles;
pub mod sampling;
pub mod transcript;
pub mod wire;

pub use channel::{ChannelKind, Endpoint, Role};
pub use error::{LoccError, ProtocolFailure, Result};
pub use estimate::{EstimationResult, StdErrors, Verdict};
pub use lab::{prepare, AliceLab, BobLab, ShotPlan, DEFAULT_SEED};
pub use message::{Message, Payload};
pub use protocol::{replay, run_protocol, run_with_labs, ProtocolRun, RunOptions};
pub use sampling::Basis;
pub use transcript::{Transcript, TranscriptEntry};
