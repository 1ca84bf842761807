//! Full protocol runs and transcript replay.

use std::thread;
use std::time::Duration;

use gaussent_fock::GaussianCircuit;

use crate::channel::{
    in_process_pair, socket_pair, ChannelKind, Endpoint, Replay, Role, Transport, DEFAULT_TIMEOUT,
};
use crate::error::{LoccError, ProtocolFailure, Result};
use crate::estimate::EstimationResult;
use crate::lab::{prepare, AliceLab, BobLab, ShotPlan};
use crate::roles::{alice, bob};
use crate::transcript::Transcript;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunOptions {
    pub channel: ChannelKind,
    pub timeout: Duration,
    pub wall_clock: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            channel: ChannelKind::InProcess,
            timeout: DEFAULT_TIMEOUT,
            wall_clock: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolRun {
    pub result: EstimationResult,
    pub transcript: Transcript,
}

fn fail(error: LoccError) -> ProtocolFailure {
    ProtocolFailure {
        error,
        transcript: Transcript::default(),
    }
}

pub fn run_protocol(
    circuit: &GaussianCircuit,
    plan: &ShotPlan,
    opts: &RunOptions,
) -> Result<ProtocolRun, ProtocolFailure> {
    let (a, b) = prepare(circuit, plan).map_err(fail)?;
    run_with_labs(&a, b, plan, opts)
}

/// Runs Alice on the calling thread and Bob on a worker thread.
pub fn run_with_labs(
    alice_lab: &AliceLab,
    bob_lab: BobLab,
    plan: &ShotPlan,
    opts: &RunOptions,
) -> Result<ProtocolRun, ProtocolFailure> {
    let (ta, tb): (Box<dyn Transport>, Box<dyn Transport>) = match opts.channel {
        ChannelKind::InProcess => {
            let (a, b) = in_process_pair(opts.timeout);
            (Box::new(a), Box::new(b))
        }
        ChannelKind::Socket => {
            let (a, b) =
                socket_pair(opts.timeout).map_err(|e| fail(LoccError::Channel(e.to_string())))?;
            (Box::new(a), Box::new(b))
        }
    };
    let bob_thread = thread::spawn(move || {
        let mut ep = Endpoint::new(Role::Bob, tb);
        bob(&bob_lab, &mut ep)
    });
    let mut ep = Endpoint::new(Role::Alice, ta).recording(opts.wall_clock);
    let outcome = alice(alice_lab, plan, &mut ep);
    let transcript = ep.take_transcript();
    drop(ep);
    let bob_outcome = bob_thread
        .join()
        .unwrap_or_else(|_| Err(LoccError::Channel("Bob's thread panicked".into())));
    match (outcome, bob_outcome) {
        (Ok(result), Ok(())) => Ok(ProtocolRun { result, transcript }),
        (Err(LoccError::Channel(_)), Err(bob_err)) => Err(ProtocolFailure {
            error: bob_err,
            transcript,
        }),
        (Err(error), _) | (Ok(_), Err(error)) => Err(ProtocolFailure { error, transcript }),
    }
}

/// Re-runs Alice alone against a recorded transcript.
pub fn replay(
    lab: &AliceLab,
    plan: &ShotPlan,
    transcript: &Transcript,
) -> Result<EstimationResult> {
    let mut ep = Endpoint::new(Role::Alice, Box::new(Replay::new(transcript, Role::Alice)));
    alice(lab, plan, &mut ep)
}
