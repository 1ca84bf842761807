//! The two parties. Each sees only its own lab and the channel.

use crate::channel::Endpoint;
use crate::error::{LoccError, Result};
use crate::estimate::{estimate, EstimationResult};
use crate::lab::{stream, AliceLab, BobLab, ShotPlan, ALICE_BOOTSTRAP};
use crate::message::{Ack, MeasRequest, Message, ParityBatch, Payload, V2Report};
use crate::sampling::ParitySamples;

fn unexpected(m: &Message, wanted: &str) -> LoccError {
    LoccError::ProtocolViolation {
        seq: m.seq,
        reason: format!("expected {wanted}, got {}", m.body.kind()),
    }
}

/// Requests the measurements, collects Bob's report and parity outcomes,
/// and estimates the entanglement of the shared state.
pub fn alice(lab: &AliceLab, plan: &ShotPlan, ep: &mut Endpoint) -> Result<EstimationResult> {
    let req = ep.send(Payload::MeasRequest(MeasRequest {
        n_local: plan.n_local as u64,
        n_parity: plan.n_parity as u64,
        basis: lab.local.basis,
        bootstrap: plan.bootstrap as u64,
        batch_size: plan.batch_size as u64,
    }))?;
    let m = ep.recv()?;
    match &m.body {
        Payload::Ack(Ack { ack_seq }) if *ack_seq == req.seq => {}
        _ => return Err(unexpected(&m, "ACK of the request")),
    }
    let m = ep.recv()?;
    let report: V2Report = match m.body {
        Payload::V2Report(r) => r,
        _ => return Err(unexpected(&m, "V2_REPORT")),
    };
    if report.replicates.len() != plan.bootstrap {
        return Err(LoccError::ProtocolViolation {
            seq: m.seq,
            reason: format!(
                "{} replicates, requested {}",
                report.replicates.len(),
                plan.bootstrap
            ),
        });
    }
    let mut odd = Vec::with_capacity(plan.n_parity);
    let mut last = m.seq;
    while odd.len() < plan.n_parity {
        let m = ep.recv()?;
        let Payload::ParityBatch(b) = &m.body else {
            return Err(unexpected(&m, "PARITY_BATCH"));
        };
        if b.first_copy != odd.len() as u64 || odd.len() + b.bits.len() > plan.n_parity {
            return Err(LoccError::ProtocolViolation {
                seq: m.seq,
                reason: format!(
                    "batch covers copies {}..{}, expected to start at {}",
                    b.first_copy,
                    b.first_copy + b.bits.len() as u64,
                    odd.len()
                ),
            });
        }
        odd.extend(b.outcomes());
        last = m.seq;
    }
    ep.send(Payload::Ack(Ack { ack_seq: last }))?;

    if lab.conditional.len() < plan.n_parity {
        return Err(LoccError::InsufficientData(format!(
            "Alice recorded {} parity copies, plan needs {}",
            lab.conditional.len(),
            plan.n_parity
        )));
    }
    let parity = ParitySamples {
        basis: lab.local.basis,
        odd,
        values: lab.conditional[..plan.n_parity].to_vec(),
    };
    estimate(
        &lab.local,
        &parity,
        &report,
        &mut stream(lab.seed, ALICE_BOOTSTRAP),
    )
}

/// Serves one request: acknowledges it, reports V2, streams parity outcomes
/// and waits for the closing acknowledgement.
pub fn bob(lab: &BobLab, ep: &mut Endpoint) -> Result<()> {
    let m = ep.recv()?;
    let Payload::MeasRequest(req) = &m.body else {
        return Err(unexpected(&m, "MEAS_REQUEST"));
    };
    let n_parity = req.n_parity as usize;
    if n_parity > lab.parity.len() || req.basis != lab.local.basis {
        return Err(LoccError::ProtocolViolation {
            seq: m.seq,
            reason: "request does not match the prepared copies".into(),
        });
    }
    ep.send(Payload::Ack(Ack { ack_seq: m.seq }))?;
    ep.send(Payload::V2Report(lab.v2_report(req.bootstrap as usize)?))?;
    let mut last = 0;
    for (i, chunk) in lab.parity[..n_parity]
        .chunks(req.batch_size as usize)
        .enumerate()
    {
        let first = (i * req.batch_size as usize) as u64;
        last = ep
            .send(Payload::ParityBatch(ParityBatch::from_outcomes(
                first, chunk,
            )))?
            .seq;
    }
    let m = ep.recv()?;
    match &m.body {
        Payload::Ack(Ack { ack_seq }) if *ack_seq == last => Ok(()),
        _ => Err(unexpected(&m, "final ACK")),
    }
}
