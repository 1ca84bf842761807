//! Classical messages exchanged between the two parties.

use gaussent_core::LocalBlock;
use serde::{Deserialize, Serialize};

use crate::sampling::Basis;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Message {
    pub seq: u64,
    #[serde(flatten)]
    pub body: Payload,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "payload", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Payload {
    V2Report(V2Report),
    ParityBatch(ParityBatch),
    MeasRequest(MeasRequest),
    Ack(Ack),
}

/// Bob's estimate of his reduced block and its bootstrap replicates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct V2Report {
    pub block: LocalBlock,
    pub shots: u64,
    pub replicates: Vec<LocalBlock>,
}

/// Parity outcomes for copies `first_copy ..` in order: `'0'` even, `'1'` odd.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParityBatch {
    pub first_copy: u64,
    pub bits: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasRequest {
    pub n_local: u64,
    pub n_parity: u64,
    pub basis: Basis,
    pub bootstrap: u64,
    pub batch_size: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Ack {
    pub ack_seq: u64,
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::V2Report(_) => "V2_REPORT",
            Payload::ParityBatch(_) => "PARITY_BATCH",
            Payload::MeasRequest(_) => "MEAS_REQUEST",
            Payload::Ack(_) => "ACK",
        }
    }

    /// Checks the constraints serde cannot express.
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Payload::V2Report(r) => {
                let finite = |b: &LocalBlock| b.is_finite() && b.det() > 0.0;
                if !finite(&r.block) {
                    return Err("V2 block must be finite with positive determinant".into());
                }
                if !r.replicates.iter().all(finite) {
                    return Err("bootstrap replicate is not a valid block".into());
                }
                Ok(())
            }
            Payload::ParityBatch(b) => {
                if b.bits.is_empty() {
                    return Err("empty parity batch".into());
                }
                if !b.bits.bytes().all(|c| c == b'0' || c == b'1') {
                    return Err("parity bits must be '0' or '1'".into());
                }
                Ok(())
            }
            Payload::MeasRequest(r) => {
                if r.n_local == 0 || r.n_parity == 0 || r.batch_size == 0 {
                    return Err("shot counts and batch size must be positive".into());
                }
                Ok(())
            }
            Payload::Ack(_) => Ok(()),
        }
    }
}

impl ParityBatch {
    pub fn from_outcomes(first_copy: u64, odd: &[bool]) -> Self {
        let bits = odd.iter().map(|&o| if o { '1' } else { '0' }).collect();
        Self { first_copy, bits }
    }

    /// `true` for odd outcomes.
    pub fn outcomes(&self) -> Vec<bool> {
        self.bits.bytes().map(|c| c == b'1').collect()
    }
}
