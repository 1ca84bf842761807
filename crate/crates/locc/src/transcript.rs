//! JSON Lines record of the messages Alice sent and received.
//!
//! Entries carry a logical clock `t`; wall-clock milliseconds are included
//! only when requested.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::message::Message;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    AliceToBob,
    BobToAlice,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranscriptEntry {
    pub t: u64,
    pub dir: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
    pub msg: Message,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("transcript line {line}: {reason}")]
pub struct TranscriptError {
    pub line: usize,
    pub reason: String,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl TranscriptEntry {
    pub fn parse_line(line: &str) -> Result<Self, String> {
        let e: TranscriptEntry = serde_json::from_str(line).map_err(|e| e.to_string())?;
        e.msg.body.validate()?;
        Ok(e)
    }
}

impl Transcript {
    pub fn push(&mut self, e: TranscriptEntry) {
        self.entries.push(e);
    }

    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    pub fn to_jsonl(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            s.push_str(&serde_json::to_string(e).expect("entries serialise"));
            s.push('\n');
        }
        s
    }

    /// Parses JSON Lines, requiring the logical clock to count up from 0 and
    /// each direction's sequence numbers to do the same.
    pub fn from_jsonl(text: &str) -> Result<Self, TranscriptError> {
        let mut out = Transcript::default();
        let mut next = [0u64; 2];
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            let err = |reason: String| TranscriptError {
                line: i + 1,
                reason,
            };
            let e = TranscriptEntry::parse_line(line).map_err(err)?;
            if e.t != out.entries.len() as u64 {
                return Err(err(format!(
                    "expected t = {}, found {}",
                    out.entries.len(),
                    e.t
                )));
            }
            let slot = &mut next[e.dir as usize];
            if e.msg.seq != *slot {
                return Err(err(format!("expected seq {}, found {}", slot, e.msg.seq)));
            }
            *slot += 1;
            out.entries.push(e);
        }
        Ok(out)
    }
}
