//! Frame codec: 4-byte big-endian length followed by a UTF-8 JSON message.

use std::io::{self, Read, Write};

use thiserror::Error;

use crate::message::Message;

pub const MAX_FRAME: usize = 64 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("truncated frame: need {needed} bytes, have {got}")]
    Truncated { needed: usize, got: usize },
    #[error("frame length {0} exceeds the {MAX_FRAME}-byte limit")]
    TooLarge(usize),
    #[error("{0} trailing bytes after frame")]
    Trailing(usize),
    #[error("malformed message: {0}")]
    Malformed(String),
}

pub fn encode(m: &Message) -> Vec<u8> {
    let body = serde_json::to_vec(m).expect("messages serialise");
    let mut out = Vec::with_capacity(body.len() + 4);
    out.extend_from_slice(&(body.len() as u32).to_be_bytes());
    out.extend_from_slice(&body);
    out
}

pub fn decode_body(body: &[u8]) -> Result<Message, FrameError> {
    let m: Message =
        serde_json::from_slice(body).map_err(|e| FrameError::Malformed(e.to_string()))?;
    m.body.validate().map_err(FrameError::Malformed)?;
    Ok(m)
}

/// Decodes the frame at the start of `buf`, returning it with the number of
/// bytes consumed.
pub fn decode_frame(buf: &[u8]) -> Result<(Message, usize), FrameError> {
    if buf.len() < 4 {
        return Err(FrameError::Truncated {
            needed: 4,
            got: buf.len(),
        });
    }
    let len = u32::from_be_bytes([buf[0], buf[1], buf[2], buf[3]]) as usize;
    if len > MAX_FRAME {
        return Err(FrameError::TooLarge(len));
    }
    if buf.len() < 4 + len {
        return Err(FrameError::Truncated {
            needed: 4 + len,
            got: buf.len(),
        });
    }
    Ok((decode_body(&buf[4..4 + len])?, 4 + len))
}

/// Decodes a buffer holding exactly one frame.
pub fn decode_exact(buf: &[u8]) -> Result<Message, FrameError> {
    let (m, used) = decode_frame(buf)?;
    if used != buf.len() {
        return Err(FrameError::Trailing(buf.len() - used));
    }
    Ok(m)
}

/// Reads one raw frame. `Ok(None)` on a clean end of stream.
pub fn read_frame<R: Read>(r: &mut R) -> io::Result<Option<Result<Vec<u8>, FrameError>>> {
    let mut head = [0u8; 4];
    let mut got = 0;
    while got < 4 {
        match r.read(&mut head[got..]) {
            Ok(0) if got == 0 => return Ok(None),
            Ok(0) => return Ok(Some(Err(FrameError::Truncated { needed: 4, got }))),
            Ok(k) => got += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    let len = u32::from_be_bytes(head) as usize;
    if len > MAX_FRAME {
        return Ok(Some(Err(FrameError::TooLarge(len))));
    }
    let mut frame = vec![0u8; 4 + len];
    frame[..4].copy_from_slice(&head);
    let mut got = 0;
    while got < len {
        match r.read(&mut frame[4 + got..]) {
            Ok(0) => {
                return Ok(Some(Err(FrameError::Truncated {
                    needed: 4 + len,
                    got: 4 + got,
                })))
            }
            Ok(k) => got += k,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(Some(Ok(frame)))
}

pub fn write_frame<W: Write>(w: &mut W, frame: &[u8]) -> io::Result<()> {
    w.write_all(frame)?;
    w.flush()
}
