//! Reliable ordered message delivery between the two roles.
//!
//! Both transports carry encoded frames, so a run produces the same bytes
//! whichever one is used.

use std::collections::VecDeque;
use std::io;
use std::net::{TcpListener, TcpStream};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{LoccError, Result};
use crate::message::{Message, Payload};
use crate::transcript::{Direction, Transcript, TranscriptEntry};
use crate::wire::{self, FrameError};

pub const DEFAULT_TIMEOUT: Duration = Duration::from_secs(30);

#[derive(Debug)]
pub enum Fault {
    Closed,
    Timeout,
    Io(String),
    Frame(FrameError),
    Diverged(String),
}

pub trait Transport: Send {
    fn send_frame(&mut self, frame: Vec<u8>) -> Result<(), Fault>;
    fn recv_frame(&mut self) -> Result<Vec<u8>, Fault>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChannelKind {
    InProcess,
    Socket,
}

pub struct InProcess {
    tx: Sender<Vec<u8>>,
    rx: Receiver<Vec<u8>>,
    timeout: Duration,
}

pub fn in_process_pair(timeout: Duration) -> (InProcess, InProcess) {
    let (tx_a, rx_b) = mpsc::channel();
    let (tx_b, rx_a) = mpsc::channel();
    (
        InProcess {
            tx: tx_a,
            rx: rx_a,
            timeout,
        },
        InProcess {
            tx: tx_b,
            rx: rx_b,
            timeout,
        },
    )
}

impl Transport for InProcess {
    fn send_frame(&mut self, frame: Vec<u8>) -> Result<(), Fault> {
        self.tx.send(frame).map_err(|_| Fault::Closed)
    }

    fn recv_frame(&mut self) -> Result<Vec<u8>, Fault> {
        self.rx.recv_timeout(self.timeout).map_err(|e| match e {
            RecvTimeoutError::Timeout => Fault::Timeout,
            RecvTimeoutError::Disconnected => Fault::Closed,
        })
    }
}

pub struct Socket {
    stream: TcpStream,
}

impl Socket {
    pub fn new(stream: TcpStream, timeout: Duration) -> io::Result<Self> {
        stream.set_read_timeout(Some(timeout))?;
        stream.set_write_timeout(Some(timeout))?;
        stream.set_nodelay(true)?;
        Ok(Self { stream })
    }

    pub fn stream_mut(&mut self) -> &mut TcpStream {
        &mut self.stream
    }
}

/// A connected loopback pair `(listener side, connecting side)`.
pub fn socket_pair(timeout: Duration) -> io::Result<(Socket, Socket)> {
    let listener = TcpListener::bind("127.0.0.1:0")?;
    let client = TcpStream::connect(listener.local_addr()?)?;
    let (server, _) = listener.accept()?;
    Ok((Socket::new(server, timeout)?, Socket::new(client, timeout)?))
}

fn io_fault(e: io::Error) -> Fault {
    match e.kind() {
        io::ErrorKind::WouldBlock | io::ErrorKind::TimedOut => Fault::Timeout,
        io::ErrorKind::BrokenPipe
        | io::ErrorKind::ConnectionReset
        | io::ErrorKind::UnexpectedEof => Fault::Closed,
        _ => Fault::Io(e.to_string()),
    }
}

impl Transport for Socket {
    fn send_frame(&mut self, frame: Vec<u8>) -> Result<(), Fault> {
        wire::write_frame(&mut self.stream, &frame).map_err(io_fault)
    }

    fn recv_frame(&mut self) -> Result<Vec<u8>, Fault> {
        match wire::read_frame(&mut self.stream).map_err(io_fault)? {
            None => Err(Fault::Closed),
            Some(frame) => frame.map_err(Fault::Frame),
        }
    }
}

/// Feeds recorded incoming frames and checks outgoing frames against the
/// recording.
pub struct Replay {
    expected: VecDeque<Vec<u8>>,
    incoming: VecDeque<Vec<u8>>,
}

impl Replay {
    pub fn new(transcript: &Transcript, role: Role) -> Self {
        let mut expected = VecDeque::new();
        let mut incoming = VecDeque::new();
        for e in transcript.entries() {
            let frame = wire::encode(&e.msg);
            if e.dir == role.outgoing() {
                expected.push_back(frame);
            } else {
                incoming.push_back(frame);
            }
        }
        Self { expected, incoming }
    }
}

impl Transport for Replay {
    fn send_frame(&mut self, frame: Vec<u8>) -> Result<(), Fault> {
        match self.expected.pop_front() {
            Some(f) if f == frame => Ok(()),
            Some(_) => Err(Fault::Diverged(
                "outgoing message differs from the recording".into(),
            )),
            None => Err(Fault::Diverged(
                "more outgoing messages than recorded".into(),
            )),
        }
    }

    fn recv_frame(&mut self) -> Result<Vec<u8>, Fault> {
        self.incoming.pop_front().ok_or(Fault::Closed)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    Alice,
    Bob,
}

impl Role {
    pub fn outgoing(self) -> Direction {
        match self {
            Role::Alice => Direction::AliceToBob,
            Role::Bob => Direction::BobToAlice,
        }
    }
}

/// One party's end of the channel: numbers outgoing messages, checks the
/// peer's sequence numbers and optionally records a transcript.
pub struct Endpoint {
    role: Role,
    transport: Box<dyn Transport>,
    next_send: u64,
    next_recv: u64,
    clock: u64,
    wall_clock: bool,
    transcript: Option<Transcript>,
}

impl Endpoint {
    pub fn new(role: Role, transport: Box<dyn Transport>) -> Self {
        Self {
            role,
            transport,
            next_send: 0,
            next_recv: 0,
            clock: 0,
            wall_clock: false,
            transcript: None,
        }
    }

    /// Records every message sent or received; `wall_clock` adds real
    /// timestamps, which makes transcripts differ between runs.
    pub fn recording(mut self, wall_clock: bool) -> Self {
        self.transcript = Some(Transcript::default());
        self.wall_clock = wall_clock;
        self
    }

    pub fn take_transcript(&mut self) -> Transcript {
        self.transcript.take().unwrap_or_default()
    }

    fn log(&mut self, dir: Direction, msg: &Message) {
        let t = self.clock;
        self.clock += 1;
        let wall_ms = self.wall_clock.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_millis() as u64)
                .unwrap_or(0)
        });
        if let Some(tr) = &mut self.transcript {
            tr.push(TranscriptEntry {
                t,
                dir,
                wall_ms,
                msg: msg.clone(),
            });
        }
    }

    fn fault(&self, f: Fault) -> LoccError {
        match f {
            Fault::Closed => LoccError::Channel("peer closed the channel".into()),
            Fault::Timeout => LoccError::Channel("timed out waiting for the peer".into()),
            Fault::Io(e) => LoccError::Channel(e),
            Fault::Frame(e) => LoccError::ProtocolViolation {
                seq: self.next_recv,
                reason: e.to_string(),
            },
            Fault::Diverged(e) => LoccError::ReplayMismatch(e),
        }
    }

    pub fn send(&mut self, body: Payload) -> Result<Message> {
        let msg = Message {
            seq: self.next_send,
            body,
        };
        let frame = wire::encode(&msg);
        self.transport
            .send_frame(frame)
            .map_err(|f| self.fault(f))?;
        self.next_send += 1;
        self.log(self.role.outgoing(), &msg);
        Ok(msg)
    }

    pub fn recv(&mut self) -> Result<Message> {
        let frame = self.transport.recv_frame().map_err(|f| self.fault(f))?;
        let msg = wire::decode_exact(&frame).map_err(|e| self.fault(Fault::Frame(e)))?;
        if msg.seq != self.next_recv {
            return Err(LoccError::ProtocolViolation {
                seq: msg.seq,
                reason: format!("expected seq {}", self.next_recv),
            });
        }
        self.next_recv += 1;
        let dir = match self.role {
            Role::Alice => Direction::BobToAlice,
            Role::Bob => Direction::AliceToBob,
        };
        self.log(dir, &msg);
        Ok(msg)
    }
}
