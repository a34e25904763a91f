use std::io::{BufRead, BufReader, ErrorKind, Write};
use std::net::{TcpListener, TcpStream, ToSocketAddrs};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError, Sender};
use std::thread::JoinHandle;
use std::time::Duration;

use super::{
    decode_frame, encode_frame, CommandFrame, FeedbackFrame, Frame, LoopbackServo, StreamError,
};

/// Consumer of command frames that may answer with feedback.
pub trait FrameSink {
    /// Sends one command and waits for its feedback. `Ok(None)` means the
    /// feedback did not arrive in time.
    fn exchange(&mut self, command: &CommandFrame) -> Result<Option<FeedbackFrame>, StreamError>;
}

/// In-process loopback: a servo simulator on its own thread, fed encoded
/// lines through channels exactly as they would cross a socket.
pub struct LoopbackSink {
    to_servo: Option<Sender<Vec<u8>>>,
    from_servo: Receiver<Vec<u8>>,
    timeout: Duration,
    worker: Option<JoinHandle<()>>,
}

impl LoopbackSink {
    pub fn new(servo: LoopbackServo, timeout: Duration) -> Self {
        let (to_servo, inbox) = mpsc::channel::<Vec<u8>>();
        let (outbox, from_servo) = mpsc::channel::<Vec<u8>>();
        let worker = std::thread::spawn(move || {
            let mut servo = servo;
            for line in inbox {
                let reply = match decode_frame(&line) {
                    Ok(Frame::Command(c)) => encode_frame(&servo.respond(&c).into()),
                    Ok(Frame::Feedback(_)) => continue,
                    Err(e) => {
                        log::warn!("loopback servo dropped a frame: {e}");
                        continue;
                    }
                };
                let Ok(bytes) = reply else { break };
                if outbox.send(bytes).is_err() {
                    break;
                }
            }
        });
        Self {
            to_servo: Some(to_servo),
            from_servo,
            timeout,
            worker: Some(worker),
        }
    }
}

impl FrameSink for LoopbackSink {
    fn exchange(&mut self, command: &CommandFrame) -> Result<Option<FeedbackFrame>, StreamError> {
        let bytes = encode_frame(&(*command).into())?;
        self.to_servo
            .as_ref()
            .expect("sender lives until drop")
            .send(bytes)
            .map_err(|_| StreamError::Transport("loopback servo stopped".into()))?;
        loop {
            match self.from_servo.recv_timeout(self.timeout) {
                Ok(line) => match decode_frame(&line)? {
                    Frame::Feedback(f) if f.seq == command.seq => return Ok(Some(f)),
                    _ => continue,
                },
                Err(RecvTimeoutError::Timeout) => return Ok(None),
                Err(RecvTimeoutError::Disconnected) => {
                    return Err(StreamError::Transport("loopback servo stopped".into()))
                }
            }
        }
    }
}

impl Drop for LoopbackSink {
    fn drop(&mut self) {
        self.to_servo.take();
        if let Some(worker) = self.worker.take() {
            let _ = worker.join();
        }
    }
}

/// Newline-delimited JSON over TCP to a servo endpoint.
pub struct TcpSink {
    writer: TcpStream,
    reader: BufReader<TcpStream>,
    line: Vec<u8>,
}

impl TcpSink {
    pub fn connect<A: ToSocketAddrs>(address: A, timeout: Duration) -> Result<Self, StreamError> {
        let transport = |e: std::io::Error| StreamError::Transport(e.to_string());
        let addr = address
            .to_socket_addrs()
            .map_err(transport)?
            .next()
            .ok_or_else(|| StreamError::Transport("address resolved to nothing".into()))?;
        let writer = TcpStream::connect_timeout(&addr, timeout).map_err(transport)?;
        writer.set_nodelay(true).map_err(transport)?;
        writer.set_read_timeout(Some(timeout)).map_err(transport)?;
        let reader = BufReader::new(writer.try_clone().map_err(transport)?);
        Ok(Self {
            writer,
            reader,
            line: Vec::new(),
        })
    }
}

impl FrameSink for TcpSink {
    fn exchange(&mut self, command: &CommandFrame) -> Result<Option<FeedbackFrame>, StreamError> {
        let bytes = encode_frame(&(*command).into())?;
        self.writer
            .write_all(&bytes)
            .map_err(|e| StreamError::Transport(e.to_string()))?;
        loop {
            // A timed-out read may leave a partial line in `self.line`; it is
            // completed by the next read.
            match self.reader.read_until(b'\n', &mut self.line) {
                Ok(0) => {
                    return Err(StreamError::Transport(
                        "servo endpoint closed the connection".into(),
                    ))
                }
                Ok(_) if self.line.ends_with(b"\n") => {
                    let frame = decode_frame(&self.line);
                    self.line.clear();
                    match frame? {
                        Frame::Feedback(f) if f.seq == command.seq => return Ok(Some(f)),
                        Frame::Feedback(f) if f.seq > command.seq => {
                            return Err(StreamError::Transport(format!(
                                "feedback for unsent command {}",
                                f.seq
                            )))
                        }
                        _ => continue,
                    }
                }
                Ok(_) => continue,
                Err(e) if matches!(e.kind(), ErrorKind::WouldBlock | ErrorKind::TimedOut) => {
                    return Ok(None)
                }
                Err(e) => return Err(StreamError::Transport(e.to_string())),
            }
        }
    }
}

/// Serves one connection with a fresh servo simulator until the peer
/// closes it. Returns the number of commands answered.
pub fn serve_connection(stream: TcpStream, mut servo: LoopbackServo) -> Result<u64, StreamError> {
    let transport = |e: std::io::Error| StreamError::Transport(e.to_string());
    stream.set_nodelay(true).map_err(transport)?;
    let mut writer = stream.try_clone().map_err(transport)?;
    let reader = BufReader::new(stream);
    let mut answered = 0;
    for line in reader.split(b'\n') {
        let line = line.map_err(transport)?;
        if line.is_empty() {
            continue;
        }
        match decode_frame(&line) {
            Ok(Frame::Command(c)) => {
                let reply = encode_frame(&servo.respond(&c).into())?;
                writer.write_all(&reply).map_err(transport)?;
                answered += 1;
            }
            Ok(Frame::Feedback(_)) => log::warn!("ignoring feedback frame sent to the servo"),
            Err(e) => log::warn!("ignoring malformed frame: {e}"),
        }
    }
    Ok(answered)
}

/// Accepts connections on `listener` and serves them one after another,
/// each with a servo of time constant `tau`. Stops after `connections`
/// connections when given.
pub fn serve(
    listener: &TcpListener,
    tau: f64,
    connections: Option<usize>,
) -> Result<u64, StreamError> {
    let mut total = 0;
    let mut served = 0;
    while connections.is_none_or(|limit| served < limit) {
        let (stream, peer) = listener
            .accept()
            .map_err(|e| StreamError::Transport(e.to_string()))?;
        log::info!("serving {peer}");
        match serve_connection(stream, LoopbackServo::new(tau)) {
            Ok(n) => {
                log::info!("{peer} closed after {n} commands");
                total += n;
            }
            Err(e) => log::warn!("{peer}: {e}"),
        }
        served += 1;
    }
    Ok(total)
}
