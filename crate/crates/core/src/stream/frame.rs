use serde::{Deserialize, Serialize};

use super::StreamError;
use crate::kinematics::{JointAngles, JointLimits};
use crate::JOINTS;

pub const PROTOCOL_VERSION: u32 = 1;

/// Joint setpoints for all twelve servos, limb-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CommandFrame {
    pub seq: u64,
    /// Seconds since the start of the stream.
    pub t: f64,
    pub targets: [f64; JOINTS],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServoState {
    pub angle: f64,
    pub volt: f64,
    pub temp: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeedbackFrame {
    /// Sequence number of the command this answers.
    pub seq: u64,
    pub servos: [ServoState; JOINTS],
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Frame {
    Command(CommandFrame),
    Feedback(FeedbackFrame),
}

impl From<CommandFrame> for Frame {
    fn from(f: CommandFrame) -> Self {
        Frame::Command(f)
    }
}

impl From<FeedbackFrame> for Frame {
    fn from(f: FeedbackFrame) -> Self {
        Frame::Feedback(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
enum Kind {
    #[serde(rename = "cmd")]
    Command,
    #[serde(rename = "fb")]
    Feedback,
}

/// On-the-wire layout; field order fixes the byte format.
#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Wire {
    v: u32,
    kind: Kind,
    seq: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    targets: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    servos: Option<Vec<ServoState>>,
}

fn encoding(msg: String) -> StreamError {
    StreamError::Encoding(msg)
}

fn check_targets(targets: &[f64]) -> Result<(), StreamError> {
    let limits = JointLimits::default();
    for (limb, chunk) in targets.chunks(3).enumerate() {
        let joints = JointAngles::new(chunk[0], chunk[1], chunk[2]);
        if let Some(joint) = limits.violation(&joints) {
            return Err(encoding(format!(
                "target {joint} of limb {limb} is outside its mechanical range: {chunk:?}"
            )));
        }
    }
    Ok(())
}

fn check_command(f: &CommandFrame) -> Result<(), StreamError> {
    if !(f.t.is_finite() && f.t >= 0.0) {
        return Err(encoding(format!(
            "command time {} must be finite and >= 0",
            f.t
        )));
    }
    check_targets(&f.targets)
}

fn check_feedback(f: &FeedbackFrame) -> Result<(), StreamError> {
    for (i, s) in f.servos.iter().enumerate() {
        if !(s.angle.is_finite() && s.volt.is_finite() && s.temp.is_finite()) {
            return Err(encoding(format!("servo {i} reports a non-finite value")));
        }
    }
    Ok(())
}

/// One JSON object terminated by a newline.
pub fn encode_frame(frame: &Frame) -> Result<Vec<u8>, StreamError> {
    let wire = match frame {
        Frame::Command(f) => {
            check_command(f)?;
            Wire {
                v: PROTOCOL_VERSION,
                kind: Kind::Command,
                seq: f.seq,
                t: Some(f.t),
                targets: Some(f.targets.to_vec()),
                servos: None,
            }
        }
        Frame::Feedback(f) => {
            check_feedback(f)?;
            Wire {
                v: PROTOCOL_VERSION,
                kind: Kind::Feedback,
                seq: f.seq,
                t: None,
                targets: None,
                servos: Some(f.servos.to_vec()),
            }
        }
    };
    let mut bytes = serde_json::to_vec(&wire).map_err(|e| encoding(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// Decodes one line, with or without its trailing newline.
pub fn decode_frame(bytes: &[u8]) -> Result<Frame, StreamError> {
    let line = bytes.strip_suffix(b"\n").unwrap_or(bytes);
    let line = line.strip_suffix(b"\r").unwrap_or(line);
    let wire: Wire = serde_json::from_slice(line).map_err(|e| encoding(e.to_string()))?;
    if wire.v != PROTOCOL_VERSION {
        return Err(encoding(format!("unsupported protocol version {}", wire.v)));
    }
    match wire.kind {
        Kind::Command => {
            if wire.servos.is_some() {
                return Err(encoding("command frame carries servos".into()));
            }
            let t = wire
                .t
                .ok_or_else(|| encoding("command frame lacks t".into()))?;
            let targets = wire
                .targets
                .ok_or_else(|| encoding("command frame lacks targets".into()))?;
            let targets: [f64; JOINTS] = targets.try_into().map_err(|v: Vec<f64>| {
                encoding(format!("expected {JOINTS} targets, got {}", v.len()))
            })?;
            let frame = CommandFrame {
                seq: wire.seq,
                t,
                targets,
            };
            check_command(&frame)?;
            Ok(Frame::Command(frame))
        }
        Kind::Feedback => {
            if wire.t.is_some() || wire.targets.is_some() {
                return Err(encoding("feedback frame carries command fields".into()));
            }
            let servos = wire
                .servos
                .ok_or_else(|| encoding("feedback frame lacks servos".into()))?;
            let servos: [ServoState; JOINTS] =
                servos.try_into().map_err(|v: Vec<ServoState>| {
                    encoding(format!("expected {JOINTS} servo records, got {}", v.len()))
                })?;
            let frame = FeedbackFrame {
                seq: wire.seq,
                servos,
            };
            check_feedback(&frame)?;
            Ok(Frame::Feedback(frame))
        }
    }
}
