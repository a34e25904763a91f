//! Joint-command streaming: newline-delimited JSON frames, a simulated servo
//! bank that answers with telemetry, and the driver that samples a plan at a
//! fixed period.

mod frame;
mod servo;
mod transport;

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gait::FootPlan;
use crate::JOINTS;

pub use frame::{
    decode_frame, encode_frame, CommandFrame, FeedbackFrame, Frame, ServoState, PROTOCOL_VERSION,
};
pub use servo::{LoopbackServo, NOMINAL_TEMPERATURE, NOMINAL_VOLTAGE};
pub use transport::{serve, serve_connection, FrameSink, LoopbackSink, TcpSink};

/// Command period of the platform's controller, seconds.
pub const DEFAULT_PERIOD: f64 = 0.005;

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("frame encoding: {0}")]
    Encoding(String),
    #[error("transport: {0}")]
    Transport(String),
    #[error("invalid stream options: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamOptions {
    /// Seconds between commands.
    pub period: f64,
    /// Stream length, seconds; frames are sent at `k * period < duration`.
    pub duration: f64,
    /// Pace frames against the wall clock instead of sending them at once.
    pub realtime: bool,
}

impl Default for StreamOptions {
    fn default() -> Self {
        Self {
            period: DEFAULT_PERIOD,
            duration: 10.0,
            realtime: false,
        }
    }
}

impl StreamOptions {
    pub fn frame_count(&self) -> Result<u64, StreamError> {
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(StreamError::Invalid("period must be positive".into()));
        }
        if !(self.duration >= 0.0 && self.duration.is_finite()) {
            return Err(StreamError::Invalid("duration must be >= 0".into()));
        }
        // Tolerate the rounding of duration / period landing just above an
        // integer, so that 10 s at 5 ms gives 2000 frames.
        Ok((self.duration / self.period - 1e-9).ceil().max(0.0) as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamSummary {
    pub frames_sent: u64,
    pub feedback_received: u64,
    pub feedback_timeouts: u64,
    /// Largest count of consecutive commands without feedback.
    pub max_seq_gap: u64,
    /// Largest `|angle - target|` over all feedback, radians.
    pub max_tracking_error: f64,
    /// `|angle - target|` of the last feedback, radians.
    pub final_tracking_error: f64,
    /// Wall-clock duration of the stream, seconds.
    pub elapsed_s: f64,
}

/// Samples `plan` every `options.period` seconds (phase `t / step_period`,
/// linearly interpolated) and sends the frames through `sink`, collecting
/// feedback. Missing feedback is counted, not fatal.
pub fn stream_plan<S: FrameSink>(
    plan: &FootPlan,
    options: &StreamOptions,
    sink: &mut S,
) -> Result<StreamSummary, StreamError> {
    let count = options.frame_count()?;
    let started = Instant::now();
    let mut summary = StreamSummary {
        frames_sent: 0,
        feedback_received: 0,
        feedback_timeouts: 0,
        max_seq_gap: 0,
        max_tracking_error: 0.0,
        final_tracking_error: 0.0,
        elapsed_s: 0.0,
    };
    let mut gap = 0;
    for seq in 0..count {
        let t = seq as f64 * options.period;
        if options.realtime {
            let due = Duration::from_secs_f64(t);
            if let Some(wait) = due.checked_sub(started.elapsed()) {
                std::thread::sleep(wait);
            }
        }
        let joints = plan.interpolate(t / plan.config.step_period);
        let targets: [f64; JOINTS] = std::array::from_fn(|j| joints[j / 3].to_array()[j % 3]);
        let command = CommandFrame { seq, t, targets };
        let feedback = sink.exchange(&command)?;
        summary.frames_sent += 1;
        match feedback {
            Some(fb) => {
                summary.feedback_received += 1;
                gap = 0;
                let error = fb
                    .servos
                    .iter()
                    .zip(&targets)
                    .map(|(s, target)| (s.angle - target).abs())
                    .fold(0.0, f64::max);
                summary.max_tracking_error = summary.max_tracking_error.max(error);
                summary.final_tracking_error = error;
            }
            None => {
                summary.feedback_timeouts += 1;
                gap += 1;
                summary.max_seq_gap = summary.max_seq_gap.max(gap);
            }
        }
    }
    summary.elapsed_s = started.elapsed().as_secs_f64();
    Ok(summary)
}
