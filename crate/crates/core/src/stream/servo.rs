use super::{CommandFrame, FeedbackFrame, ServoState};
use crate::JOINTS;

pub const NOMINAL_VOLTAGE: f64 = 14.8;
pub const NOMINAL_TEMPERATURE: f64 = 35.0;

/// Simulated servo bank: every servo follows its target through a
/// first-order lag with time constant `tau` seconds and reports nominal
/// supply voltage and temperature. With `tau = 0` targets are reached
/// exactly on arrival.
#[derive(Debug, Clone)]
pub struct LoopbackServo {
    tau: f64,
    state: Option<(f64, [f64; JOINTS])>,
}

impl LoopbackServo {
    pub fn new(tau: f64) -> Self {
        assert!(
            tau >= 0.0 && tau.is_finite(),
            "servo time constant must be >= 0"
        );
        Self { tau, state: None }
    }

    /// Starts the servos at `angles` at time `t` instead of at the first
    /// command's targets.
    pub fn with_initial(mut self, t: f64, angles: [f64; JOINTS]) -> Self {
        self.state = Some((t, angles));
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn respond(&mut self, command: &CommandFrame) -> FeedbackFrame {
        let angles = match self.state {
            Some((t, angles)) if self.tau > 0.0 => {
                let blend = 1.0 - (-(command.t - t).max(0.0) / self.tau).exp();
                std::array::from_fn(|j| angles[j] + (command.targets[j] - angles[j]) * blend)
            }
            _ => command.targets,
        };
        self.state = Some((command.t, angles));
        FeedbackFrame {
            seq: command.seq,
            servos: angles.map(|angle| ServoState {
                angle,
                volt: NOMINAL_VOLTAGE,
                temp: NOMINAL_TEMPERATURE,
            }),
        }
    }
}
