//! Gait generation.
//!
//! A gait is generated as one cycle of joint samples per limb, evaluated on a
//! uniform phase grid `i / samples_per_step` for `i = 0..=samples_per_step`.
//! Phase 0 and phase 1 describe the same posture, so every plan is closed.
//!
//! Limbs are indexed front-right, front-left, hind-left, hind-right and the
//! two diagonals are `{0, 2}` and `{1, 3}`.
//!
//! Trot and gallop advance the base by pivoting the *pivot diagonal* (the
//! diagonal whose limbs point across the direction of travel) around its
//! planted feet: the hip yaw of those limbs sweeps through the perpendicular
//! while the hip pitch lifts the base by the compensation angle
//! [`lift_angle`]. The other diagonal points along the direction of travel.
//! Canter moves every foot along a closed annular path made of a ground
//! segment and a spiral arc, diagonals half a cycle apart.

mod canter;
mod plan;
mod trot;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kinematics::{
    robot_height, stance_reach, validate_quad, JointAngles, KinematicsError, LimbGeometry,
};

pub use canter::{annular_path, canter_foot_path, canter_step};
pub use plan::{read_plan_csv, FootPlan, LimbPlan, PlanRow, PlanSample, CSV_HEADER};
pub use trot::{gallop_step, trot_step};

pub const MIN_SAMPLES_PER_STEP: usize = 8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GaitError {
    #[error("invalid gait config: {field} {reason}")]
    InvalidConfig { field: &'static str, reason: String },
    #[error(
        "lift angle undefined: (2 cos theta0 - 1) * cos theta1_init = {argument} is outside [-1, 1] \
         for theta0 = {theta0} rad, theta1_init = {theta1_init} rad; reduce yaw_amplitude"
    )]
    LiftDomain {
        theta0: f64,
        theta1_init: f64,
        argument: f64,
    },
    #[error(
        "no pivot diagonal: travel direction {direction} rad is not perpendicular to either diagonal"
    )]
    NoPivotDiagonal { direction: f64 },
    #[error("limb {limb} at phase {phase}: {source}")]
    Unreachable {
        limb: usize,
        phase: f64,
        #[source]
        source: KinematicsError,
    },
    #[error("limb {limb} at phase {phase}: {joint} = {value} rad is outside its mechanical range")]
    JointRange {
        limb: usize,
        phase: f64,
        joint: &'static str,
        value: f64,
    },
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Gait {
    Trot,
    Canter,
    Gallop,
}

impl Gait {
    pub fn name(self) -> &'static str {
        match self {
            Gait::Trot => "trot",
            Gait::Canter => "canter",
            Gait::Gallop => "gallop",
        }
    }
}

impl std::fmt::Display for Gait {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Diagonal {
    #[serde(rename = "FR_HL")]
    FrHl,
    #[serde(rename = "FL_HR")]
    FlHr,
}

impl Diagonal {
    pub fn limbs(self) -> [usize; 2] {
        match self {
            Diagonal::FrHl => [0, 2],
            Diagonal::FlHr => [1, 3],
        }
    }

    pub fn other(self) -> Diagonal {
        match self {
            Diagonal::FrHl => Diagonal::FlHr,
            Diagonal::FlHr => Diagonal::FrHl,
        }
    }

    pub fn of_limb(limb: usize) -> Diagonal {
        if limb.is_multiple_of(2) {
            Diagonal::FrHl
        } else {
            Diagonal::FlHr
        }
    }
}

fn default_swing_fraction() -> f64 {
    0.5
}

fn default_raise_ratio() -> f64 {
    0.3
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GaitConfig {
    pub gait: Gait,
    /// Initial hip pitch magnitude (femur below horizontal), radians.
    pub theta1_init: f64,
    /// Peak hip-yaw deflection of the pivot diagonal, radians.
    pub yaw_amplitude: f64,
    /// Duration of one full cycle, seconds.
    pub step_period: f64,
    pub samples_per_step: usize,
    /// Archimedean spiral slope of the swing arc, meters per radian.
    pub spiral_slope: f64,
    pub lead_diagonal: Diagonal,
    /// Direction of travel in the base frame, radians. Defaults per gait
    /// when omitted: a quarter turn off the front-right/hind-left diagonal
    /// for trot and gallop, straight ahead for canter.
    #[serde(default)]
    pub direction: Option<f64>,
    /// Fraction of a trot cycle spent repositioning the pivot diagonal.
    #[serde(default = "default_swing_fraction")]
    pub swing_fraction: f64,
    /// Swing raise height as a fraction of the stance reach.
    #[serde(default = "default_raise_ratio")]
    pub raise_ratio: f64,
}

impl GaitConfig {
    pub fn new(gait: Gait) -> Self {
        Self {
            gait,
            theta1_init: 30f64.to_radians(),
            yaw_amplitude: 20f64.to_radians(),
            step_period: 2.0,
            samples_per_step: 64,
            spiral_slope: 0.01,
            lead_diagonal: Diagonal::FrHl,
            direction: None,
            swing_fraction: default_swing_fraction(),
            raise_ratio: default_raise_ratio(),
        }
    }

    pub fn trot() -> Self {
        Self::new(Gait::Trot)
    }

    pub fn canter() -> Self {
        Self::new(Gait::Canter)
    }

    pub fn gallop() -> Self {
        Self::new(Gait::Gallop)
    }

    pub fn with_direction(mut self, direction: f64) -> Self {
        self.direction = Some(direction);
        self
    }

    pub fn travel_direction(&self) -> f64 {
        self.direction.unwrap_or(match self.gait {
            Gait::Trot | Gait::Gallop => FRAC_PI_4,
            Gait::Canter => 0.0,
        })
    }

    pub fn sample_phase(&self, index: usize) -> f64 {
        index as f64 / self.samples_per_step as f64
    }

    pub fn validate(&self) -> Result<(), GaitError> {
        let invalid = |field, reason: &str| GaitError::InvalidConfig {
            field,
            reason: reason.to_string(),
        };
        let finite = [
            self.theta1_init,
            self.yaw_amplitude,
            self.step_period,
            self.spiral_slope,
            self.swing_fraction,
            self.raise_ratio,
            self.travel_direction(),
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(invalid("config", "contains a non-finite value"));
        }
        if !(self.theta1_init > 0.0 && self.theta1_init < FRAC_PI_2) {
            return Err(invalid("theta1_init", "must lie in (0, pi/2)"));
        }
        // The lift law must be defined over the whole sweep before the
        // amplitude range is checked, so that the diagnostic names it.
        lift_angle(self.yaw_amplitude, self.theta1_init)?;
        if !(self.yaw_amplitude >= 0.0 && self.yaw_amplitude < FRAC_PI_2) {
            return Err(invalid("yaw_amplitude", "must lie in [0, pi/2)"));
        }
        if self.step_period <= 0.0 {
            return Err(invalid("step_period", "must be positive"));
        }
        if self.samples_per_step < MIN_SAMPLES_PER_STEP || !self.samples_per_step.is_multiple_of(2)
        {
            return Err(invalid(
                "samples_per_step",
                "must be an even count of at least 8",
            ));
        }
        if self.spiral_slope < 0.0 {
            return Err(invalid("spiral_slope", "must be non-negative"));
        }
        if !(self.swing_fraction > 0.0 && self.swing_fraction < 1.0) {
            return Err(invalid("swing_fraction", "must lie in (0, 1)"));
        }
        let boundary = self.swing_fraction * self.samples_per_step as f64;
        if (boundary - boundary.round()).abs() > 1e-9 {
            return Err(invalid(
                "swing_fraction",
                "must place the swing/sweep boundary on a sample",
            ));
        }
        if self.raise_ratio < 0.0 {
            return Err(invalid("raise_ratio", "must be non-negative"));
        }
        Ok(())
    }
}

/// Horizontal compression of the base caused by pivoting two opposite
/// supporting limbs of horizontal reach `reach` through yaw `theta0`.
pub fn horizontal_shift(theta0: f64, reach: f64) -> f64 {
    2.0 * (1.0 - theta0.cos()) * reach
}

/// Extra hip pitch that compensates the horizontal shift at yaw `theta0`.
pub fn lift_angle(theta0: f64, theta1_init: f64) -> Result<f64, GaitError> {
    if theta0 == 0.0 {
        return Ok(0.0);
    }
    let argument = (2.0 * theta0.cos() - 1.0) * theta1_init.cos();
    if !argument.is_finite() || argument.abs() > 1.0 {
        return Err(GaitError::LiftDomain {
            theta0,
            theta1_init,
            argument,
        });
    }
    Ok(argument.acos() - theta1_init)
}

/// Generates the plan for whichever gait the config selects.
pub fn generate(config: &GaitConfig, geometry: &[LimbGeometry; 4]) -> Result<FootPlan, GaitError> {
    match config.gait {
        Gait::Trot => trot_step(config, geometry),
        Gait::Canter => canter_step(config, geometry),
        Gait::Gallop => gallop_step(config, geometry),
    }
}

/// Shared standing quantities for one gait.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Stance {
    pub height: f64,
    pub reach: f64,
    /// Horizontal hip-to-foot distance with a vertical tibia.
    pub neutral_reach: f64,
}

pub(crate) fn prepare(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    expected: Gait,
) -> Result<Stance, GaitError> {
    if config.gait != expected {
        return Err(GaitError::InvalidConfig {
            field: "gait",
            reason: format!("expected {expected}, got {}", config.gait),
        });
    }
    config.validate()?;
    validate_quad(geometry)?;
    for diagonal in [Diagonal::FrHl, Diagonal::FlHr] {
        let [a, b] = diagonal.limbs();
        let diff = crate::angle::wrap(geometry[a].mount_heading - geometry[b].mount_heading);
        if (diff.abs() - PI).abs() > 1e-9 {
            return Err(KinematicsError::Geometry(format!(
                "limbs {a} and {b} of a diagonal must point in opposite directions"
            ))
            .into());
        }
    }
    let first = &geometry[0];
    if geometry
        .iter()
        .any(|g| g.femur_length != first.femur_length || g.tibia_length != first.tibia_length)
    {
        return Err(KinematicsError::Geometry("all limbs must share link lengths".into()).into());
    }
    let height = robot_height(first, config.theta1_init)?;
    let reach = stance_reach(first, height)?;
    Ok(Stance {
        height,
        reach,
        neutral_reach: first.femur_length * config.theta1_init.cos(),
    })
}

/// Pose of a limb standing with a vertical tibia at hip pitch magnitude `pitch`.
pub(crate) fn vertical_tibia_pose(hip_yaw: f64, pitch: f64) -> JointAngles {
    JointAngles::new(hip_yaw, -pitch, pitch - FRAC_PI_2)
}

pub(crate) fn check_sample(
    geometry: &LimbGeometry,
    limb: usize,
    phase: f64,
    joints: &JointAngles,
) -> Result<(), GaitError> {
    if let Some(joint) = geometry.limits.violation(joints) {
        let value = match joint {
            "hip_yaw" => joints.hip_yaw,
            "hip_pitch" => joints.hip_pitch,
            _ => joints.knee,
        };
        return Err(GaitError::JointRange {
            limb,
            phase,
            joint,
            value,
        });
    }
    Ok(())
}
