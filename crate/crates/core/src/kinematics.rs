//! Planar two-link limb kinematics.
//!
//! Each limb is a femur/tibia chain moving in a vertical "sagittal" plane
//! whose azimuth about the vertical axis is set by the hip-yaw joint. In the
//! sagittal frame `+x` points outward from the hip along the limb azimuth and
//! `+y` points up; the ground lies at `y = -H`.
//!
//! Hip pitch is the femur elevation above the horizontal (negative when the
//! femur points down) and the knee angle is the femur-to-tibia flexion, which
//! is never positive on the branch used here.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle::wrap;

/// Tolerance applied to the knee cosine before a point is declared unreachable.
pub const COS_CLAMP_TOLERANCE: f64 = 1e-12;

/// Tolerance applied when checking an angle against its mechanical range.
pub const RANGE_TOLERANCE: f64 = 1e-12;

pub const DEFAULT_FEMUR_LENGTH: f64 = 0.30;
pub const DEFAULT_TIBIA_LENGTH: f64 = 0.25;
pub const DEFAULT_HIP_RADIUS: f64 = 0.20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum KinematicsError {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error("point ({x}, {y}) is unreachable: knee cosine {cos_knee} outside [-1, 1]")]
    Unreachable { x: f64, y: f64, cos_knee: f64 },
    #[error("base height {height} m exceeds full limb extension {extension} m")]
    HeightUnreachable { height: f64, extension: f64 },
    #[error("invalid limb geometry: {0}")]
    Geometry(String),
}

/// Closed interval of admissible joint angles, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AngleRange {
    pub min: f64,
    pub max: f64,
}

impl AngleRange {
    pub const fn new(min: f64, max: f64) -> Self {
        Self { min, max }
    }

    pub fn contains(&self, angle: f64) -> bool {
        angle >= self.min - RANGE_TOLERANCE && angle <= self.max + RANGE_TOLERANCE
    }
}

/// Mechanical ranges of the three joints of one limb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JointLimits {
    pub hip_yaw: AngleRange,
    pub hip_pitch: AngleRange,
    pub knee: AngleRange,
}

impl Default for JointLimits {
    fn default() -> Self {
        use std::f64::consts::{FRAC_PI_2, PI};
        Self {
            hip_yaw: AngleRange::new(-FRAC_PI_2, FRAC_PI_2),
            hip_pitch: AngleRange::new(-FRAC_PI_2, FRAC_PI_2),
            knee: AngleRange::new(-PI, 0.0),
        }
    }
}

impl JointLimits {
    /// Returns the name of the first joint outside its range, if any.
    pub fn violation(&self, joints: &JointAngles) -> Option<&'static str> {
        if !self.hip_yaw.contains(joints.hip_yaw) {
            Some("hip_yaw")
        } else if !self.hip_pitch.contains(joints.hip_pitch) {
            Some("hip_pitch")
        } else if !self.knee.contains(joints.knee) {
            Some("knee")
        } else {
            None
        }
    }
}

/// Hip yaw, hip pitch and knee angles of one limb, radians.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct JointAngles {
    pub hip_yaw: f64,
    pub hip_pitch: f64,
    pub knee: f64,
}

impl JointAngles {
    pub const fn new(hip_yaw: f64, hip_pitch: f64, knee: f64) -> Self {
        Self {
            hip_yaw,
            hip_pitch,
            knee,
        }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.hip_yaw, self.hip_pitch, self.knee]
    }

    pub fn max_abs_diff(&self, other: &JointAngles) -> f64 {
        (self.hip_yaw - other.hip_yaw)
            .abs()
            .max((self.hip_pitch - other.hip_pitch).abs())
            .max((self.knee - other.knee).abs())
    }
}

/// Foot position in the limb's sagittal plane, meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SagittalPoint {
    pub x: f64,
    pub y: f64,
}

impl SagittalPoint {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn distance(&self, other: &SagittalPoint) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

/// Link lengths and hip mount pose of one limb on the base.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimbGeometry {
    pub femur_length: f64,
    pub tibia_length: f64,
    /// Hip position in the base frame, meters.
    pub mount_offset: [f64; 2],
    /// Azimuth of the sagittal plane at zero hip yaw, radians.
    pub mount_heading: f64,
    #[serde(default)]
    pub limits: JointLimits,
}

impl LimbGeometry {
    pub fn new(femur_length: f64, tibia_length: f64) -> Self {
        Self {
            femur_length,
            tibia_length,
            mount_offset: [0.0, 0.0],
            mount_heading: 0.0,
            limits: JointLimits::default(),
        }
    }

    pub fn with_mount(mut self, offset: [f64; 2], heading: f64) -> Self {
        self.mount_offset = offset;
        self.mount_heading = heading;
        self
    }

    pub fn full_extension(&self) -> f64 {
        self.femur_length + self.tibia_length
    }

    pub fn validate(&self) -> Result<(), KinematicsError> {
        let finite = self.femur_length.is_finite()
            && self.tibia_length.is_finite()
            && self.mount_offset.iter().all(|v| v.is_finite())
            && self.mount_heading.is_finite();
        if !finite {
            return Err(KinematicsError::Geometry("non-finite field".into()));
        }
        if self.femur_length <= 0.0 || self.tibia_length <= 0.0 {
            return Err(KinematicsError::Geometry(format!(
                "link lengths must be positive (femur {}, tibia {})",
                self.femur_length, self.tibia_length
            )));
        }
        Ok(())
    }

    /// Geometry reflected about the vertical plane through the base origin
    /// at azimuth `axis`.
    pub fn reflected(&self, axis: f64) -> Self {
        let (s, c) = (2.0 * axis).sin_cos();
        let [x, y] = self.mount_offset;
        let mut out = *self;
        out.mount_offset = [c * x + s * y, s * x - c * y];
        out.mount_heading = wrap(2.0 * axis - self.mount_heading);
        out
    }
}

/// Four limbs mounted at the corners of a square base in 90 degree
/// increments: front-right, front-left, hind-left, hind-right.
pub fn default_quad_geometry() -> [LimbGeometry; 4] {
    use std::f64::consts::FRAC_PI_4;
    let headings = [-FRAC_PI_4, FRAC_PI_4, 3.0 * FRAC_PI_4, -3.0 * FRAC_PI_4];
    headings.map(|h| {
        LimbGeometry::new(DEFAULT_FEMUR_LENGTH, DEFAULT_TIBIA_LENGTH).with_mount(
            [DEFAULT_HIP_RADIUS * h.cos(), DEFAULT_HIP_RADIUS * h.sin()],
            h,
        )
    })
}

/// Checks that every geometry is valid and that the mount headings differ
/// pairwise by multiples of a quarter turn.
pub fn validate_quad(geometry: &[LimbGeometry; 4]) -> Result<(), KinematicsError> {
    for g in geometry {
        g.validate()?;
    }
    let quarter = std::f64::consts::FRAC_PI_2;
    for i in 0..4 {
        for j in (i + 1)..4 {
            let diff = geometry[i].mount_heading - geometry[j].mount_heading;
            let turns = diff / quarter;
            if (turns - turns.round()).abs() > 1e-9 {
                return Err(KinematicsError::Geometry(format!(
                    "limbs {i} and {j} are not mounted in quarter-turn increments"
                )));
            }
        }
    }
    Ok(())
}

/// Standing height of the base over flat ground when the tibia is vertical:
/// `H = sin(theta1_init) * l_F + l_T`.
pub fn robot_height(geom: &LimbGeometry, theta1_init: f64) -> Result<f64, KinematicsError> {
    if !(theta1_init > 0.0 && theta1_init < std::f64::consts::FRAC_PI_2) {
        return Err(KinematicsError::Domain {
            name: "theta1_init",
            value: theta1_init,
            domain: "(0, pi/2)",
        });
    }
    Ok(theta1_init.sin() * geom.femur_length + geom.tibia_length)
}

/// Farthest ground-contact distance from the hip projection reachable with
/// a fully outstretched limb at base height `height`.
pub fn stance_reach(geom: &LimbGeometry, height: f64) -> Result<f64, KinematicsError> {
    let extension = geom.full_extension();
    if !(height >= 0.0) {
        return Err(KinematicsError::Domain {
            name: "height",
            value: height,
            domain: "[0, l_F + l_T]",
        });
    }
    if height > extension {
        return Err(KinematicsError::HeightUnreachable { height, extension });
    }
    Ok((extension * extension - height * height).sqrt())
}

/// Analytic inverse kinematics on the knee-flexed branch (`knee <= 0`).
///
/// Returns `(hip_pitch, knee)`. Cosines within [`COS_CLAMP_TOLERANCE`] of
/// the unit interval are clamped so that boundary points remain solvable.
pub fn inverse_kinematics(
    geom: &LimbGeometry,
    p: SagittalPoint,
) -> Result<(f64, f64), KinematicsError> {
    let (lf, lt) = (geom.femur_length, geom.tibia_length);
    let cos_knee = (p.x * p.x + p.y * p.y - lf * lf - lt * lt) / (2.0 * lf * lt);
    if !cos_knee.is_finite() || cos_knee.abs() > 1.0 + COS_CLAMP_TOLERANCE {
        return Err(KinematicsError::Unreachable {
            x: p.x,
            y: p.y,
            cos_knee,
        });
    }
    let cos_knee = cos_knee.clamp(-1.0, 1.0);
    let knee = -cos_knee.acos();
    let sin_flex = (1.0 - cos_knee * cos_knee).sqrt();
    let pitch = p.y.atan2(p.x) + (lt * sin_flex).atan2(lf + lt * cos_knee);
    Ok((pitch, knee))
}

pub fn forward_kinematics(geom: &LimbGeometry, hip_pitch: f64, knee: f64) -> SagittalPoint {
    let shank = hip_pitch + knee;
    SagittalPoint {
        x: geom.femur_length * hip_pitch.cos() + geom.tibia_length * shank.cos(),
        y: geom.femur_length * hip_pitch.sin() + geom.tibia_length * shank.sin(),
    }
}

/// Rotates the sagittal plane to azimuth `mount_heading + hip_yaw` and
/// translates it to the hip mount. Returns `[x, y, z]` in the base frame.
pub fn place_in_base_frame(geom: &LimbGeometry, hip_yaw: f64, p: SagittalPoint) -> [f64; 3] {
    let (s, c) = (geom.mount_heading + hip_yaw).sin_cos();
    [
        geom.mount_offset[0] + p.x * c,
        geom.mount_offset[1] + p.x * s,
        p.y,
    ]
}

/// Foot position in the base frame for a full joint triple.
pub fn foot_in_base_frame(geom: &LimbGeometry, joints: &JointAngles) -> [f64; 3] {
    let p = forward_kinematics(geom, joints.hip_pitch, joints.knee);
    place_in_base_frame(geom, joints.hip_yaw, p)
}

/// Joint triple for a foot target given in sagittal coordinates.
pub fn solve_limb(
    geom: &LimbGeometry,
    hip_yaw: f64,
    p: SagittalPoint,
) -> Result<JointAngles, KinematicsError> {
    let (pitch, knee) = inverse_kinematics(geom, p)?;
    Ok(JointAngles::new(hip_yaw, pitch, knee))
}
