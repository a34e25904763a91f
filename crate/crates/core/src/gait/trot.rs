//! Trot and gallop: pivoting the cross-travel diagonal around planted feet.

use std::f64::consts::PI;

use super::canter::annular_path;
use super::plan::build_plan;
use super::{
    lift_angle, prepare, vertical_tibia_pose, Diagonal, FootPlan, Gait, GaitConfig, GaitError,
    Stance,
};
use crate::kinematics::{solve_limb, JointAngles, LimbGeometry, SagittalPoint};

const PERPENDICULAR_TOLERANCE: f64 = 1e-9;

/// Roles of the four limbs for one direction of travel.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PivotLayout {
    pub pivot: Diagonal,
    /// `+1` or `-1` for pivot limbs: the yaw sense that moves the hip
    /// forward. Zero for the fore-aft limbs.
    pub sweep_sign: [f64; 4],
    /// Whether a fore-aft limb points along the direction of travel.
    pub front_facing: [bool; 4],
}

pub(crate) fn pivot_layout(
    geometry: &[LimbGeometry; 4],
    direction: f64,
) -> Result<PivotLayout, GaitError> {
    let across =
        |k: usize| (geometry[k].mount_heading - direction).cos().abs() < PERPENDICULAR_TOLERANCE;
    let pivot = [Diagonal::FrHl, Diagonal::FlHr]
        .into_iter()
        .find(|d| d.limbs().iter().all(|&k| across(k)))
        .ok_or(GaitError::NoPivotDiagonal { direction })?;
    let mut sweep_sign = [0.0; 4];
    let mut front_facing = [false; 4];
    for k in 0..4 {
        let relative = geometry[k].mount_heading - direction;
        if pivot.limbs().contains(&k) {
            sweep_sign[k] = relative.sin().signum();
        } else {
            front_facing[k] = relative.cos() > 0.0;
        }
    }
    Ok(PivotLayout {
        pivot,
        sweep_sign,
        front_facing,
    })
}

struct PivotGait<'a> {
    config: &'a GaitConfig,
    geometry: &'a [LimbGeometry; 4],
    stance: Stance,
    layout: PivotLayout,
    raise: f64,
    swing_fraction: f64,
}

impl PivotGait<'_> {
    fn lifted(
        &self,
        limb: usize,
        hip_yaw: f64,
        progress: f64,
        phase: f64,
    ) -> Result<JointAngles, GaitError> {
        if self.raise == 0.0 {
            return Ok(vertical_tibia_pose(hip_yaw, self.config.theta1_init));
        }
        let foot = SagittalPoint::new(
            self.stance.neutral_reach,
            -self.stance.height + self.raise * (PI * progress).sin(),
        );
        solve_limb(&self.geometry[limb], hip_yaw, foot).map_err(|source| GaitError::Unreachable {
            limb,
            phase,
            source,
        })
    }

    /// Pivot limb: swing back to the start of the sweep, then sweep while
    /// lifting the base.
    fn pivot_sample(&self, limb: usize, phase: f64) -> Result<(JointAngles, bool), GaitError> {
        let amplitude = self.config.yaw_amplitude;
        let sign = self.layout.sweep_sign[limb];
        let split = self.swing_fraction;
        if phase == 0.0 {
            return Ok((
                vertical_tibia_pose(sign * amplitude, self.config.theta1_init),
                true,
            ));
        }
        if phase < split {
            let progress = phase / split;
            let yaw = sign * amplitude * (1.0 - 2.0 * progress);
            return Ok((self.lifted(limb, yaw, progress, phase)?, false));
        }
        let s = (phase - split) / (1.0 - split);
        let swept = amplitude * (1.0 - (2.0 * s - 1.0).abs());
        let lift = lift_angle(swept, self.config.theta1_init)?;
        let yaw = sign * amplitude * (2.0 * s - 1.0);
        Ok((
            vertical_tibia_pose(yaw, self.config.theta1_init + lift),
            true,
        ))
    }

    /// Fore-aft limb in the trot: supports while the pivot diagonal swings,
    /// raised while it sweeps.
    fn trot_fore_aft_sample(
        &self,
        limb: usize,
        phase: f64,
    ) -> Result<(JointAngles, bool), GaitError> {
        let split = self.swing_fraction;
        if phase <= split || phase >= 1.0 {
            return Ok((vertical_tibia_pose(0.0, self.config.theta1_init), true));
        }
        let progress = (phase - split) / (1.0 - split);
        Ok((self.lifted(limb, 0.0, progress, phase)?, false))
    }

    /// Fore-aft limb in the gallop: annular path with a segment as long as
    /// one pivot sweep, ground half while the pivot diagonal swings.
    fn gallop_fore_aft_sample(
        &self,
        limb: usize,
        phase: f64,
        segment: f64,
    ) -> Result<(JointAngles, bool), GaitError> {
        let q = if self.layout.front_facing[limb] {
            phase
        } else {
            (0.5 - phase).rem_euclid(1.0)
        };
        let foot = annular_path(segment, self.stance.height, self.config.spiral_slope, q);
        let joints = solve_limb(&self.geometry[limb], 0.0, foot).map_err(|source| {
            GaitError::Unreachable {
                limb,
                phase,
                source,
            }
        })?;
        Ok((joints, q <= 0.5 || q >= 1.0))
    }
}

fn pivot_gait<'a>(
    config: &'a GaitConfig,
    geometry: &'a [LimbGeometry; 4],
    gait: Gait,
) -> Result<PivotGait<'a>, GaitError> {
    let stance = prepare(config, geometry, gait)?;
    let layout = pivot_layout(geometry, config.travel_direction())?;
    let raise = if config.yaw_amplitude == 0.0 {
        0.0
    } else {
        config.raise_ratio * stance.reach
    };
    let swing_fraction = match gait {
        Gait::Gallop => 0.5,
        _ => config.swing_fraction,
    };
    Ok(PivotGait {
        config,
        geometry,
        stance,
        layout,
        raise,
        swing_fraction,
    })
}

/// Trot: the pivot diagonal swings forward and plants while the fore-aft
/// diagonal supports, then sweeps its hip yaw through `[-amplitude,
/// amplitude]` with the compensating lift while the fore-aft limbs are raised.
pub fn trot_step(config: &GaitConfig, geometry: &[LimbGeometry; 4]) -> Result<FootPlan, GaitError> {
    let gait = pivot_gait(config, geometry, Gait::Trot)?;
    let pivot = gait.layout.pivot.limbs();
    let offsets = std::array::from_fn(|k| {
        if pivot.contains(&k) {
            gait.swing_fraction
        } else {
            0.0
        }
    });
    build_plan(config, geometry, gait.stance.height, offsets, |k, phase| {
        if pivot.contains(&k) {
            gait.pivot_sample(k, phase)
        } else {
            gait.trot_fore_aft_sample(k, phase)
        }
    })
}

/// Gallop: trot pivoting on one diagonal while the fore-aft diagonal runs an
/// annular path, so that one of the two always propels the base.
pub fn gallop_step(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
) -> Result<FootPlan, GaitError> {
    let gait = pivot_gait(config, geometry, Gait::Gallop)?;
    let segment = 2.0 * gait.stance.neutral_reach * config.yaw_amplitude.sin();
    if segment > gait.stance.reach {
        return Err(GaitError::InvalidConfig {
            field: "yaw_amplitude",
            reason: format!(
                "gallop ground segment {segment} m exceeds the stance reach {} m",
                gait.stance.reach
            ),
        });
    }
    let pivot = gait.layout.pivot.limbs();
    let offsets = std::array::from_fn(|k| if pivot.contains(&k) { 0.5 } else { 0.0 });
    build_plan(config, geometry, gait.stance.height, offsets, |k, phase| {
        if pivot.contains(&k) {
            gait.pivot_sample(k, phase)
        } else {
            gait.gallop_fore_aft_sample(k, phase, segment)
        }
    })
}
