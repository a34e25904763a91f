//! Canter: every foot runs the same closed annular path, diagonals half a
//! cycle apart, front and rear limbs in opposite senses.

use std::f64::consts::PI;

use super::plan::build_plan;
use super::{prepare, Diagonal, FootPlan, Gait, GaitConfig, GaitError};
use crate::angle::wrap;
use crate::kinematics::{
    robot_height, solve_limb, stance_reach, KinematicsError, LimbGeometry, SagittalPoint,
};

/// Point of the annular foot path at path parameter `q` in `[0, 1]`.
///
/// `q` in `[0, 0.5]` is the ground segment from `(segment, -height)` to the
/// hip projection `(0, -height)` at constant speed. `q` in `(0.5, 1]` is the
/// swing arc back to the start: two mirrored Archimedean arcs
/// `r(phi) = segment / 2 + slope * min(phi, pi - phi)` about the segment
/// midpoint.
pub fn annular_path(segment: f64, height: f64, slope: f64, q: f64) -> SagittalPoint {
    if q <= 0.5 {
        return SagittalPoint::new(segment * (1.0 - 2.0 * q), -height);
    }
    if q >= 1.0 {
        return SagittalPoint::new(segment, -height);
    }
    let phi = 2.0 * PI * (q - 0.5);
    let radius = 0.5 * segment + slope * phi.min(PI - phi);
    SagittalPoint::new(
        0.5 * segment - radius * phi.cos(),
        -height + radius * phi.sin(),
    )
}

/// Canter foot path in the limb's sagittal plane at `phase` in `[0, 1)`,
/// with the ground segment running from the full-extension reach to the
/// hip projection.
pub fn canter_foot_path(
    geom: &LimbGeometry,
    theta1_init: f64,
    slope: f64,
    phase: f64,
) -> Result<SagittalPoint, KinematicsError> {
    let height = robot_height(geom, theta1_init)?;
    let reach = stance_reach(geom, height)?;
    Ok(annular_path(reach, height, slope, phase.rem_euclid(1.0)))
}

/// Hip yaw that turns a limb's sagittal plane onto the travel axis, and
/// whether the limb then faces forward.
pub(crate) fn align_to_travel(geom: &LimbGeometry, direction: f64) -> (f64, bool) {
    let relative = wrap(direction - geom.mount_heading);
    if relative.cos() >= 0.0 {
        (relative, true)
    } else {
        (wrap(relative + PI), false)
    }
}

pub fn canter_step(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
) -> Result<FootPlan, GaitError> {
    let stance = prepare(config, geometry, Gait::Canter)?;
    let direction = config.travel_direction();
    let lead = config.lead_diagonal;
    let offsets: [f64; 4] = std::array::from_fn(|k| {
        if Diagonal::of_limb(k) == lead {
            0.0
        } else {
            0.5
        }
    });
    let alignment: [(f64, bool); 4] =
        std::array::from_fn(|k| align_to_travel(&geometry[k], direction));
    build_plan(config, geometry, stance.height, offsets, |k, phase| {
        let local = (phase - offsets[k]).rem_euclid(1.0);
        let (yaw, front) = alignment[k];
        let q = if front {
            local
        } else {
            (0.5 - local).rem_euclid(1.0)
        };
        let foot = annular_path(stance.reach, stance.height, config.spiral_slope, q);
        let joints =
            solve_limb(&geometry[k], yaw, foot).map_err(|source| GaitError::Unreachable {
                limb: k,
                phase,
                source,
            })?;
        Ok((joints, q <= 0.5))
    })
}
