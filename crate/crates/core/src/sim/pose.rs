use serde::{Deserialize, Serialize};

use super::SimError;
use crate::angle::wrap;

/// Smallest spread (sum of squared centred distances, m²) accepted from a
/// contact set before it is treated as coincident.
const DEGENERATE_SPREAD: f64 = 1e-18;

/// Pose of the base in the world frame.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BasePose {
    pub x: f64,
    pub y: f64,
    /// Height of the hip plane over the ground, meters.
    pub z: f64,
    /// Yaw of the base frame, radians in `(-pi, pi]`.
    pub heading: f64,
}

impl BasePose {
    /// Maps a base-frame point to world coordinates in the ground plane.
    pub fn to_world(&self, p: [f64; 2]) -> [f64; 2] {
        let (s, c) = self.heading.sin_cos();
        [self.x + c * p[0] - s * p[1], self.y + s * p[0] + c * p[1]]
    }
}

/// A stance foot seen from the base frame and pinned in the world.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contact {
    pub base: [f64; 2],
    pub world: [f64; 2],
}

/// Planar rigid transform (heading, translation) that best maps the
/// base-frame foot positions onto their pinned world positions.
///
/// Two contacts are aligned exactly along their joining direction with the
/// midpoints matched; more contacts use the least-squares rotation of the
/// centred point sets. The returned pose has `z = 0`.
pub fn solve_base_pose(contacts: &[Contact]) -> Result<BasePose, SimError> {
    if contacts.len() < 2 {
        return Err(SimError::Underdetermined {
            contacts: contacts.len(),
        });
    }
    let n = contacts.len() as f64;
    let mean = |f: &dyn Fn(&Contact) -> [f64; 2]| {
        let sum = contacts.iter().fold([0.0, 0.0], |acc, c| {
            let p = f(c);
            [acc[0] + p[0], acc[1] + p[1]]
        });
        [sum[0] / n, sum[1] / n]
    };
    let base_mean = mean(&|c| c.base);
    let world_mean = mean(&|c| c.world);

    let (mut dot, mut cross, mut base_spread, mut world_spread) = (0.0, 0.0, 0.0, 0.0);
    for c in contacts {
        let b = [c.base[0] - base_mean[0], c.base[1] - base_mean[1]];
        let w = [c.world[0] - world_mean[0], c.world[1] - world_mean[1]];
        dot += b[0] * w[0] + b[1] * w[1];
        cross += b[0] * w[1] - b[1] * w[0];
        base_spread += b[0] * b[0] + b[1] * b[1];
        world_spread += w[0] * w[0] + w[1] * w[1];
    }
    if base_spread < DEGENERATE_SPREAD || world_spread < DEGENERATE_SPREAD {
        return Err(SimError::Degenerate);
    }
    let heading = cross.atan2(dot);
    let (s, c) = heading.sin_cos();
    Ok(BasePose {
        x: world_mean[0] - (c * base_mean[0] - s * base_mean[1]),
        y: world_mean[1] - (s * base_mean[0] + c * base_mean[1]),
        z: 0.0,
        heading: wrap(heading),
    })
}
