use std::f64::consts::PI;

use crate::gait::{Diagonal, GaitError, PlanSample};
use crate::kinematics::{forward_kinematics, solve_limb, JointAngles, LimbGeometry, SagittalPoint};

/// Frames that re-pose the limbs from `from` to `to` without moving the base:
/// one diagonal at a time swings to its new pose while the other supports.
/// Each swinging diagonal takes `samples` frames and raises its feet by up
/// to `raise` meters. Diagonals whose joints already match are skipped, so
/// identical postures give no frames.
pub fn transition_frames(
    geometry: &[LimbGeometry; 4],
    from: [JointAngles; 4],
    to: [JointAngles; 4],
    samples: usize,
    raise: f64,
) -> Result<Vec<[PlanSample; 4]>, GaitError> {
    let mut current = from;
    let mut frames = Vec::new();
    for diagonal in [Diagonal::FrHl, Diagonal::FlHr] {
        let moving = diagonal.limbs();
        if moving.iter().all(|&k| from[k] == to[k]) {
            continue;
        }
        for j in 1..=samples {
            let s = j as f64 / samples as f64;
            let mut frame: [PlanSample; 4] = std::array::from_fn(|k| PlanSample {
                phase: s,
                joints: current[k],
                stance: true,
            });
            for &k in &moving {
                if j == samples {
                    frame[k].joints = to[k];
                    continue;
                }
                let g = &geometry[k];
                let a = forward_kinematics(g, from[k].hip_pitch, from[k].knee);
                let b = forward_kinematics(g, to[k].hip_pitch, to[k].knee);
                let foot = SagittalPoint::new(
                    a.x + (b.x - a.x) * s,
                    a.y + (b.y - a.y) * s + raise * (PI * s).sin(),
                );
                let yaw = from[k].hip_yaw + (to[k].hip_yaw - from[k].hip_yaw) * s;
                frame[k].joints =
                    solve_limb(g, yaw, foot).map_err(|source| GaitError::Unreachable {
                        limb: k,
                        phase: s,
                        source,
                    })?;
                frame[k].stance = false;
            }
            frames.push(frame);
        }
        for &k in &moving {
            current[k] = to[k];
        }
    }
    Ok(frames)
}
