use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::walker::Walker;
use super::{transition_frames, PerturbationModel, SimError, TrajectoryLog};
use crate::gait::{generate, FootPlan, Gait, GaitConfig};
use crate::kinematics::{stance_reach, LimbGeometry};

/// Cycles walked on each leg of the corner course.
pub const CORNER_CYCLES: usize = 4;

/// Upper bound on cycles in a line trial before giving up on progress.
const MAX_LINE_CYCLES: usize = 10_000;

/// Walks `steps` full cycles of `plan` and logs one sample per plan interval.
pub fn simulate_walk(
    plan: &FootPlan,
    steps: usize,
    perturb: &PerturbationModel,
) -> Result<TrajectoryLog, SimError> {
    simulate_trial(plan, steps, perturb, 0)
}

fn simulate_trial(
    plan: &FootPlan,
    steps: usize,
    perturb: &PerturbationModel,
    trial: u64,
) -> Result<TrajectoryLog, SimError> {
    if steps == 0 {
        return Err(SimError::Invalid("steps must be at least 1".into()));
    }
    let mut walker = Walker::new(plan, perturb, trial)?;
    for cycle in 0..steps {
        walker.cycle(plan, cycle)?;
    }
    Ok(walker.finish())
}

/// Net forward base displacement over one unperturbed cycle, meters.
pub fn step_length(plan: &FootPlan) -> Result<f64, SimError> {
    let log = simulate_walk(plan, 1, &PerturbationModel::ideal())?;
    Ok(log.last_pose().x - log.metadata.start.x)
}

/// Runs `trials` independent walks, each until the base has advanced at
/// least `distance` meters along the travel axis. Trial `k` draws its noise
/// from sub-seed streams of `perturb.seed` indexed by `k`.
pub fn run_line_experiment(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    perturb: &PerturbationModel,
    distance: f64,
    trials: usize,
) -> Result<Vec<TrajectoryLog>, SimError> {
    if !(distance > 0.0 && distance.is_finite()) {
        return Err(SimError::Invalid("distance must be positive".into()));
    }
    if trials == 0 {
        return Err(SimError::Invalid("trials must be at least 1".into()));
    }
    let plan = generate(config, geometry)?;
    (0..trials as u64)
        .into_par_iter()
        .map(|trial| walk_distance(&plan, perturb, distance, trial))
        .collect()
}

fn walk_distance(
    plan: &FootPlan,
    perturb: &PerturbationModel,
    distance: f64,
    trial: u64,
) -> Result<TrajectoryLog, SimError> {
    let mut walker = Walker::new(plan, perturb, trial)?;
    let start = walker.pose().x;
    for cycle in 0..MAX_LINE_CYCLES {
        walker.cycle(plan, cycle)?;
        if walker.pose().x - start >= distance {
            log::debug!(
                "trial {trial}: {distance} m reached after {} cycles",
                cycle + 1
            );
            return Ok(walker.finish());
        }
    }
    Err(SimError::NoProgress {
        cycles: MAX_LINE_CYCLES,
        progress: walker.pose().x - start,
        distance,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CornerTurn {
    #[default]
    Right,
    Left,
}

/// Four cycles forward, then four cycles sideways to the right without
/// turning the body. Between the two legs the limbs are re-posed in place,
/// one diagonal at a time, so the log holds `8 * samples_per_step` walking
/// samples plus the re-posing samples.
pub fn run_corner_experiment(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    perturb: &PerturbationModel,
) -> Result<TrajectoryLog, SimError> {
    run_corner_course(config, geometry, perturb, CornerTurn::Right)
}

/// The corner course with the sideways leg to the left.
pub fn run_mirrored_corner_experiment(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    perturb: &PerturbationModel,
) -> Result<TrajectoryLog, SimError> {
    run_corner_course(config, geometry, perturb, CornerTurn::Left)
}

pub fn run_corner_course(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    perturb: &PerturbationModel,
    turn: CornerTurn,
) -> Result<TrajectoryLog, SimError> {
    if config.gait != Gait::Trot {
        return Err(SimError::Invalid(format!(
            "the corner course is walked with the trot gait, not {}",
            config.gait
        )));
    }
    let forward = generate(config, geometry)?;
    let side = match turn {
        CornerTurn::Right => -FRAC_PI_2,
        CornerTurn::Left => FRAC_PI_2,
    };
    let sideways = generate(
        &config.with_direction(config.travel_direction() + side),
        geometry,
    )?;
    let n = forward.intervals();
    let raise = config.raise_ratio * stance_reach(&geometry[0], forward.height)?;
    let reposing = transition_frames(
        geometry,
        forward.joints_at(n),
        sideways.joints_at(0),
        n / 2,
        raise,
    )?;

    let mut walker = Walker::new(&forward, perturb, 0)?;
    for cycle in 0..CORNER_CYCLES {
        walker.cycle(&forward, cycle)?;
    }
    let dt = config.step_period / n as f64;
    for (i, frame) in reposing.iter().enumerate() {
        walker.advance(frame, dt).map_err(|e| SimError::Step {
            cycle: CORNER_CYCLES,
            sample: i + 1,
            source: Box::new(e),
        })?;
    }
    for cycle in 0..CORNER_CYCLES {
        walker.cycle(&sideways, CORNER_CYCLES + 1 + cycle)?;
    }
    Ok(walker.finish())
}
