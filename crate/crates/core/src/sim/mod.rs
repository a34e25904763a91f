//! Kinematic walking simulator.
//!
//! The base is quasi-static and rigid. Feet in stance are pinned to the world
//! point where they touched down; at each plan sample the planar base pose is
//! the rigid transform that best maps the pinned feet, as seen from the base
//! through forward kinematics, onto their pins. Base height is the mean height
//! implied by the limbs in stance.
//!
//! Travel is laid out in the world frame so that the gait's direction of
//! travel starts along `+x`: the base starts at the origin with heading
//! `-direction`.

mod experiment;
mod log;
mod perturb;
mod pose;
mod transition;
mod walker;

use thiserror::Error;

use crate::gait::GaitError;
use crate::kinematics::KinematicsError;

pub use experiment::{
    run_corner_course, run_corner_experiment, run_line_experiment, run_mirrored_corner_experiment,
    simulate_walk, step_length, CornerTurn, CORNER_CYCLES,
};
pub use log::{
    config_hash, read_samples_csv, write_samples_csv, LogMetadata, LogSample, TrajectoryLog,
    LOG_CSV_COLUMNS, SCHEMA_VERSION,
};
pub use perturb::{PerturbationModel, MAX_INITIAL_SIGMA};
pub use pose::{solve_base_pose, BasePose, Contact};
pub use transition::transition_frames;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("base pose underdetermined: {contacts} pinned stance contact(s), need at least 2")]
    Underdetermined { contacts: usize },
    #[error("base pose degenerate: stance contacts coincide")]
    Degenerate,
    #[error("cycle {cycle}, sample {sample}: {source}")]
    Step {
        cycle: usize,
        sample: usize,
        #[source]
        source: Box<SimError>,
    },
    #[error("invalid simulation input: {0}")]
    Invalid(String),
    #[error("no forward progress after {cycles} cycles ({progress} m of {distance} m)")]
    NoProgress {
        cycles: usize,
        progress: f64,
        distance: f64,
    },
    #[error(transparent)]
    Gait(#[from] GaitError),
    #[error(transparent)]
    Kinematics(#[from] KinematicsError),
    #[error("log i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("log csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("log metadata: {0}")]
    Json(#[from] serde_json::Error),
}
