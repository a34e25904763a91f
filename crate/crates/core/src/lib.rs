//! Gait kinematics and kinematic locomotion simulation for a four-limb,
//! three-joint-per-limb walking platform.
//!
//! The crate is organised bottom-up:
//!
//! * [`kinematics`] solves one limb in its sagittal plane and places it on the base.
//! * [`gait`] turns a [`gait::GaitConfig`] into a cyclic [`gait::FootPlan`] for
//!   the trot, canter and gallop gaits.
//! * [`sim`] walks a plan under no-slip contact constraints and records a
//!   [`sim::TrajectoryLog`], optionally with calibration and placement errors.
//! * [`metrics`] scores logs against reference paths (crosstrack RMSE and maximum).
//! * [`stream`] is the newline-delimited JSON joint-command protocol together
//!   with a loopback servo simulator.

pub mod angle;
pub mod gait;
pub mod kinematics;
pub mod metrics;
pub mod sim;
pub mod stream;

pub use gait::{Diagonal, FootPlan, Gait, GaitConfig, GaitError};
pub use kinematics::{JointAngles, JointLimits, KinematicsError, LimbGeometry, SagittalPoint};
pub use metrics::{ErrorReport, ReferencePath};
pub use sim::{BasePose, PerturbationModel, SimError, TrajectoryLog};

/// Number of limbs on the platform.
pub const LIMBS: usize = 4;
/// Number of actuated joints across all limbs.
pub const JOINTS: usize = 12;
