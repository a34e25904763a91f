use super::perturb::TrialNoise;
use super::{
    solve_base_pose, BasePose, Contact, LogMetadata, LogSample, PerturbationModel, SimError,
    TrajectoryLog,
};
use crate::angle::wrap;
use crate::gait::{FootPlan, PlanSample};
use crate::kinematics::{foot_in_base_frame, JointAngles, LimbGeometry};

/// Incremental no-slip walker over a sequence of plan frames.
pub(crate) struct Walker {
    geometry: [LimbGeometry; 4],
    offsets: [f64; 4],
    noise: TrialNoise,
    pose: BasePose,
    pins: [Option<[f64; 2]>; 4],
    time: f64,
    max_residual: f64,
    metadata: LogMetadata,
    samples: Vec<LogSample>,
}

impl Walker {
    /// Stands the robot at the first frame of `plan`, facing so that the
    /// plan's direction of travel points along world `+x`.
    pub fn new(plan: &FootPlan, perturb: &PerturbationModel, trial: u64) -> Result<Self, SimError> {
        perturb.validate()?;
        let mut noise = TrialNoise::new(perturb, trial);
        let [dx, dy] = noise.initial_offset();
        let pose = BasePose {
            x: dx,
            y: dy,
            z: plan.height,
            heading: wrap(-plan.config.travel_direction()),
        };
        let mut walker = Self {
            geometry: plan.geometry,
            offsets: perturb.yaw_offsets,
            noise,
            pose,
            pins: [None; 4],
            time: 0.0,
            max_residual: 0.0,
            metadata: LogMetadata::new(&plan.config, perturb.seed, trial, pose),
            samples: Vec::new(),
        };
        let first = plan.frame(0);
        for k in 0..4 {
            if first[k].stance {
                let foot = walker.foot(k, &first[k].joints);
                walker.pins[k] = Some(pose.to_world(foot));
            }
        }
        walker.pose.z = walker.height(&first);
        walker.metadata.start = walker.pose;
        Ok(walker)
    }

    pub fn pose(&self) -> BasePose {
        self.pose
    }

    /// Foot position in the base plane with the calibration offset applied.
    fn foot(&self, limb: usize, joints: &JointAngles) -> [f64; 2] {
        let mut actual = *joints;
        actual.hip_yaw += self.offsets[limb];
        let p = foot_in_base_frame(&self.geometry[limb], &actual);
        [p[0], p[1]]
    }

    fn height(&self, frame: &[PlanSample; 4]) -> f64 {
        let (sum, count) = (0..4)
            .filter(|&k| frame[k].stance)
            .fold((0.0, 0), |(s, n), k| {
                let mut actual = frame[k].joints;
                actual.hip_yaw += self.offsets[k];
                (s - foot_in_base_frame(&self.geometry[k], &actual)[2], n + 1)
            });
        if count == 0 {
            self.pose.z
        } else {
            sum / count as f64
        }
    }

    /// Advances to `frame`, `dt` seconds after the previous one.
    pub fn advance(&mut self, frame: &[PlanSample; 4], dt: f64) -> Result<(), SimError> {
        let feet: [[f64; 2]; 4] = std::array::from_fn(|k| self.foot(k, &frame[k].joints));
        let contacts: Vec<Contact> = (0..4)
            .filter(|&k| frame[k].stance)
            .filter_map(|k| {
                self.pins[k].map(|world| Contact {
                    base: feet[k],
                    world,
                })
            })
            .collect();
        let planar = solve_base_pose(&contacts)?;
        self.pose = BasePose {
            z: self.height(frame),
            ..planar
        };
        for c in &contacts {
            let at = self.pose.to_world(c.base);
            let residual = (at[0] - c.world[0]).hypot(at[1] - c.world[1]);
            self.max_residual = self.max_residual.max(residual);
        }
        for k in 0..4 {
            if !frame[k].stance {
                self.pins[k] = None;
            } else if self.pins[k].is_none() {
                let at = self.pose.to_world(feet[k]);
                let [nx, ny] = self.noise.placement(k);
                self.pins[k] = Some([at[0] + nx, at[1] + ny]);
            }
        }
        self.time += dt;
        self.samples.push(LogSample {
            t: self.time,
            pose: self.pose,
            joints: flatten(frame),
        });
        Ok(())
    }

    /// Walks one full cycle of `plan`, logging every sample after the first.
    pub fn cycle(&mut self, plan: &FootPlan, cycle: usize) -> Result<(), SimError> {
        let n = plan.intervals();
        let dt = plan.config.step_period / n as f64;
        for i in 1..=n {
            self.advance(&plan.frame(i), dt)
                .map_err(|e| SimError::Step {
                    cycle,
                    sample: i,
                    source: Box::new(e),
                })?;
        }
        Ok(())
    }

    pub fn finish(mut self) -> TrajectoryLog {
        self.metadata.max_contact_residual = self.max_residual;
        TrajectoryLog {
            metadata: self.metadata,
            samples: self.samples,
        }
    }
}

fn flatten(frame: &[PlanSample; 4]) -> [f64; 12] {
    std::array::from_fn(|j| frame[j / 3].joints.to_array()[j % 3])
}
