use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use super::SimError;
use crate::angle::wrap;
use crate::kinematics::LimbGeometry;

/// Largest accepted initial-position dispersion, meters.
pub const MAX_INITIAL_SIGMA: f64 = 0.0048;

/// RNG stream reserved for the initial pose; streams 0..4 feed the limbs.
const INITIAL_STREAM: u64 = 4;
const STREAMS_PER_TRIAL: u64 = 8;

fn identity_streams() -> [usize; 4] {
    [0, 1, 2, 3]
}

fn unit() -> f64 {
    1.0
}

/// Calibration and placement errors injected into a walk.
///
/// Offsets are added to the commanded hip yaw of each limb. Placement noise
/// is drawn at every touchdown from the limb's own RNG stream, so limbs do
/// not perturb each other's sequences. The lateral (world `y`) component of
/// every random draw is multiplied by `lateral_sign`, and `noise_streams`
/// assigns streams to limbs; both exist so that a run can be mirrored
/// exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationModel {
    /// Hip-yaw calibration offset per limb, radians.
    #[serde(default)]
    pub yaw_offsets: [f64; 4],
    /// Standard deviation of touchdown placement noise per axis, meters.
    #[serde(default)]
    pub placement_sigma: f64,
    /// Standard deviation of the initial base position per axis, meters.
    #[serde(default)]
    pub initial_sigma: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "identity_streams")]
    pub noise_streams: [usize; 4],
    #[serde(default = "unit")]
    pub lateral_sign: f64,
    /// Side-to-side body sway, meters: every touchdown lands this far off
    /// along world `y`, alternating sides from one touchdown of a limb to
    /// its next.
    #[serde(default)]
    pub sway: f64,
}

impl Default for PerturbationModel {
    fn default() -> Self {
        Self {
            yaw_offsets: [0.0; 4],
            placement_sigma: 0.0,
            initial_sigma: 0.0,
            seed: 0,
            noise_streams: identity_streams(),
            lateral_sign: 1.0,
            sway: 0.0,
        }
    }
}

impl PerturbationModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        let invalid = |m: &str| Err(SimError::Invalid(m.to_string()));
        if !self.yaw_offsets.iter().all(|v| v.is_finite()) {
            return invalid("yaw_offsets must be finite");
        }
        if !(self.placement_sigma >= 0.0 && self.placement_sigma.is_finite()) {
            return invalid("placement_sigma must be a finite value >= 0");
        }
        if !(self.initial_sigma >= 0.0 && self.initial_sigma <= MAX_INITIAL_SIGMA) {
            return invalid("initial_sigma must lie in [0, 0.0048] m");
        }
        let mut seen = [false; 4];
        for &s in &self.noise_streams {
            if s >= 4 || seen[s] {
                return invalid("noise_streams must be a permutation of 0..4");
            }
            seen[s] = true;
        }
        if self.lateral_sign != 1.0 && self.lateral_sign != -1.0 {
            return invalid("lateral_sign must be 1 or -1");
        }
        if !(self.sway >= 0.0 && self.sway.is_finite()) {
            return invalid("sway must be a finite value >= 0");
        }
        Ok(())
    }

    pub fn is_ideal(&self) -> bool {
        self.yaw_offsets.iter().all(|&v| v == 0.0)
            && self.placement_sigma == 0.0
            && self.initial_sigma == 0.0
            && self.sway == 0.0
    }

    /// The perturbation that reflects a run about its travel axis: limbs are
    /// relabelled by the reflection of the mounts about `direction`, yaw
    /// offsets change sign and every lateral draw flips.
    pub fn mirrored(&self, geometry: &[LimbGeometry; 4], direction: f64) -> Result<Self, SimError> {
        let mut out = *self;
        for (k, g) in geometry.iter().enumerate() {
            let target = 2.0 * direction - g.mount_heading;
            let j = (0..4)
                .find(|&j| wrap(target - geometry[j].mount_heading).abs() < 1e-9)
                .ok_or_else(|| {
                    SimError::Invalid(format!(
                        "limb {k} has no mirror image about direction {direction} rad"
                    ))
                })?;
            out.yaw_offsets[j] = -self.yaw_offsets[k];
            out.noise_streams[j] = self.noise_streams[k];
        }
        out.lateral_sign = -self.lateral_sign;
        Ok(out)
    }
}

/// Random draws of one trial.
pub(crate) struct TrialNoise {
    limbs: [ChaCha8Rng; 4],
    initial: ChaCha8Rng,
    placement: Option<Normal<f64>>,
    initial_sigma: f64,
    lateral_sign: f64,
    sway: f64,
    touchdowns: [u64; 4],
}

impl TrialNoise {
    pub fn new(model: &PerturbationModel, trial: u64) -> Self {
        let stream = |s: u64| {
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            rng.set_stream(trial * STREAMS_PER_TRIAL + s);
            rng
        };
        Self {
            limbs: std::array::from_fn(|k| stream(model.noise_streams[k] as u64)),
            initial: stream(INITIAL_STREAM),
            placement: (model.placement_sigma > 0.0)
                .then(|| Normal::new(0.0, model.placement_sigma).expect("sigma validated")),
            initial_sigma: model.initial_sigma,
            lateral_sign: model.lateral_sign,
            sway: model.sway,
            touchdowns: [0; 4],
        }
    }

    /// Touchdown displacement of one limb in world coordinates.
    pub fn placement(&mut self, limb: usize) -> [f64; 2] {
        let side = if self.touchdowns[limb].is_multiple_of(2) {
            1.0
        } else {
            -1.0
        };
        self.touchdowns[limb] += 1;
        let [dx, dy] = match &self.placement {
            Some(normal) => {
                let rng = &mut self.limbs[limb];
                [normal.sample(rng), normal.sample(rng)]
            }
            None => [0.0, 0.0],
        };
        [dx, self.lateral_sign * (dy + side * self.sway)]
    }

    pub fn initial_offset(&mut self) -> [f64; 2] {
        if self.initial_sigma == 0.0 {
            return [0.0, 0.0];
        }
        let normal = Normal::new(0.0, self.initial_sigma).expect("sigma validated");
        let dx = normal.sample(&mut self.initial);
        let dy = normal.sample(&mut self.initial);
        [dx, self.lateral_sign * dy]
    }
}
