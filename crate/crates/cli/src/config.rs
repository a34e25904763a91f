//! Run configuration file.

use std::path::{Path, PathBuf};

use morphogait::gait::{Gait, GaitConfig};
use morphogait::kinematics::{default_quad_geometry, validate_quad, LimbGeometry};
use morphogait::sim::{CornerTurn, PerturbationModel};
use morphogait::stream::StreamOptions;
use serde::Deserialize;
use serde_json::Value;

use crate::CliError;

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

fn default_distance() -> f64 {
    1.0
}

fn one() -> usize {
    1
}

fn default_steps() -> usize {
    4
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Experiment {
    /// Independent trials, each walking until `distance` meters of progress.
    Line {
        #[serde(default = "default_distance")]
        distance: f64,
        #[serde(default = "one")]
        trials: usize,
    },
    /// Forward then sideways, without turning the body.
    Corner {
        #[serde(default)]
        turn: CornerTurn,
    },
    /// A fixed number of full cycles.
    Walk {
        #[serde(default = "default_steps")]
        steps: usize,
    },
}

impl Default for Experiment {
    fn default() -> Self {
        Experiment::Line {
            distance: default_distance(),
            trials: 1,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    pub plan: Option<PathBuf>,
    pub log: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

fn default_period() -> f64 {
    StreamOptions::default().period
}

fn default_duration() -> f64 {
    StreamOptions::default().duration
}

fn default_timeout_ms() -> u64 {
    1000
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamSettings {
    #[serde(default = "default_period")]
    pub period: f64,
    #[serde(default = "default_duration")]
    pub duration: f64,
    #[serde(default)]
    pub realtime: bool,
    /// Servo time constant of the loopback simulator, seconds.
    #[serde(default)]
    pub tau: f64,
    /// How long to wait for each feedback frame.
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
}

impl Default for StreamSettings {
    fn default() -> Self {
        Self {
            period: default_period(),
            duration: default_duration(),
            realtime: false,
            tau: 0.0,
            timeout_ms: default_timeout_ms(),
        }
    }
}

impl StreamSettings {
    pub fn options(&self) -> StreamOptions {
        StreamOptions {
            period: self.period,
            duration: self.duration,
            realtime: self.realtime,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        self.options()
            .frame_count()
            .map_err(|e| CliError::Config(format!("stream: {e}")))?;
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(CliError::Config("stream: tau must be >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    schema_version: u32,
    #[serde(default)]
    geometry: Option<[LimbGeometry; 4]>,
    gait: Value,
    #[serde(default)]
    perturbation: PerturbationModel,
    #[serde(default)]
    experiment: Experiment,
    #[serde(default)]
    output: Outputs,
    #[serde(default)]
    stream: StreamSettings,
}

/// Everything one invocation needs, validated.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub geometry: [LimbGeometry; 4],
    pub gait: GaitConfig,
    pub perturbation: PerturbationModel,
    pub experiment: Experiment,
    /// Output paths, already resolved against the config file's directory.
    pub output: Outputs,
    pub stream: StreamSettings,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config =
            Self::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [
            &mut config.output.plan,
            &mut config.output.log,
            &mut config.output.summary,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let bad = |e: serde_json::Error| CliError::Config(e.to_string());
        let raw: RawConfig = serde_json::from_str(text).map_err(bad)?;
        if raw.schema_version != CONFIG_SCHEMA_VERSION {
            return Err(CliError::Config(format!(
                "unsupported schema_version {} (expected {CONFIG_SCHEMA_VERSION})",
                raw.schema_version
            )));
        }
        let gait = gait_config(raw.gait)?;
        gait.validate()
            .map_err(|e| CliError::Config(e.to_string()))?;
        let geometry = raw.geometry.unwrap_or_else(default_quad_geometry);
        validate_quad(&geometry).map_err(|e| CliError::Config(format!("geometry: {e}")))?;
        raw.perturbation
            .validate()
            .map_err(|e| CliError::Config(format!("perturbation: {e}")))?;
        raw.stream.validate()?;
        let config = Self {
            geometry,
            gait,
            perturbation: raw.perturbation,
            experiment: raw.experiment,
            output: raw.output,
            stream: raw.stream,
        };
        config.check_experiment()?;
        Ok(config)
    }

    fn check_experiment(&self) -> Result<(), CliError> {
        let bad = |m: &str| Err(CliError::Config(format!("experiment: {m}")));
        match self.experiment {
            Experiment::Line { distance, trials } => {
                if !(distance > 0.0 && distance.is_finite()) {
                    return bad("distance must be positive");
                }
                if trials == 0 {
                    return bad("trials must be at least 1");
                }
            }
            Experiment::Corner { .. } if self.gait.gait != Gait::Trot => {
                return bad("the corner course is walked with the trot gait");
            }
            Experiment::Corner { .. } => {}
            Experiment::Walk { steps } if steps == 0 => return bad("steps must be at least 1"),
            Experiment::Walk { .. } => {}
        }
        Ok(())
    }
}

/// Fills the fields missing from the `gait` section with the defaults of the
/// named gait, then parses it strictly.
fn gait_config(section: Value) -> Result<GaitConfig, CliError> {
    let Value::Object(fields) = section else {
        return Err(CliError::Config("gait must be an object".into()));
    };
    let gait: Gait = match fields.get("gait") {
        Some(v) => serde_json::from_value(v.clone())
            .map_err(|e| CliError::Config(format!("gait.gait: {e}")))?,
        None => {
            return Err(CliError::Config(
                "gait.gait is required (trot, canter or gallop)".into(),
            ))
        }
    };
    let Value::Object(mut merged) =
        serde_json::to_value(GaitConfig::new(gait)).expect("gait config serializes")
    else {
        unreachable!("gait config is a struct")
    };
    merged.extend(fields);
    serde_json::from_value(Value::Object(merged))
        .map_err(|e| CliError::Config(format!("gait: {e}")))
}
