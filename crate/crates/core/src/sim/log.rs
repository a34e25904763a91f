use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{BasePose, SimError};
use crate::gait::{Gait, GaitConfig};

pub const SCHEMA_VERSION: u32 = 1;

/// Columns of the trajectory CSV: time, pose, then the 12 joint angles in
/// limb-major order.
pub const LOG_CSV_COLUMNS: [&str; 17] = [
    "t", "x", "y", "z", "heading", "l0_t0", "l0_t1", "l0_t2", "l1_t0", "l1_t1", "l1_t2", "l2_t0",
    "l2_t1", "l2_t2", "l3_t0", "l3_t1", "l3_t2",
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogSample {
    pub t: f64,
    pub pose: BasePose,
    /// Commanded joint angles, limb-major.
    pub joints: [f64; 12],
}

/// Sidecar metadata of a trajectory log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogMetadata {
    pub gait: Gait,
    pub config: GaitConfig,
    /// SHA-256 of the canonical JSON of `config`.
    pub config_hash: String,
    pub seed: u64,
    #[serde(default)]
    pub trial: u64,
    /// Pose before the first logged sample.
    pub start: BasePose,
    /// Largest distance between a pinned foot and where the base pose puts
    /// it, meters. Zero when the contacts move rigidly.
    #[serde(default)]
    pub max_contact_residual: f64,
    pub schema_version: u32,
}

impl LogMetadata {
    pub fn new(config: &GaitConfig, seed: u64, trial: u64, start: BasePose) -> Self {
        Self {
            gait: config.gait,
            config: *config,
            config_hash: config_hash(config),
            seed,
            trial,
            start,
            max_contact_residual: 0.0,
            schema_version: SCHEMA_VERSION,
        }
    }
}

pub fn config_hash(config: &GaitConfig) -> String {
    let json = serde_json::to_vec(config).expect("gait config serializes");
    Sha256::digest(&json)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryLog {
    pub metadata: LogMetadata,
    pub samples: Vec<LogSample>,
}

impl TrajectoryLog {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn last_pose(&self) -> BasePose {
        self.samples.last().map_or(self.metadata.start, |s| s.pose)
    }

    pub fn positions(&self) -> Vec<[f64; 2]> {
        self.samples.iter().map(|s| [s.pose.x, s.pose.y]).collect()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), SimError> {
        write_samples_csv(&self.samples, writer)
    }

    pub fn write_metadata<W: Write>(&self, writer: W) -> Result<(), SimError> {
        serde_json::to_writer_pretty(writer, &self.metadata)?;
        Ok(())
    }

    pub fn read<R1: Read, R2: Read>(csv: R1, metadata: R2) -> Result<Self, SimError> {
        let metadata: LogMetadata = serde_json::from_reader(metadata)?;
        if metadata.schema_version != SCHEMA_VERSION {
            return Err(SimError::Invalid(format!(
                "unsupported log schema_version {}",
                metadata.schema_version
            )));
        }
        Ok(Self {
            metadata,
            samples: read_samples_csv(csv)?,
        })
    }
}

pub fn write_samples_csv<W: Write>(samples: &[LogSample], writer: W) -> Result<(), SimError> {
    let mut out = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(writer);
    out.write_record(LOG_CSV_COLUMNS)?;
    for s in samples {
        let mut row = vec![
            s.t.to_string(),
            s.pose.x.to_string(),
            s.pose.y.to_string(),
            s.pose.z.to_string(),
            s.pose.heading.to_string(),
        ];
        row.extend(s.joints.iter().map(f64::to_string));
        out.write_record(&row)?;
    }
    out.flush()?;
    Ok(())
}

/// Reads the samples of a trajectory CSV. Time must increase strictly.
pub fn read_samples_csv<R: Read>(reader: R) -> Result<Vec<LogSample>, SimError> {
    let mut input = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = input
        .headers()?
        .iter()
        .map(|h| h.trim().to_string())
        .collect();
    if header != LOG_CSV_COLUMNS {
        return Err(SimError::Invalid(format!(
            "unexpected trajectory header {:?}",
            header.join(",")
        )));
    }
    let mut samples: Vec<LogSample> = Vec::new();
    for (line, record) in input.records().enumerate() {
        let record = record?;
        let mut values = [0.0; 17];
        for (i, v) in values.iter_mut().enumerate() {
            let field = record.get(i).ok_or_else(|| {
                SimError::Invalid(format!("row {}: expected 17 columns", line + 1))
            })?;
            *v = field.trim().parse().map_err(|_| {
                SimError::Invalid(format!("row {}: bad number {field:?}", line + 1))
            })?;
        }
        let sample = LogSample {
            t: values[0],
            pose: BasePose {
                x: values[1],
                y: values[2],
                z: values[3],
                heading: values[4],
            },
            joints: std::array::from_fn(|j| values[5 + j]),
        };
        if let Some(prev) = samples.last() {
            if !(sample.t > prev.t) {
                return Err(SimError::Invalid(format!(
                    "row {}: time {} does not increase",
                    line + 1,
                    sample.t
                )));
            }
        }
        samples.push(sample);
    }
    Ok(samples)
}
