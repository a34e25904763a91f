use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{GaitConfig, GaitError};
use crate::kinematics::{JointAngles, LimbGeometry};

/// One joint sample of one limb.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlanSample {
    pub phase: f64,
    pub joints: JointAngles,
    /// Whether the foot bears load at this sample.
    pub stance: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimbPlan {
    /// Phase at which this limb's stance interval begins, in `[0, 1)`.
    pub phase_offset: f64,
    pub samples: Vec<PlanSample>,
}

/// One closed gait cycle for all four limbs, sampled on a shared phase grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FootPlan {
    pub config: GaitConfig,
    pub geometry: [LimbGeometry; 4],
    /// Standing base height over the ground, meters.
    pub height: f64,
    pub limbs: [LimbPlan; 4],
}

pub const CSV_HEADER: &str = "limb_id,phase,theta0_rad,theta1_rad,theta2_rad";

impl FootPlan {
    /// Number of phase intervals per cycle; each limb holds one more sample.
    pub fn intervals(&self) -> usize {
        self.config.samples_per_step
    }

    pub fn frame(&self, index: usize) -> [PlanSample; 4] {
        std::array::from_fn(|k| self.limbs[k].samples[index])
    }

    pub fn joints_at(&self, index: usize) -> [JointAngles; 4] {
        std::array::from_fn(|k| self.limbs[k].samples[index].joints)
    }

    /// Joint targets at an arbitrary phase, linearly interpolated between
    /// neighbouring samples. The phase wraps modulo one.
    pub fn interpolate(&self, phase: f64) -> [JointAngles; 4] {
        let n = self.intervals();
        let scaled = phase.rem_euclid(1.0) * n as f64;
        let i = (scaled.floor() as usize).min(n - 1);
        let frac = scaled - i as f64;
        std::array::from_fn(|k| {
            let a = self.limbs[k].samples[i].joints;
            let b = self.limbs[k].samples[i + 1].joints;
            JointAngles::new(
                a.hip_yaw + (b.hip_yaw - a.hip_yaw) * frac,
                a.hip_pitch + (b.hip_pitch - a.hip_pitch) * frac,
                a.knee + (b.knee - a.knee) * frac,
            )
        })
    }

    /// Largest joint-space gap between the first and last sample of any limb.
    pub fn closure_error(&self) -> f64 {
        self.limbs
            .iter()
            .map(|l| {
                let first = l.samples.first().expect("plan has samples").joints;
                let last = l.samples.last().expect("plan has samples").joints;
                first.max_abs_diff(&last)
            })
            .fold(0.0, f64::max)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<(), csv::Error> {
        let mut out = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(writer);
        out.write_record(CSV_HEADER.split(','))?;
        for (limb, plan) in self.limbs.iter().enumerate() {
            for s in &plan.samples {
                out.write_record(&[
                    limb.to_string(),
                    s.phase.to_string(),
                    s.joints.hip_yaw.to_string(),
                    s.joints.hip_pitch.to_string(),
                    s.joints.knee.to_string(),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Row of a foot-plan CSV file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlanRow {
    pub limb: usize,
    pub phase: f64,
    pub joints: JointAngles,
}

/// Reads the rows of a foot-plan CSV, checking the header.
pub fn read_plan_csv<R: Read>(reader: R) -> Result<Vec<PlanRow>, csv::Error> {
    let mut input = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let header: Vec<String> = input.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(csv::Error::from(std::io::Error::new(
            std::io::ErrorKind::InvalidData,
            format!("unexpected foot-plan header {:?}", header.join(",")),
        )));
    }
    let parse = |s: &str| -> Result<f64, csv::Error> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, e)))
    };
    let mut rows = Vec::new();
    for record in input.records() {
        let record = record?;
        let limb = record[0].trim().parse::<usize>().map_err(|e| {
            csv::Error::from(std::io::Error::new(std::io::ErrorKind::InvalidData, e))
        })?;
        rows.push(PlanRow {
            limb,
            phase: parse(&record[1])?,
            joints: JointAngles::new(parse(&record[2])?, parse(&record[3])?, parse(&record[4])?),
        });
    }
    Ok(rows)
}

/// Builds a [`FootPlan`] from per-sample closures, checking mechanical
/// ranges on every sample.
pub(crate) fn build_plan<F>(
    config: &GaitConfig,
    geometry: &[LimbGeometry; 4],
    height: f64,
    offsets: [f64; 4],
    mut sample: F,
) -> Result<FootPlan, GaitError>
where
    F: FnMut(usize, f64) -> Result<(JointAngles, bool), GaitError>,
{
    let n = config.samples_per_step;
    let mut limbs: Vec<LimbPlan> = Vec::with_capacity(4);
    for (k, offset) in offsets.iter().enumerate() {
        let mut samples = Vec::with_capacity(n + 1);
        for i in 0..=n {
            let phase = config.sample_phase(i);
            let (joints, stance) = sample(k, phase)?;
            super::check_sample(&geometry[k], k, phase, &joints)?;
            samples.push(PlanSample {
                phase,
                joints,
                stance,
            });
        }
        limbs.push(LimbPlan {
            phase_offset: *offset,
            samples,
        });
    }
    let limbs: [LimbPlan; 4] = limbs.try_into().expect("four limbs");
    Ok(FootPlan {
        config: *config,
        geometry: *geometry,
        height,
        limbs,
    })
}
