//! Crosstrack error of base traces against reference polylines.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::sim::TrajectoryLog;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("reference path needs at least 2 waypoints, got {0}")]
    TooFewWaypoints(usize),
    #[error("reference waypoints {0} and {1} coincide")]
    RepeatedWaypoint(usize, usize),
    #[error("reference waypoint {0} is not finite")]
    NonFinite(usize),
    #[error("trajectory log {0} has no samples")]
    EmptyLog(usize),
    #[error("no trajectory logs given")]
    NoLogs,
    #[error("bad reference spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
}

/// Polyline through ordered waypoints, meters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePath {
    waypoints: Vec<[f64; 2]>,
}

impl ReferencePath {
    pub fn new(waypoints: Vec<[f64; 2]>) -> Result<Self, MetricsError> {
        if waypoints.len() < 2 {
            return Err(MetricsError::TooFewWaypoints(waypoints.len()));
        }
        for (i, w) in waypoints.iter().enumerate() {
            if !(w[0].is_finite() && w[1].is_finite()) {
                return Err(MetricsError::NonFinite(i));
            }
        }
        for (i, pair) in waypoints.windows(2).enumerate() {
            if pair[0] == pair[1] {
                return Err(MetricsError::RepeatedWaypoint(i, i + 1));
            }
        }
        Ok(Self { waypoints })
    }

    /// Straight segment from the origin along `+x`.
    pub fn line(length: f64) -> Result<Self, MetricsError> {
        Self::new(vec![[0.0, 0.0], [length, 0.0]])
    }

    pub fn waypoints(&self) -> &[[f64; 2]] {
        &self.waypoints
    }

    /// Unsigned distance from `p` to the nearest point of the polyline.
    pub fn distance(&self, p: [f64; 2]) -> f64 {
        self.waypoints
            .windows(2)
            .map(|s| segment_distance(p, s[0], s[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn segment_distance(p: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let (dx, dy) = (b[0] - a[0], b[1] - a[1]);
    let t = (((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
    let (cx, cy) = (a[0] + t * dx, a[1] + t * dy);
    (p[0] - cx).hypot(p[1] - cy)
}

/// Reference given on the command line: `line:LENGTH` or a waypoint list
/// `x,y;x,y;...`.
#[derive(Debug, Clone, PartialEq)]
pub enum ReferenceSpec {
    Line(f64),
    Waypoints(ReferencePath),
}

impl FromStr for ReferenceSpec {
    type Err = MetricsError;

    fn from_str(spec: &str) -> Result<Self, Self::Err> {
        let bad = |reason: &str| MetricsError::BadSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let spec_trim = spec.trim();
        if let Some(length) = spec_trim.strip_prefix("line:") {
            let length: f64 = length
                .trim()
                .parse()
                .map_err(|_| bad("length is not a number"))?;
            if !(length > 0.0 && length.is_finite()) {
                return Err(bad("length must be positive"));
            }
            return Ok(ReferenceSpec::Line(length));
        }
        let mut waypoints = Vec::new();
        for point in spec_trim.split(';').filter(|p| !p.trim().is_empty()) {
            let coords: Vec<&str> = point.split(',').collect();
            if coords.len() != 2 {
                return Err(bad("waypoints are written x,y and separated by ';'"));
            }
            let parse = |s: &str| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| bad("coordinate is not a number"))
            };
            waypoints.push([parse(coords[0])?, parse(coords[1])?]);
        }
        ReferencePath::new(waypoints).map(ReferenceSpec::Waypoints)
    }
}

impl ReferenceSpec {
    /// The polyline to score `logs` against. A line reference runs along `+x`
    /// from the origin and is stretched to cover every sample's `x`, so that
    /// overshooting the target distance is not counted as crosstrack error.
    pub fn resolve(&self, logs: &[TrajectoryLog]) -> Result<ReferencePath, MetricsError> {
        match self {
            ReferenceSpec::Waypoints(path) => Ok(path.clone()),
            ReferenceSpec::Line(length) => {
                let xs = logs.iter().flat_map(|l| l.samples.iter().map(|s| s.pose.x));
                let (lo, hi) = xs.fold((0.0f64, *length), |(lo, hi), x| (lo.min(x), hi.max(x)));
                ReferencePath::new(vec![[lo, 0.0], [hi, 0.0]])
            }
        }
    }
}

/// Per-sample crosstrack error of a base trace.
pub fn crosstrack_errors_xy(points: &[[f64; 2]], reference: &ReferencePath) -> Vec<f64> {
    points.iter().map(|&p| reference.distance(p)).collect()
}

pub fn crosstrack_errors(
    log: &TrajectoryLog,
    reference: &ReferencePath,
) -> Result<Vec<f64>, MetricsError> {
    if log.is_empty() {
        return Err(MetricsError::EmptyLog(0));
    }
    Ok(crosstrack_errors_xy(&log.positions(), reference))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialError {
    pub rmse_m: f64,
    pub max_m: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OverallError {
    /// Root mean square over all samples of all trials.
    pub rmse_m: f64,
    pub max_m: f64,
    /// Plain mean of the per-trial RMSE values, for comparison.
    pub mean_trial_rmse_m: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub trials: Vec<TrialError>,
    pub overall: OverallError,
}

/// Root mean square computed on values scaled by their maximum, so that a
/// constant sequence returns its value exactly.
fn scaled_rms(values: impl Iterator<Item = f64>, count: usize, max: f64) -> f64 {
    if max == 0.0 {
        return 0.0;
    }
    let sum: f64 = values.map(|v| (v / max) * (v / max)).sum();
    max * (sum / count as f64).sqrt()
}

/// Builds the report from per-trial error sequences.
pub fn report_from_errors(trials: &[Vec<f64>]) -> Result<ErrorReport, MetricsError> {
    if trials.is_empty() {
        return Err(MetricsError::NoLogs);
    }
    let mut rows = Vec::with_capacity(trials.len());
    let (mut count, mut max) = (0usize, 0.0f64);
    for (i, errors) in trials.iter().enumerate() {
        if errors.is_empty() {
            return Err(MetricsError::EmptyLog(i));
        }
        let trial_max = errors.iter().copied().fold(0.0, f64::max);
        rows.push(TrialError {
            rmse_m: scaled_rms(errors.iter().copied(), errors.len(), trial_max),
            max_m: trial_max,
            samples: errors.len(),
        });
        count += errors.len();
        max = max.max(trial_max);
    }
    let mean_trial_rmse_m = rows.iter().map(|r| r.rmse_m).sum::<f64>() / rows.len() as f64;
    Ok(ErrorReport {
        trials: rows,
        overall: OverallError {
            rmse_m: scaled_rms(trials.iter().flatten().copied(), count, max),
            max_m: max,
            mean_trial_rmse_m,
        },
    })
}

pub fn error_report(
    logs: &[TrajectoryLog],
    reference: &ReferencePath,
) -> Result<ErrorReport, MetricsError> {
    let errors = logs
        .iter()
        .enumerate()
        .map(|(i, log)| crosstrack_errors(log, reference).map_err(|_| MetricsError::EmptyLog(i)))
        .collect::<Result<Vec<_>, _>>()?;
    report_from_errors(&errors)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Unit {
    Cm,
    M,
}

impl FromStr for Unit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cm" => Ok(Unit::Cm),
            "m" => Ok(Unit::M),
            other => Err(format!("unknown unit {other:?}, expected cm or m")),
        }
    }
}

/// Path-following error table: one row per trial plus the overall row.
/// Centimeters are rounded to one decimal, meters printed with four.
pub fn render_table(report: &ErrorReport, unit: Unit) -> String {
    let (label, value): (&str, fn(f64) -> String) = match unit {
        Unit::Cm => ("cm", |v| format!("{:.1}", v * 100.0)),
        Unit::M => ("m", |v| format!("{v:.4}")),
    };
    let mut rows = vec![[
        "Trial".to_string(),
        format!("RMSE, {label}"),
        format!("Max Error, {label}"),
    ]];
    for (k, t) in report.trials.iter().enumerate() {
        rows.push([format!("{}", k + 1), value(t.rmse_m), value(t.max_m)]);
    }
    rows.push([
        "Overall".to_string(),
        value(report.overall.rmse_m),
        value(report.overall.max_m),
    ]);
    let widths: [usize; 3] =
        std::array::from_fn(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0));
    let mut out = String::new();
    for row in &rows {
        let _ = writeln!(
            out,
            "{:<w0$} | {:>w1$} | {:>w2$}",
            row[0],
            row[1],
            row[2],
            w0 = widths[0],
            w1 = widths[1],
            w2 = widths[2]
        );
    }
    out
}

/// JSON form of the report: `{trials:[{rmse_m,max_m,..}],overall:{rmse_m,max_m,..}}`.
pub fn report_json(report: &ErrorReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
