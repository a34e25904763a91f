//! `morphogait`: generate gaits, run walking experiments, score logs and
//! stream joint commands.
//!
//! Exit codes: 0 success, 2 configuration or validation error, 3 I/O or
//! transport error.

mod config;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::net::TcpListener;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use morphogait::gait::generate;
use morphogait::metrics::{
    error_report, render_table, report_json, MetricsError, ReferenceSpec, Unit,
};
use morphogait::sim::{
    run_corner_course, run_line_experiment, simulate_walk, SimError, TrajectoryLog,
};
use morphogait::stream::{
    serve, stream_plan, FrameSink, LoopbackServo, LoopbackSink, StreamError, TcpSink,
};
use morphogait::GaitError;
use thiserror::Error;

use config::{Experiment, RunConfig};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    fn io(context: impl std::fmt::Display, e: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{context}: {e}"))
    }
}

impl From<GaitError> for CliError {
    fn from(e: GaitError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<SimError> for CliError {
    fn from(e: SimError) -> Self {
        match e {
            SimError::Io(_) => CliError::Io(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<StreamError> for CliError {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Invalid(_) => CliError::Config(e.to_string()),
            _ => CliError::Io(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "morphogait",
    version,
    about = "Gait generation and kinematic walking simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write one cycle of joint angles for every limb as CSV.
    Gait {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the configured experiment and write trajectory logs (CSV plus a
    /// JSON sidecar per trial).
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the perturbation seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides the trial count of a line experiment.
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Score trajectory logs against a reference path.
    Metrics {
        /// `line:LENGTH` or waypoints `x,y;x,y;...`
        #[arg(long, allow_hyphen_values = true)]
        reference: String,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value = "cm")]
        unit: String,
        /// Log CSV files; each needs its `.json` sidecar next to it.
        #[arg(required = true)]
        logs: Vec<PathBuf>,
    },
    /// Serve the loopback servo simulator, or drive a plan to a servo endpoint.
    Stream {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, value_enum)]
        role: Role,
        /// HOST:PORT. Without it, `drive` streams to an in-process loopback.
        #[arg(long)]
        address: Option<String>,
        #[arg(long)]
        period: Option<f64>,
        #[arg(long)]
        duration: Option<f64>,
        /// Servo time constant for `serve`, seconds.
        #[arg(long)]
        tau: Option<f64>,
        /// `serve` exits after one connection.
        #[arg(long)]
        once: bool,
        /// Write the stream summary JSON here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Role {
    Serve,
    Drive,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("MORPHOGAIT_LOG", "warn"))
        .init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Gait { config, out } => cmd_gait(&config, out),
        Command::Simulate {
            config,
            out,
            seed,
            trials,
        } => cmd_simulate(&config, out, seed, trials),
        Command::Metrics {
            reference,
            out,
            unit,
            logs,
        } => cmd_metrics(&logs, &reference, out, &unit),
        Command::Stream {
            config,
            role,
            address,
            period,
            duration,
            tau,
            once,
            out,
        } => {
            let mut settings = match &config {
                Some(path) => RunConfig::load(path)?.stream,
                None => config::StreamSettings::default(),
            };
            settings.period = period.unwrap_or(settings.period);
            settings.duration = duration.unwrap_or(settings.duration);
            settings.tau = tau.unwrap_or(settings.tau);
            settings.validate()?;
            match role {
                Role::Serve => {
                    let address =
                        address.ok_or_else(|| CliError::Config("serve needs --address".into()))?;
                    cmd_serve(&address, settings.tau, once)
                }
                Role::Drive => {
                    let config =
                        config.ok_or_else(|| CliError::Config("drive needs --config".into()))?;
                    cmd_drive(&config, settings, address.as_deref(), out)
                }
            }
        }
    }
}

/// Writes through a temporary file in the destination directory and renames
/// it into place, so readers never see a partial file.
fn write_atomic<F>(path: &Path, fill: F) -> Result<(), CliError>
where
    F: FnOnce(&mut BufWriter<&mut File>) -> Result<(), CliError>,
{
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir.display(), e))?;
    let mut tmp =
        tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(path.display(), e))?;
    {
        let mut w = BufWriter::new(tmp.as_file_mut());
        fill(&mut w)?;
        w.flush().map_err(|e| CliError::io(path.display(), e))?;
    }
    tmp.persist(path)
        .map_err(|e| CliError::io(path.display(), e.error))?;
    Ok(())
}

fn output_path(
    flag: Option<PathBuf>,
    configured: &Option<PathBuf>,
    what: &str,
) -> Result<PathBuf, CliError> {
    flag.or_else(|| configured.clone())
        .ok_or_else(|| CliError::Config(format!("no output path: pass --out or set output.{what}")))
}

fn cmd_gait(config: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    let config = RunConfig::load(config)?;
    let out = output_path(out, &config.output.plan, "plan")?;
    let plan = generate(&config.gait, &config.geometry)?;
    write_atomic(&out, |w| {
        plan.write_csv(w)
            .map_err(|e| CliError::io(out.display(), e))
    })?;
    log::info!(
        "{} plan: {} samples per limb, closure error {:.3e} rad",
        config.gait.gait,
        config.gait.samples_per_step + 1,
        plan.closure_error()
    );
    println!("wrote {}", out.display());
    Ok(())
}

/// `run.csv` for one trial, `run_t1.csv`, `run_t2.csv`, ... for several.
fn log_paths(out: &Path, trial: usize, trials: usize) -> (PathBuf, PathBuf) {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let name = if trials > 1 {
        format!("{stem}_t{}", trial + 1)
    } else {
        stem
    };
    let base = out.with_file_name(name);
    (base.with_extension("csv"), base.with_extension("json"))
}

fn cmd_simulate(
    config: &Path,
    out: Option<PathBuf>,
    seed: Option<u64>,
    trials: Option<usize>,
) -> Result<(), CliError> {
    let config = RunConfig::load(config)?;
    let out = output_path(out, &config.output.log, "log")?;
    let mut perturb = config.perturbation;
    if let Some(seed) = seed {
        perturb.seed = seed;
    }
    let logs = match config.experiment {
        Experiment::Line {
            distance,
            trials: n,
        } => {
            let n = trials.unwrap_or(n);
            if n == 0 {
                return Err(CliError::Config("--trials must be at least 1".into()));
            }
            run_line_experiment(&config.gait, &config.geometry, &perturb, distance, n)?
        }
        _ if trials.is_some_and(|n| n != 1) => {
            return Err(CliError::Config(
                "--trials applies to line experiments only".into(),
            ))
        }
        Experiment::Corner { turn } => vec![run_corner_course(
            &config.gait,
            &config.geometry,
            &perturb,
            turn,
        )?],
        Experiment::Walk { steps } => {
            let plan = generate(&config.gait, &config.geometry)?;
            vec![simulate_walk(&plan, steps, &perturb)?]
        }
    };
    for (k, log) in logs.iter().enumerate() {
        let (csv, meta) = log_paths(&out, k, logs.len());
        write_atomic(&csv, |w| Ok(log.write_csv(w)?))?;
        write_atomic(&meta, |w| Ok(log.write_metadata(w)?))?;
        let end = log.last_pose();
        println!(
            "{}: {} samples, end x = {:.6} m, y = {:.6} m, heading = {:.6} rad",
            csv.display(),
            log.len(),
            end.x,
            end.y,
            end.heading
        );
    }
    Ok(())
}

fn read_log(csv: &Path) -> Result<TrajectoryLog, CliError> {
    let meta = csv.with_extension("json");
    let open = |p: &Path| {
        File::open(p).map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))
    };
    TrajectoryLog::read(
        io::BufReader::new(open(csv)?),
        io::BufReader::new(open(&meta)?),
    )
    .map_err(|e| CliError::Config(format!("{}: {e}", csv.display())))
}

fn cmd_metrics(
    logs: &[PathBuf],
    reference: &str,
    out: Option<PathBuf>,
    unit: &str,
) -> Result<(), CliError> {
    let unit: Unit = unit.parse().map_err(CliError::Config)?;
    let spec: ReferenceSpec = reference.parse()?;
    let logs = logs
        .iter()
        .map(|p| read_log(p))
        .collect::<Result<Vec<_>, _>>()?;
    let path = spec.resolve(&logs)?;
    let report = error_report(&logs, &path)?;
    print!("{}", render_table(&report, unit));
    if let Some(out) = out {
        let json = report_json(&report);
        write_atomic(&out, |w| {
            w.write_all(json.as_bytes())
                .map_err(|e| CliError::io(out.display(), e))
        })?;
    }
    Ok(())
}

fn cmd_serve(address: &str, tau: f64, once: bool) -> Result<(), CliError> {
    let listener = TcpListener::bind(address).map_err(|e| CliError::io(address, e))?;
    let local = listener
        .local_addr()
        .map_err(|e| CliError::io(address, e))?;
    println!("listening on {local}");
    io::stdout()
        .flush()
        .map_err(|e| CliError::io("stdout", e))?;
    let answered = serve(&listener, tau, once.then_some(1))?;
    println!("answered {answered} commands");
    Ok(())
}

fn cmd_drive(
    config: &Path,
    settings: config::StreamSettings,
    address: Option<&str>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let config = RunConfig::load(config)?;
    let plan = generate(&config.gait, &config.geometry)?;
    let timeout = Duration::from_millis(settings.timeout_ms);
    let options = settings.options();
    let summary = match address {
        Some(address) => drive(&plan, &options, TcpSink::connect(address, timeout)?),
        None => drive(
            &plan,
            &options,
            LoopbackSink::new(LoopbackServo::new(settings.tau), timeout),
        ),
    }?;
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    println!("{json}");
    if let Some(out) = out.or(config.output.summary) {
        write_atomic(&out, |w| {
            writeln!(w, "{json}").map_err(|e| CliError::io(out.display(), e))
        })?;
    }
    Ok(())
}

fn drive<S: FrameSink>(
    plan: &morphogait::FootPlan,
    options: &morphogait::stream::StreamOptions,
    mut sink: S,
) -> Result<morphogait::stream::StreamSummary, CliError> {
    Ok(stream_plan(plan, options, &mut sink)?)
}
