//! Command-line front end: argument parsing, configuration and the
//! subcommand implementations behind the `bisa-mech` binary.

pub mod config;
pub mod error;
pub mod fit;
pub mod formats;
pub mod report;
pub mod stiffness;
pub mod sweep;
pub mod synth;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use config::RunConfig;
pub use error::CliError;

/// JSON Schema of the `report` output.
pub const REPORT_SCHEMA: &str = include_str!("../schema/report.schema.json");

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "BISA_MECH_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "bisa-mech",
    version,
    about = "Stiffness mechanics of a bidirectional-stiffening soft actuator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write influence-function and evaluation-function grids as CSV.
    Sweep(SweepArgs),
    /// Evaluate lateral or bending stiffness and print JSON.
    Stiffness(StiffnessArgs),
    /// Fit measured data files and print the result as JSON.
    Fit(FitArgs),
    /// Combine fit outputs, sweeps and gripper estimates into one JSON report.
    Report(ReportArgs),
    /// Generate a synthetic data set from the configured models.
    Synth(SynthArgs),
}

#[derive(Debug, clap::Args)]
pub struct SweepArgs {
    /// JSON run configuration (defaults to the built-in example profile).
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated aspect ratios, e.g. 0.25,0.5,1,2.
    #[arg(long, value_delimiter = ',')]
    pub lambda_list: Option<Vec<f64>>,
    /// Bending angles as start:end:step in degrees, inclusive.
    #[arg(long)]
    pub alpha_range: Option<String>,
    /// Poisson's ratio (overrides the configuration).
    #[arg(long)]
    pub nu: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StiffnessMode {
    Lateral,
    Bending,
}

#[derive(Debug, clap::Args)]
pub struct StiffnessArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Bending angle in degrees, (0, 180].
    #[arg(long, default_value_t = 90.0, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long, value_enum, default_value_t = StiffnessMode::Lateral)]
    pub mode: StiffnessMode,
    /// Chamber pressure in kPa (overrides the configured load case).
    #[arg(long, allow_negative_numbers = true)]
    pub pressure_kpa: Option<f64>,
    /// Tip force in N for the working-condition check (overrides the config).
    #[arg(long, allow_negative_numbers = true)]
    pub external_force_n: Option<f64>,
    /// External bending moment in N·mm to classify (bending mode).
    #[arg(long, allow_negative_numbers = true)]
    pub external_moment_n_mm: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FitKind {
    /// Force-displacement records (`displacement_mm,force_N` + sidecar JSON).
    Slope,
    /// Lateral stiffness points (`angle_deg,stiffness_N_per_mm`).
    Bls,
    /// Withstand moments (`pressure_kPa,withstand_N_mm`).
    Chambers,
    /// Bending angle against pressure (`pressure_kPa,angle_deg,branch`).
    AnglePressure,
}

#[derive(Debug, clap::Args)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub kind: FitKind,
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Polynomial degree for angle-pressure fits.
    #[arg(long, default_value_t = 2)]
    pub degree: usize,
    /// Directory to also write the fit JSON (and stiffness table CSV) into.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Input CSV files.
    #[arg(required = true)]
    pub files: Vec<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct ReportArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Directory holding the `fit` outputs.
    #[arg(long)]
    pub data_dir: PathBuf,
    /// Also write the report to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
}

/// Runs a parsed command, writing its primary output to `stdout`.
pub fn run(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let text = with_thread_pool(|| {
        let mut buf = Vec::new();
        match cli.command {
            Command::Sweep(a) => sweep::run(&a, &mut buf),
            Command::Stiffness(a) => stiffness::run(&a, &mut buf),
            Command::Fit(a) => fit::run(&a, &mut buf),
            Command::Report(a) => report::run(&a, &mut buf),
            Command::Synth(a) => synth::run(&a, &mut buf),
        }?;
        Ok(buf)
    })?;
    stdout
        .write_all(&text)
        .and_then(|()| stdout.flush())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

fn with_thread_pool<T: Send>(
    f: impl FnOnce() -> Result<T, CliError> + Send,
) -> Result<T, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(raw) = std::env::var(THREADS_ENV) {
        let n: usize = raw.trim().parse().ok().filter(|&n| n > 0).ok_or_else(|| {
            CliError::Usage(format!("{THREADS_ENV}='{raw}' is not a positive integer"))
        })?;
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Io(format!("thread pool: {e}")))?;
    pool.install(f)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn create_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

pub(crate) fn print_json<T: serde::Serialize>(
    stdout: &mut dyn Write,
    value: &T,
) -> Result<String, CliError> {
    let text = to_json(value);
    stdout
        .write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))?;
    Ok(text)
}

pub(crate) fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}
