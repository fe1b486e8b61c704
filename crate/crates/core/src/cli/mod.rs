//! Batch commands behind the `memfuzz` binary.
//!
//! Every command is a library function (`cmd_*`) so it can be driven from
//! tests and examples. [`run`] parses arguments, dispatches, prints the report
//! and returns the process exit code: 0 on success, 2 for bad input or usage,
//! 3 for numeric failures (programming that does not converge, a failed
//! device check).

mod commands;
mod config;

use std::ffi::OsString;
use std::io;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use crate::fuzzy::NetworkError;
use crate::imaging::ImagingError;
use crate::rulebase::CompileError;

pub use commands::{
    cmd_baseline, cmd_compile, cmd_device_check, cmd_edges, cmd_surface, device_check, write_atomic, CompileReport,
    DeviceCheckReport, DumpMap, EdgesReport, SurfaceReport, DEVICE_CHECK_LIMIT,
};
pub use config::{BackendChoice, RunConfig, CONFIG_KEYS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Rules(String),
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numeric(String),
    #[error("device check failed: max relative deviation {:.4}% exceeds {:.1}%", .0.max_relative_deviation * 100.0, DEVICE_CHECK_LIMIT * 100.0)]
    CheckFailed(DeviceCheckReport),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) | CliError::Io { .. } | CliError::Rules(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) | CliError::CheckFailed(_) => EXIT_NUMERIC,
        }
    }

    pub(crate) fn network(context: &str, e: NetworkError) -> Self {
        match e {
            NetworkError::Device(_) => CliError::Numeric(format!("{context}: {e}")),
            _ => CliError::Input(format!("{context}: {e}")),
        }
    }

    pub(crate) fn imaging(context: &str, e: ImagingError) -> Self {
        match e {
            ImagingError::Network(e) => Self::network(context, e),
            _ => CliError::Input(format!("{context}: {e}")),
        }
    }

    pub(crate) fn compile(e: CompileError) -> Self {
        match e {
            CompileError::Network(e) => Self::network("compile", e),
            other => CliError::Rules(other.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "memfuzz", version, about = "Memristor-crossbar fuzzy inference and edge detection")]
pub struct Cli {
    /// `key = value` settings file; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compile a rule-base file into network JSON.
    Compile(CompileArgs),
    /// Fuzzy XOR edge detection on a PGM image.
    Edges(EdgesArgs),
    /// Export the XOR inference surface as CSV.
    Surface(SurfaceArgs),
    /// Smoothing + Sobel gradient magnitude baseline.
    Baseline(BaselineArgs),
    /// Program a network onto simulated crossbars and compare against ideal inference.
    DeviceCheck(DeviceCheckArgs),
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[arg(long)]
    pub rules: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Grid points per input universe.
    #[arg(long)]
    pub grid: Option<usize>,
    #[arg(long)]
    pub exponent: Option<f64>,
}

#[derive(Debug, Args)]
pub struct EdgesArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub network: PathBuf,
    /// Normalized merged edge map (PGM).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub noise_mean: Option<f64>,
    #[arg(long)]
    pub noise_var: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub backend: Option<BackendChoice>,
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// Also write these maps as `<out stem>.<map>.pgm`.
    #[arg(long, value_enum, value_delimiter = ',')]
    pub dump: Vec<DumpMap>,
    /// Write the raw merged map as CSV.
    #[arg(long, value_name = "FILE")]
    pub csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SurfaceArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub resolution: Option<usize>,
}

#[derive(Debug, Args)]
pub struct BaselineArgs {
    #[arg(long)]
    pub image: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub sigma: Option<f64>,
}

#[derive(Debug, Args)]
pub struct DeviceCheckArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Programming tolerance as a fraction of w_max.
    #[arg(long)]
    pub tolerance: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn set<T: Copy>(slot: &mut T, flag: Option<T>) {
    if let Some(v) = flag {
        *slot = v;
    }
}

impl Cli {
    /// Defaults, then the config file, then flags.
    pub fn resolve_config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            cfg.apply_file_text(&text)?;
        }
        match &self.command {
            Command::Compile(a) => {
                set(&mut cfg.grid, a.grid);
                set(&mut cfg.exponent, a.exponent);
            }
            Command::Edges(a) => {
                set(&mut cfg.sigma, a.sigma);
                set(&mut cfg.noise_mean, a.noise_mean);
                set(&mut cfg.noise_variance, a.noise_var);
                set(&mut cfg.seed, a.seed);
                set(&mut cfg.backend, a.backend);
                set(&mut cfg.tolerance, a.tolerance);
            }
            Command::Surface(a) => set(&mut cfg.resolution, a.resolution),
            Command::Baseline(a) => set(&mut cfg.sigma, a.sigma),
            Command::DeviceCheck(a) => {
                set(&mut cfg.tolerance, a.tolerance);
                set(&mut cfg.samples, a.samples);
                set(&mut cfg.seed, a.seed);
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    /// Runs the parsed command and returns its printable report.
    pub fn execute(&self) -> Result<String, CliError> {
        let cfg = self.resolve_config()?;
        Ok(match &self.command {
            Command::Compile(a) => cmd_compile(&a.rules, &a.out, &cfg)?.to_string(),
            Command::Edges(a) => cmd_edges(&a.image, &a.network, &a.out, &cfg, &a.dump, a.csv.as_deref())?.to_string(),
            Command::Surface(a) => cmd_surface(&a.network, &a.out, &cfg)?.to_string(),
            Command::Baseline(a) => cmd_baseline(&a.image, &a.out, &cfg)?,
            Command::DeviceCheck(a) => cmd_device_check(&a.network, &cfg)?.to_string(),
        })
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the exit code. Reports go to stdout, errors to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match cli.execute() {
        Ok(report) => {
            println!("{report}");
            EXIT_OK
        }
        Err(e) => {
            if let CliError::CheckFailed(report) = &e {
                println!("{report}");
            }
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests;
