//! `qkrt` command-line front end.
//!
//! Every command produces one artifact (CSV or JSON) and a one-line summary.
//! With `--out` the artifact goes to that file and the summary to stdout;
//! otherwise the artifact goes to stdout and the summary to stderr.

pub mod commands;
pub mod config;
pub mod error;
pub mod records;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use qkrt_core::EntanglementStrategy;

pub use error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "qkrt", version, about = "Predict quantum-kernel job runtimes from CLOPS")]
pub struct Cli {
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Backend registry JSON (defaults to the built-in registry).
    #[arg(long, global = true)]
    pub registry: Option<PathBuf>,

    /// JSON run configuration; explicit flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Predicted runtime of one job.
    Predict(PredictArgs),
    /// Ratio and loss of predicted vs measured runtimes.
    Score(ScoreArgs),
    /// Effective QV layers of a kernel family on a device.
    Deff(DeffArgs),
    /// Emit random kernel or QV circuits.
    GenCircuits(GenArgs),
    /// Kernel matrix from statevector simulation.
    SimulateKernel(SimulateArgs),
    /// Runtime of the full kernel-matrix job as the dataset grows.
    Extrapolate(ExtrapolateArgs),
    /// Predicted vs simulated runtimes over a job grid.
    Sweep(SweepArgs),
    /// Fit execution-stack timing parameters to measured runtimes.
    Fit(FitArgs),
    /// Inspect the backend registry.
    Backends {
        #[command(subcommand)]
        action: BackendsAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum BackendsAction {
    /// One CSV row per backend.
    List,
    /// The registry as JSON.
    Export,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EntanglementArg {
    Linear,
    Full,
}

impl From<EntanglementArg> for EntanglementStrategy {
    fn from(e: EntanglementArg) -> Self {
        match e {
            EntanglementArg::Linear => EntanglementStrategy::Linear,
            EntanglementArg::Full => EntanglementStrategy::Full,
        }
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct FamilyArgs {
    /// Qubits (= features) of the kernel family.
    #[arg(long)]
    pub n: Option<usize>,
    /// Feature-map repetitions D.
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, value_enum)]
    pub entanglement: Option<EntanglementArg>,
    /// Family descriptor JSON, inline or as a file path:
    /// `{"n":4,"d":2,"entanglement":"linear"}`. Individual flags override it.
    #[arg(long = "family")]
    pub descriptor: Option<String>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct SampleArgs {
    /// Kernel circuits averaged for d_eff.
    #[arg(long)]
    pub kernel_samples: Option<usize>,
    /// QV reference circuits averaged for d_eff.
    #[arg(long)]
    pub qv_samples: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub backend: Option<String>,
    /// Override (or, without --backend, supply) the CLOPS rating.
    #[arg(long)]
    pub clops: Option<f64>,
    #[arg(long = "M")]
    pub m: Option<u64>,
    #[arg(long = "S")]
    pub s: Option<u64>,
    #[arg(long = "K", default_value_t = 1)]
    pub k: u64,
    /// Effective layers. Without it, d_eff is estimated from --n/--reps, or
    /// taken as the backend's QV layer count.
    #[arg(long)]
    pub deff: Option<f64>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub samples: SampleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ScoreArgs {
    /// CSV with `T_pred,T_seconds` columns, or runtime records
    /// (`backend,M,S,K,deff,T_seconds`) to predict from.
    #[arg(long)]
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct DeffArgs {
    #[arg(long)]
    pub backend: Option<String>,
    /// `line:N`, `ring:N`, `all:N`, `heavy-hex:N`, or a coupling-map JSON file.
    #[arg(long)]
    pub map: Option<String>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub samples: SampleArgs,
    /// Treat the circuits as QV circuits with this many layers.
    #[arg(long)]
    pub qv_layers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CircuitKind {
    Kernel,
    Qv,
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = CircuitKind::Kernel)]
    pub kind: CircuitKind,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// QV layers (defaults to the width).
    #[arg(long)]
    pub layers: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Also write each circuit as text into this directory.
    #[arg(long)]
    pub circuits_dir: Option<PathBuf>,
    /// Report transpiled depth on this backend's coupling map.
    #[arg(long)]
    pub backend: Option<String>,
    /// Report transpiled depth on this map (see `deff --map`).
    #[arg(long)]
    pub map: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Random data points, drawn uniformly from [0, 2π)^n.
    #[arg(long)]
    pub points: Option<usize>,
    /// CSV of feature vectors (header `x0,…,x{n-1}`) instead of random points.
    #[arg(long)]
    pub data: Option<PathBuf>,
    /// Shots per entry; exact probabilities when absent.
    #[arg(long)]
    pub shots: Option<u64>,
    /// Largest simulable width.
    #[arg(long, default_value_t = qkrt_core::sim::DEFAULT_QUBIT_CAP)]
    pub qubit_cap: usize,
    /// Also write the matrix summary (min/max/mean entry, PSD check) as JSON.
    #[arg(long)]
    pub summary_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ExtrapolateArgs {
    /// Dataset sizes (comma-separated).
    #[arg(long = "N", value_delimiter = ',')]
    pub n: Vec<u64>,
    /// CLOPS values (comma-separated).
    #[arg(long, value_delimiter = ',')]
    pub clops: Vec<f64>,
    #[arg(long = "S")]
    pub s: Option<u64>,
    #[arg(long)]
    pub deff: Option<f64>,
    /// Derive S from a target generalization error instead of --S.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Constant in the shot-scaling law.
    #[arg(long, default_value_t = 1.0)]
    pub shot_constant: f64,
    /// Take CLOPS from this backend when --clops is absent.
    #[arg(long)]
    pub backend: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub backend: Option<String>,
    /// Stack timing parameters JSON.
    #[arg(long)]
    pub params: Option<PathBuf>,
    #[arg(long = "M", value_delimiter = ',')]
    pub m: Vec<u64>,
    #[arg(long = "S", value_delimiter = ',')]
    pub s: Vec<u64>,
    /// Aspect ratios 2D/n; each needs --n and estimates d_eff on the backend.
    #[arg(long = "a", value_delimiter = ',')]
    pub a: Vec<f64>,
    /// Fixed d_eff when no aspect ratios are given (default: QV layers).
    #[arg(long)]
    pub deff: Option<f64>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub samples: SampleArgs,
}

#[derive(Debug, Clone, Args)]
pub struct FitArgs {
    /// Runtime records CSV.
    #[arg(long)]
    pub input: PathBuf,
    /// Only use records of this backend.
    #[arg(long)]
    pub backend: Option<String>,
    /// Pin the per-job overhead (needed when all records share one M).
    #[arg(long)]
    pub fix_t_job: Option<f64>,
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub artifact: String,
    pub summary: String,
}

/// Write the artifact and summary per the `--out` convention.
pub fn emit(output: &Output, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
            }
            std::fs::write(path, &output.artifact).map_err(|e| CliError::io(path, e))?;
            println!("{}", output.summary);
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(output.artifact.as_bytes())
                .map_err(|e| CliError::io("<stdout>", e))?;
            eprintln!("{}", output.summary);
        }
    }
    Ok(())
}

/// Parse, run and emit; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    let result = commands::Context::from_cli(&cli)
        .and_then(|ctx| commands::run(&ctx, &cli.command).map(|o| (o, ctx.out)))
        .and_then(|(o, out)| emit(&o, out.as_deref()));
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", e.to_json());
            e.exit_code()
        }
    }
}
