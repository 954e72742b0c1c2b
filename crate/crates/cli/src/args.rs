use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgtomo::state::{EnmMode, PrecisionSpec};
use pgtomo::Execution;

pub const DEFAULT_CL: f64 = 0.87;

#[derive(Debug, Parser)]
#[command(
    name = "pgtomo",
    version,
    about = "Precision-guaranteed quantum state and process tomography"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Reconstruct a state from counts (or simulated counts) and certify it.
    StateTomo(StateTomoArgs),
    /// Reconstruct a channel from per-probe counts (or a simulated channel).
    ProcessTomo(ProcessTomoArgs),
    /// Emit the confidence level over a grid of radii as CSV.
    ClCurve(ClCurveArgs),
    /// Recompute the published experiment and compare with its tables.
    ReproducePaper,
    /// Score factor of a probe set.
    ProbeScore(ProbeScoreArgs),
    /// Random search for a probe set with a small score factor.
    ProbeSearch(ProbeSearchArgs),
    /// Write the embedded experiment data as JSON fixture files.
    #[command(hide = true)]
    WriteFixtures {
        #[arg(long, default_value = "fixtures")]
        out_dir: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnmArg {
    Hs,
    Truncate,
}

impl From<EnmArg> for EnmMode {
    fn from(a: EnmArg) -> Self {
        match a {
            EnmArg::Hs => EnmMode::HsProjection,
            EnmArg::Truncate => EnmMode::TruncateRenormalize,
        }
    }
}

#[derive(Debug, Args)]
pub struct PrecisionArgs {
    /// Target confidence level [default: 0.87].
    #[arg(long, conflicts_with = "delta")]
    pub cl: Option<f64>,
    /// Certify this Hilbert–Schmidt radius instead of a confidence level.
    #[arg(long)]
    pub delta: Option<f64>,
}

impl PrecisionArgs {
    pub fn spec(&self) -> PrecisionSpec {
        match (self.cl, self.delta) {
            (_, Some(d)) => PrecisionSpec::Delta(d),
            (Some(cl), None) => PrecisionSpec::Cl(cl),
            (None, None) => PrecisionSpec::Cl(DEFAULT_CL),
        }
    }
}

#[derive(Debug, Args)]
pub struct StateTomoArgs {
    /// POVM-set JSON [default: the calibrated qubit set].
    #[arg(long)]
    pub povms: Option<PathBuf>,
    /// Counts JSON.
    #[arg(
        long,
        conflicts_with = "simulate",
        required_unless_present = "simulate"
    )]
    pub counts: Option<PathBuf>,
    /// Density-matrix JSON to simulate counts from.
    #[arg(long)]
    pub simulate: Option<PathBuf>,
    /// Shots per measurement setting when simulating.
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[arg(long, value_enum, default_value_t = EnmArg::Hs)]
    pub enm_mode: EnmArg,
    /// Density-matrix JSON of the intended state; adds delta0 and delta_tilde.
    #[arg(long)]
    pub target: Option<PathBuf>,
    /// Report path [default: stdout].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProcessTomoArgs {
    /// `tetrahedron` or a probes JSON file.
    #[arg(long, default_value = "tetrahedron")]
    pub probes: String,
    /// POVM-set JSON [default: the calibrated qubit set].
    #[arg(long)]
    pub povms: Option<PathBuf>,
    /// Counts JSON, one per probe in probe order.
    #[arg(long, num_args = 1.., conflicts_with = "simulate", required_unless_present = "simulate")]
    pub counts: Vec<PathBuf>,
    /// Channel to simulate: `identity`, `depolarizing:<p>`, `unitary:<file>`.
    #[arg(long)]
    pub simulate: Option<String>,
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub precision: PrecisionArgs,
    #[arg(long, value_enum, default_value_t = EnmArg::Hs)]
    pub enm_mode: EnmArg,
    /// `bell` or a Choi-matrix JSON file; adds Delta_tilde.
    #[arg(long)]
    pub target: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ClCurveArgs {
    #[arg(long)]
    pub povms: Option<PathBuf>,
    #[arg(long, default_value_t = 8192, value_parser = clap::value_parser!(u64).range(1..))]
    pub shots: u64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_min: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta_max: f64,
    #[arg(long, default_value_t = 101)]
    pub steps: usize,
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeScoreArgs {
    /// `tetrahedron` or a probes JSON file.
    #[arg(long, default_value = "tetrahedron")]
    pub probes: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ProbeSearchArgs {
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 4)]
    pub num_probes: usize,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub sequential: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn execution(sequential: bool) -> Execution {
    if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    }
}
