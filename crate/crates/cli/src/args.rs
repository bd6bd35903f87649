use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "typent",
    version,
    about = "Most probable entanglement spectra of random bipartite pure states",
    after_help = "Set TYPENT_THREADS to cap the number of worker threads.\n\
                  Exit codes: 0 success, 2 usage or domain error, 3 infeasible, 4 no convergence."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output encoding; defaults to json for reports and csv for tables.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Write to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    /// key=value file supplying defaults for any flag; flags take precedence.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Semicircle,
    #[value(alias = "marchenko_pastur", alias = "mp")]
    MarchenkoPastur,
}

macro_rules! from_str_via_value_enum {
    ($($t:ty),*) => {$(
        impl std::str::FromStr for $t {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                <$t as ValueEnum>::from_str(s, true)
            }
        }
    )*};
}

from_str_via_value_enum!(Format, Kind);

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Most probable spectrum of an N×M bipartition with its closed forms.
    Typical(DimsArgs),
    /// Most probable spectrum at fixed purity for a balanced bipartition.
    Isopurity(IsopurityArgs),
    /// Monte Carlo ensemble averages of spectral functionals.
    Sample(SampleArgs),
    /// Histogram of rescaled eigenvalues Nλ over sampled states.
    Histogram(HistogramArgs),
    /// Continuum density curve on a 512-point grid.
    Density(DensityArgs),
    /// KS distance of finite-n isopurity spectra to the semicircle.
    Converge(ConvergeArgs),
    /// Every closed-form quantity at one bipartition.
    Formulas(DimsArgs),
}

#[derive(Debug, Args)]
pub struct DimsArgs {
    /// Subsystem dimension N.
    #[arg(long)]
    pub n: Option<usize>,
    /// Environment dimension M ≥ N.
    #[arg(long)]
    pub m: Option<usize>,
}

#[derive(Debug, Args)]
pub struct IsopurityArgs {
    /// Dimension N of both factors.
    #[arg(long)]
    pub n: Option<usize>,
    /// Target purity in (1/N, 1].
    #[arg(long, conflicts_with_all = ["beta", "eta"])]
    pub purity: Option<f64>,
    /// Rescaled multiplier η/N³.
    #[arg(long, conflicts_with = "eta")]
    pub beta: Option<f64>,
    /// Purity multiplier η.
    #[arg(long)]
    pub eta: Option<f64>,
    /// Tabulate feasibility across the threshold instead of failing.
    #[arg(long)]
    pub scan: bool,
    /// Grid size of the scan.
    #[arg(long)]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EnsembleArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of sampled states.
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// purity, entropy, det, det_power(k), lambda_variance or trace_power(k);
    /// repeat the flag for several.
    #[arg(long)]
    pub functional: Vec<String>,
}

#[derive(Debug, Args)]
pub struct HistogramArgs {
    #[command(flatten)]
    pub ensemble: EnsembleArgs,
    /// Number of bins, at least 10.
    #[arg(long)]
    pub bins: Option<usize>,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Rescaled multiplier β ≥ 2 of the semicircle law.
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    #[arg(long)]
    pub beta: Option<f64>,
    /// Comma-separated list of sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
}
