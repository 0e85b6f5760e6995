use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dirsparse::experiments::{AlphaMode, NUMERIC_SLACK};

#[derive(Debug, Parser)]
#[command(
    name = "dirsparse",
    version,
    about = "Sparsity of symmetric Dirichlet draws: sampling, bounds and verification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw Dirichlet points and write their log coordinates.
    Sample(SampleArgs),
    /// Evaluate a closed-form sparsity bound.
    Bounds(BoundsArgs),
    /// Run trials and test every applicable bound against them.
    Verify(ExperimentArgs),
    /// Run the quantile-curve experiment and write trials, curves and verdicts.
    ReproduceFigure(ExperimentArgs),
    /// Numerically check the inequalities behind the bounds.
    CheckProofs(ProofArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Output for commands that print a single report.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

fn parse_alpha_mode(s: &str) -> Result<AlphaMode, String> {
    s.parse()
        .map_err(|e: dirsparse::experiments::ExperimentError| e.to_string())
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Dimension.
    #[arg(long)]
    pub n: usize,
    /// `inverse_n`, `inverse_n_squared`, `fixed:<alpha>` or a bare alpha.
    #[arg(long, alias = "alpha", value_parser = parse_alpha_mode, default_value = "inverse_n")]
    pub alpha_mode: AlphaMode,
    /// Number of points.
    #[arg(long, default_value_t = 1)]
    pub count: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Directory for `samples.<format>`; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Which {
    /// Master bound for arbitrary (ε, α, k, n).
    Lemma4,
    /// α = 1/n, threshold n^-c0, ceiling 6 c0 ln n.
    Theorem1,
    /// α = c1/n, threshold n^-c3, ceiling c2 ln n.
    Theorem2,
    /// α = 1/n², threshold n^-2, ceiling 5 or ln g(n).
    Theorem3,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(value_enum)]
    pub which: Which,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c1: f64,
    #[arg(long, default_value_t = 6.0)]
    pub c2: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c3: f64,
    /// Use the ceiling k = ln g(n) with this value of ln g(n).
    #[arg(long)]
    pub ln_g: Option<f64>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Flat `key = value` file with experiment fields; flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_parser = parse_alpha_mode)]
    pub alpha_mode: Option<AlphaMode>,
    /// Comma-separated dimensions.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Comma-separated threshold exponents c (ε = n^-c).
    #[arg(long, value_delimiter = ',')]
    pub exponents: Option<Vec<f64>>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ProofArgs {
    /// Seed for the Chernoff simulations.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// `json` prints the full report instead of the summary.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    #[arg(long, hide = true, default_value_t = NUMERIC_SLACK, allow_negative_numbers = true)]
    pub slack: f64,
}
