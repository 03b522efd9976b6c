use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cadi",
    version,
    about = "Class Angular Distortion Index toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a synthetic benchmark dataset as CSV.
    Generate(GenerateArgs),
    /// Score one projection with one metric and print a JSON result.
    Metric(MetricArgs),
    /// Compute a projection (AngleEmbedding, PCA or random).
    Embed(EmbedArgs),
    /// Repeat sampled CADI at several budgets and write the score distributions.
    Stability(StabilityArgs),
    /// Score several projections with several metrics and rank them.
    Benchmark(BenchmarkArgs),
    /// Recompute ranks and rank correlations from a benchmark results file.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// rings, concentric3, concentric4, donuts or matryoshka.
    #[arg(long)]
    pub name: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scales every class size; 1 gives the full benchmark size.
    #[arg(long, default_value_t = 1.0)]
    pub fraction: f64,
    #[arg(long)]
    pub out: PathBuf,
}

/// Triplet budget flags shared by the CADI-family metrics.
#[derive(Debug, Clone, Args)]
pub struct BudgetArgs {
    /// Sample ceil(k_mult * n) triplets (default 40 for CADI, 100 for ADI).
    #[arg(long, conflicts_with_all = ["k_abs", "exact"])]
    pub k_mult: Option<f64>,
    /// Sample exactly this many triplets.
    #[arg(long, conflicts_with = "exact")]
    pub k_abs: Option<usize>,
    /// Enumerate every triplet instead of sampling.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct MetricArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub proj: PathBuf,
    /// cadi, adi, silhouette, dbi, cds, nmi or ari.
    #[arg(long)]
    pub metric: String,
    /// Cluster labels of the projection (required by nmi and ari).
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Write the JSON result here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write CADI's per class-pair decomposition as CSV.
    #[arg(long)]
    pub breakdown: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Angle,
    Pca,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Parametric,
    Nonparametric,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Angle)]
    pub method: Method,
    #[arg(long, value_enum, default_value_t = Mode::Parametric)]
    pub mode: Mode,
    #[arg(long, default_value_t = 200)]
    pub epochs: usize,
    #[arg(long, default_value_t = 512)]
    pub batch_size: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub lr: f64,
    /// Output dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Per-epoch training loss (AngleEmbedding only).
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub proj: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "1,2,5,10,20,40")]
    pub mults: Vec<f64>,
    #[arg(long, default_value_t = 200)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct BenchmarkArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Projection as `name=path` (or a bare path named after its file stem); repeatable.
    #[arg(long, required = true)]
    pub proj: Vec<String>,
    /// Cluster labels of a projection as `name=path`; enables nmi and ari for it.
    #[arg(long)]
    pub clusters: Vec<String>,
    /// Metrics to compute; defaults to every metric that applies.
    #[arg(long, value_delimiter = ',')]
    pub metric: Vec<String>,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// A results.csv written by `benchmark`.
    #[arg(long)]
    pub results: PathBuf,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}
