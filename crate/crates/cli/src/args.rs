use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "aoi", version, about = "Mean age of information for LIFO pushout buffers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepMethod {
    Analytic,
    Simulated,
    Both,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact mean AoI for m = 1, 2, 3.
    Analytic(AnalyticArgs),
    /// Simulated mean AoI with a confidence interval, any m.
    Simulate(SimulateArgs),
    /// Mean AoI over a grid of arrival rates and buffer sizes.
    Sweep(SweepArgs),
    /// Check closed forms against simulation on a grid of cases.
    Validate(ValidateArgs),
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    #[arg(long, default_value_t = aoi_core::simulator::DEFAULT_HORIZON)]
    pub horizon: f64,
    /// Defaults to 5% of the horizon.
    #[arg(long)]
    pub warmup: Option<f64>,
    #[arg(long, default_value_t = aoi_core::simulator::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = aoi_core::simulator::DEFAULT_REPLICATIONS)]
    pub replications: usize,
}

#[derive(Debug, Clone, Args)]
pub struct AnalyticArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value = "exp:1")]
    pub service: String,
    /// Use a named solver instead of the default for `m`.
    #[arg(long)]
    pub solver: Option<String>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: f64,
    #[arg(long, default_value = "exp:1")]
    pub service: String,
    /// Interarrival law; defaults to `exp:<lambda>`.
    #[arg(long)]
    pub arrivals: Option<String>,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Write replication 0's departures as JSON lines.
    #[arg(long)]
    pub event_log: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    /// Comma list of buffer sizes.
    #[arg(long, default_value = "1,2,3")]
    pub m: String,
    /// `start:stop:step` or a comma list.
    #[arg(long, default_value = "0.5:8:0.25")]
    pub lambda: String,
    #[arg(long, default_value = "exp:1")]
    pub service: String,
    #[arg(long, value_enum, default_value_t = SweepMethod::Analytic)]
    pub method: SweepMethod,
    #[command(flatten)]
    pub sim: SimArgs,
    /// SVG plot of mean AoI against lambda.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct ValidateArgs {
    /// Restrict the default grid to these buffer sizes (comma list).
    #[arg(long)]
    pub m: Option<String>,
    /// Replace the default arrival rates (comma list or range).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Replace the default service laws (comma list of specs).
    #[arg(long)]
    pub service: Option<String>,
    #[arg(long, default_value_t = 1e7)]
    pub horizon: f64,
    #[arg(long)]
    pub warmup: Option<f64>,
    #[arg(long, default_value_t = aoi_core::simulator::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = aoi_core::simulator::DEFAULT_REPLICATIONS)]
    pub replications: usize,
    /// Interval width in normal standard deviations (coverage-equivalent).
    #[arg(long, default_value_t = 3.0)]
    pub sigma: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}
