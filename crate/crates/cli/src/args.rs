use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

/// Random caterpillar laboratory: simulate, evaluate closed forms, enumerate
/// exactly, verify reference values and plot the Zagreb CLT.
#[derive(Debug, Parser)]
#[command(name = "catlab", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-replicate index values as CSV or JSON.
    Simulate(SimulateArgs),
    /// Closed-form mean, moment or limit.
    Theory(TheoryArgs),
    /// Run a suite of reference checks.
    Verify(VerifyArgs),
    /// Standardized Zagreb sample, histogram and normality tests.
    Clt(CltArgs),
    /// Exact moments by enumerating every growth history.
    Oracle(OracleArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `key=value` file; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    /// Comma list: gini_degree, hoover, zagreb, randic, randic:ALPHA, wiener, hyper_wiener.
    #[arg(long)]
    pub indices: Option<String>,
    /// sequential or direct.
    #[arg(long)]
    pub sampler: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    pub format: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct TheoryArgs {
    /// Formula name, e.g. zagreb_mean, wiener_mean, hyper_wiener_mean_paper.
    #[arg(long)]
    pub index: Option<String>,
    #[arg(long)]
    pub m: Option<u64>,
    #[arg(long)]
    pub n: Option<u64>,
    /// Add the value as a `numerator/denominator` string.
    #[arg(long)]
    pub exact: bool,
    /// Divide by a power of n: none, n1 or n2.
    #[arg(long)]
    pub scaled: Option<String>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// oracle, montecarlo, paper7 or all.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// default or strict.
    #[arg(long)]
    pub tolerance_profile: Option<String>,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct CltArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub bins: Option<usize>,
    /// SVG output path.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    /// CSV output path for the standardized sample.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args)]
pub struct OracleArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<u64>,
    /// zagreb, randic, wiener or hyper_wiener.
    #[arg(long)]
    pub index: Option<String>,
    #[command(flatten)]
    pub common: Common,
}
