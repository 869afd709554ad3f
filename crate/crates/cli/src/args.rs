use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "testsched",
    version,
    about = "Simulate, measure and verify online scheduling with obligatory tests"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one algorithm on one instance and report ALG, OPT and the ratio.
    Run(RunArgs),
    /// Report ALG/OPT for one instance, family or adversary.
    Ratio(RatioArgs),
    /// Evaluate a bound or a family ratio over a parameter grid.
    Sweep(SweepArgs),
    /// Check the per-arc lemmas and the charging construction for 1-SORT.
    Verify(VerifyArgs),
    /// Write a generated instance in the instance file format.
    Generate(GenerateArgs),
    /// Reproduce the optimal parameters and ratio bounds.
    Bounds(BoundsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AlgName {
    BetaSort,
    Sidle,
    TestAllSpt,
    Immediate,
}

#[derive(Debug, Clone, Args)]
pub struct AlgArgs {
    #[arg(long, value_enum, default_value = "beta-sort")]
    pub alg: AlgName,
    /// Test-time weight of beta-SORT [default: 1].
    #[arg(long)]
    pub beta: Option<f64>,
    /// SIDLE threshold [default: the optimal y0].
    #[arg(long)]
    pub y: Option<f64>,
}

/// Family settings shared by every subcommand that builds an instance.
#[derive(Debug, Clone, Args)]
pub struct FamilyArgs {
    /// Named family: fig1, fig2, beta-lb-small, beta-lb-large, sidle-tight,
    /// random (plus adversary for `ratio` and `sweep --over gamma`).
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as KEY=VALUE; repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE", value_parser = parse_key_value)]
    pub params: Vec<(String, String)>,
    /// Seed of the random family.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of jobs.
    #[arg(long)]
    pub n: Option<usize>,
    /// Short-job fraction.
    #[arg(long)]
    pub gamma: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["instance", "family"])))]
pub struct RunArgs {
    #[command(flatten)]
    pub alg: AlgArgs,
    /// Instance file with one `t,p` line per job.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Also write the schedule trace (`job_id,kind,start,end`) to this file.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["instance", "family"])))]
pub struct RatioArgs {
    #[command(flatten)]
    pub alg: AlgArgs,
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepVar {
    /// beta-SORT lower bound and its measured value on the matching family.
    Beta,
    /// SIDLE ratio bound rho(y) and its measured value on the tight family.
    Y,
    /// Family ratio as the short-job fraction varies.
    Gamma,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum)]
    pub over: SweepVar,
    /// First grid point [default: 0.5 for beta, 0 otherwise].
    #[arg(long)]
    pub from: Option<f64>,
    /// Last grid point [default: 2 for beta, 4 for y, 1 for gamma].
    #[arg(long)]
    pub to: Option<f64>,
    /// Grid spacing [default: 0.05].
    #[arg(long)]
    pub step: Option<f64>,
    #[command(flatten)]
    pub alg: AlgArgs,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("source").args(["instance", "family"])))]
pub struct VerifyArgs {
    /// Number of random stress instances.
    #[arg(long, default_value_t = 1000)]
    pub count: usize,
    /// Largest instance size in the random campaign.
    #[arg(long = "max-n", default_value_t = 12)]
    pub max_n: usize,
    /// Imbalance threshold mu [default: the optimal mu0].
    #[arg(long, requires = "nu")]
    pub mu: Option<f64>,
    /// Green-arc threshold nu [default: the optimal nu0].
    #[arg(long, requires = "mu")]
    pub nu: Option<f64>,
    /// Verify this instance file instead of a random campaign.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[command(flatten)]
    pub family: FamilyArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub family: FamilyArgs,
    /// Forwarded to families that take a beta parameter.
    #[arg(long)]
    pub beta: Option<f64>,
    /// Forwarded to families that take a y parameter.
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_key_value(s: &str) -> Result<(String, String), String> {
    match s.split_once('=') {
        Some((k, v)) if !k.trim().is_empty() => Ok((k.trim().to_string(), v.trim().to_string())),
        _ => Err(format!("expected KEY=VALUE, got `{s}`")),
    }
}
