//! `cstlab`: Frobenius data, Sato–Tate statistics and Euler products for
//! abelian surfaces from the command line.

mod commands;
mod output;

use clap::{Args, Parser, Subcommand};
use cstlab_core::stgroups::GroupTag;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "cstlab", version, about = "Joint Chebotarev/Sato-Tate equidistribution experiments")]
struct Cli {
    /// Only print warnings and errors.
    #[arg(short, long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count Frobenius data up to pmax and store the cache.
    Count(DataArgs),
    /// Character sums, moments and chi-square fit of cached data.
    Analyze(AnalyzeArgs),
    /// Truncated Euler products of the data on a grid of s and X.
    Lfun(LfunArgs),
    /// Analyze synthetic Haar data of a group against itself.
    Selftest(SelftestArgs),
    /// Dump Haar samples and compare moments with quadrature.
    Haar(HaarArgs),
    /// Render a saved analysis report as text.
    Report(ReportArgs),
    /// Built-in surface recipes.
    #[command(subcommand)]
    Registry(RegistryCommand),
}

#[derive(Args, Debug, Clone)]
pub struct DataArgs {
    /// Experiment config (TOML).
    #[arg(short, long)]
    pub config: Option<PathBuf>,
    /// Take [surface] and [lfield] from a registry entry.
    #[arg(short, long)]
    pub registry: Option<String>,
    #[arg(long)]
    pub pmax: Option<u64>,
    /// Frobenius cache file.
    #[arg(long)]
    pub cache: Option<PathBuf>,
    /// Output directory.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub data: DataArgs,
    /// Count and cache the data if no cache exists.
    #[arg(long)]
    pub count: bool,
    /// Group to test against instead of the claimed one.
    #[arg(short, long)]
    pub group: Option<GroupTag>,
    #[arg(long)]
    pub cutoff: Option<u32>,
    #[arg(long)]
    pub threshold_c: Option<f64>,
    #[arg(long)]
    pub chi2_limit: Option<f64>,
}

#[derive(Args, Debug)]
pub struct LfunArgs {
    #[command(flatten)]
    pub data: DataArgs,
    #[arg(long)]
    pub count: bool,
    #[arg(short, long)]
    pub group: Option<GroupTag>,
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Comma-separated values of s.
    #[arg(long, value_delimiter = ',')]
    pub s: Vec<f64>,
    /// Comma-separated truncation points X.
    #[arg(long, value_delimiter = ',')]
    pub x: Vec<u64>,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// A group tag, or `all`.
    #[arg(short, long, default_value = "all")]
    pub group: String,
    #[arg(short, long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use K = Q(zeta_m).
    #[arg(long, default_value_t = 5)]
    pub modulus: u64,
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Write the reports as JSON here.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct HaarArgs {
    #[arg(short, long)]
    pub group: GroupTag,
    #[arg(short, long, default_value_t = 100_000)]
    pub n: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 4)]
    pub jmax: u32,
    #[arg(long, default_value_t = 2)]
    pub kmax: u32,
    /// Write `component,a,b` rows of the samples here.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ReportArgs {
    /// A report.json written by `analyze`.
    #[arg(short, long, conflicts_with = "config")]
    pub input: Option<PathBuf>,
    /// Read `<output_dir>/report.json` of this config.
    #[arg(short, long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum RegistryCommand {
    /// List the entries.
    List,
    /// Print an entry as a ready-to-run config.
    Show { name: String },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if cli.quiet { "warn" } else { "info" }))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let result = match cli.command {
        Command::Count(a) => commands::count(&a),
        Command::Analyze(a) => commands::analyze(&a),
        Command::Lfun(a) => commands::lfun(&a),
        Command::Selftest(a) => commands::selftest(&a),
        Command::Haar(a) => commands::haar(&a),
        Command::Report(a) => commands::report(&a),
        Command::Registry(RegistryCommand::List) => commands::registry_list(),
        Command::Registry(RegistryCommand::Show { name }) => commands::registry_show(&name),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
