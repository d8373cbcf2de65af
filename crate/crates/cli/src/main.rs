mod commands;
mod pool;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use praf_core::report::MatrixFormat;

/// Audit health-app privacy policies and score their privacy risk.
#[derive(Debug, Parser)]
#[command(name = "praf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Retrieve each app's policy into the cache.
    Fetch(FetchArgs),
    /// Detect, score and write the matrix, summary and per-app reports.
    Audit(CommonArgs),
    /// Recompute the annotated corpus and compare with expected values.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// App registry with reviewer annotations.
    #[arg(long, default_value = "fixtures/codebook.json")]
    pub codebook: PathBuf,
    /// Document cache directory.
    #[arg(long, env = "PRAF_CACHE", default_value = "fixtures/cache")]
    pub cache: PathBuf,
    /// Detection rules file (built-in rules when omitted).
    #[arg(long)]
    pub rules: Option<PathBuf>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Matrix formats to write (repeatable).
    #[arg(long = "format", value_name = "markdown|csv|json", value_parser = parse_format)]
    pub formats: Vec<MatrixFormat>,
    /// Never touch the network.
    #[arg(long)]
    pub offline: bool,
    /// Concurrent per-app workers.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u16).range(1..))]
    pub jobs: u16,
    /// Include real app names in outputs.
    #[arg(long)]
    pub reveal_names: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FetchArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Serve responses from a recorded-fixture directory instead of the network.
    #[arg(long, value_name = "DIR")]
    pub replay: Option<PathBuf>,
    /// Per-request timeout in seconds.
    #[arg(long, default_value_t = 20)]
    pub timeout: u64,
    /// Retries after a failed request.
    #[arg(long, default_value_t = 2)]
    pub retries: u32,
    #[arg(long, default_value = praf_core::ingest::DEFAULT_USER_AGENT)]
    pub user_agent: String,
    /// Fetch even where robots.txt disallows it.
    #[arg(long)]
    pub ignore_robots: bool,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Transcribed expected values.
    #[arg(long, default_value = "fixtures/expected_table.json")]
    pub expected: PathBuf,
}

fn parse_format(s: &str) -> Result<MatrixFormat, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fetch(args) => commands::fetch(&args),
        Command::Audit(args) => commands::audit(&args),
        Command::Verify(args) => commands::verify(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("praf: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
