mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "amiforge", version, about = "Search, verify and construct generalized amicable tuples")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Largest sieve the command may build.
    #[arg(long, env = "AMIFORGE_SIEVE_LIMIT", default_value_t = 1_000_000, global = true)]
    pub sieve_limit: u64,
    /// Worker threads for searches; defaults to the available parallelism.
    #[arg(long, env = "AMIFORGE_WORKERS", global = true)]
    pub workers: Option<usize>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Family parameters shared by `check` and `search`.
#[derive(Args, Debug, Clone, Default)]
pub struct FamilyArgs {
    /// Family name, e.g. pm, multiamicable, alpha-beta.
    pub family: String,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub q: Option<u64>,
    /// Comma-separated weights; for cohen-pair and alpha-beta this is alpha,beta.
    #[arg(long)]
    pub alphas: Option<String>,
    #[arg(long)]
    pub alpha: Option<u64>,
    #[arg(long)]
    pub beta: Option<u64>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Tabulate σ(n) for n <= limit.
    Sieve {
        #[arg(long)]
        limit: u64,
    },
    /// Test one tuple against a family.
    Check {
        #[command(flatten)]
        family: FamilyArgs,
        /// Comma-separated integers; factored forms such as 2^3*13 are accepted.
        #[arg(long)]
        tuple: String,
    },
    /// Enumerate every family member with elements <= limit.
    Search {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long)]
        limit: u64,
    },
    /// Build multiamicable tuples from equal-σ seeds.
    Construct {
        #[arg(long)]
        alphas: String,
        /// Explicit seeds N1,N2,...
        #[arg(long, conflicts_with = "seed_limit")]
        ns: Option<String>,
        /// Search all seeds up to this bound instead.
        #[arg(long)]
        seed_limit: Option<u64>,
        #[arg(long)]
        a_bound: u64,
    },
    /// Counting functions and mean-value bounds.
    Density {
        #[command(subcommand)]
        which: DensityCommand,
    },
    /// Look for pairs with σ(m)² = σ(n)² = m² + n².
    ScanQuestion {
        #[arg(long)]
        limit: u64,
    },
    /// Count multiamicable tuples by smallest member.
    Census {
        #[arg(long)]
        alphas: String,
        #[arg(long)]
        limits: String,
    },
    /// Check every embedded table row.
    VerifyTables,
}

#[derive(Subcommand, Debug)]
pub enum DensityCommand {
    /// A(x), amicable numbers up to x.
    Amicable {
        #[arg(long)]
        checkpoints: String,
    },
    /// M(x), pairs with σ(m) = σ(n) = αm + βn and m <= x.
    Multi {
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        #[arg(long)]
        checkpoints: String,
    },
    /// Σ σᵏ(n)/nᵏ against its ζ bound.
    Lemma {
        /// Comma-separated exponents.
        #[arg(long, default_value = "1")]
        k: String,
        #[arg(long)]
        checkpoints: String,
    },
    /// A(x) beside x/e^{√(ln x)}.
    Pomerance {
        #[arg(long)]
        checkpoints: String,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(output::CliError::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("amiforge: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
