//! `iidm`: exact moments of iid sums from the command line.
//!
//! Exit codes: 0 success, 2 usage or parse error, 3 domain error (infinite or
//! missing moment, asymmetry, zero variance, budget), 4 verification failure.

mod commands;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CliError;

#[derive(Debug, Parser)]
#[command(name = "iidm", version, about = "Exact moments of sums of iid random variables")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    /// E(S_n^p) / (n^{p/2} sigma^p), symmetric summands
    Clt,
    /// E(S_n^p) / n^p
    Lln,
}

#[derive(Debug, Args)]
struct FormatArg {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the symbolic expansion of E(S_n^p).
    Expand {
        #[arg(long)]
        p: u32,
        /// Keep only terms with even moments (summand symmetric about 0).
        #[arg(long)]
        symmetric: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Evaluate E(S_n^p) exactly for a distribution.
    Eval {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u64,
        /// Distribution, e.g. "uniform(-1,1)", "bernoulli(1/2)", "moments(0,1,0,3)".
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Print the limit and 1/n expansion of a normalized moment.
    Correction {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        dist: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Tabulate a normalized moment and its residual over a schedule of n.
    Converge {
        #[arg(value_enum)]
        kind: Kind,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        dist: String,
        /// Comma-separated increasing n values [default: 2,4,...,16384].
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<u64>>,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Check the symbolic engine against brute-force expansion.
    Verify {
        #[arg(long, default_value_t = 6)]
        p_max: u32,
        #[arg(long, default_value_t = 5)]
        n_max: u32,
        #[arg(long, default_value_t = 50)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Perturb one symbolic evaluation to exercise the failure report.
        #[arg(long, hide = true)]
        inject_fault: bool,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Estimate E(S_n^p) by simulation and compare with the exact value.
    MonteCarlo {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        dist: String,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Acceptance threshold in standard errors.
        #[arg(long, default_value_t = 5.0)]
        z: f64,
        #[command(flatten)]
        format: FormatArg,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Expand { p, symmetric, format } => commands::expand(p, symmetric, format.format),
        Command::Eval { p, n, dist, format } => commands::eval(p, n, &dist, format.format),
        Command::Correction { kind, p, dist, format } => {
            commands::correction(kind, p, &dist, format.format)
        }
        Command::Converge { kind, p, dist, schedule, format } => {
            commands::converge(kind, p, &dist, schedule, format.format)
        }
        Command::Verify { p_max, n_max, trials, seed, inject_fault, format } => {
            commands::verify(p_max, n_max, trials, seed, inject_fault, format.format)
        }
        Command::MonteCarlo { p, n, dist, samples, seed, z, format } => {
            commands::monte_carlo(p, n, &dist, samples, seed, z, format.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { commands::EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            if let Some(out) = &err.stdout {
                print!("{out}");
            }
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}
