//! `pivotal`: influence analysis, inequality checks, p-sweeps, tail tables
//! and sampling estimates for Boolean functions.
//!
//! Exit status: 0 on success, 1 when an applicable check fails, 2 on usage,
//! input or domain errors.

mod commands;
mod input;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::{parse_grid, Outcome, Sampling};
use input::Input;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Domain(pivotal::Error),
    Output(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Output(m) => f.write_str(m),
            CliError::Domain(e) => write!(f, "{e}"),
        }
    }
}

impl From<pivotal::Error> for CliError {
    fn from(e: pivotal::Error) -> Self {
        CliError::Domain(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser)]
#[command(
    name = "pivotal",
    version,
    about = "Pivotal sets, influences and inequality checks for Boolean functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Truth-table file: `n=<k>` then 2^k characters of 0/1.
    #[arg(long, value_name = "FILE", conflicts_with = "expr")]
    table: Option<PathBuf>,
    /// Expression such as `MAJ(x1, x2, x3)`.
    #[arg(long, value_name = "STRING")]
    expr: Option<String>,
    /// Arity for --expr; defaults to the largest variable index.
    #[arg(long, value_name = "N")]
    n: Option<usize>,
}

impl InputArgs {
    fn load(&self) -> Result<Input, CliError> {
        Input::load(self.table.as_deref(), self.expr.as_deref(), self.n)
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SamplingArgs {
    #[arg(long, default_value_t = 100_000)]
    m: u64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Full report at one bias (JSON by default).
    Analyze {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        /// Estimate the mean and total influence by sampling instead.
        #[arg(long)]
        estimate: bool,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run every check over a bias grid (CSV by default); exit 1 on a failure.
    Check {
        #[command(flatten)]
        input: InputArgs,
        /// Bias grid `a:b:steps`; defaults to 0.1, 0.2, ..., 0.9.
        #[arg(long, value_name = "A:B:STEPS", value_parser = parse_grid, conflicts_with = "p")]
        p_grid: Option<commands::Grid>,
        /// Single bias instead of a grid.
        #[arg(long)]
        p: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rows (p, mean, mean_derivative, total_influence) over a bias grid.
    Sweep {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_name = "A:B:STEPS", value_parser = parse_grid, default_value = "0.1:0.9:9")]
        p_grid: commands::Grid,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Rows (u, exact, bound_stated, bound_proved) for P(|S_n| >= u).
    Tail {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: f64,
        /// Comma-separated thresholds; empty gives a header-only table.
        #[arg(long, value_name = "LIST", default_value = "")]
        u: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sampling estimates with Hoeffding confidence intervals (JSON by default).
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[command(flatten)]
        sampling: SamplingArgs,
        /// Also estimate the influence of this coordinate.
        #[arg(long, value_name = "I")]
        coord: Option<usize>,
        /// Also estimate the total influence.
        #[arg(long)]
        total: bool,
        /// Scan a random subset of K coordinates per sample for --total.
        #[arg(long, value_name = "K", requires = "total")]
        subsample: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn parse_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse()
                .map_err(|_| CliError::Usage(format!("bad number {s:?} in --u")))
        })
        .collect()
}

fn run(command: Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    match command {
        Command::Analyze {
            input,
            p,
            estimate,
            sampling,
            output,
        } => {
            let input = input.load()?;
            let format = output.format.unwrap_or(Format::Json);
            let outcome = if estimate {
                let s = Sampling {
                    p,
                    m: sampling.m,
                    delta: sampling.delta,
                    seed: sampling.seed,
                    coord: None,
                    total: true,
                    subsample: None,
                };
                commands::estimate(&input, &s, "analyze", format)?
            } else {
                commands::analyze(&input, p, format)?
            };
            Ok((outcome, output.out))
        }
        Command::Check {
            input,
            p_grid,
            p,
            output,
        } => {
            let grid = match (p_grid, p) {
                (Some(g), _) => g.0,
                (None, Some(p)) => vec![p],
                (None, None) => commands::default_grid(),
            };
            let format = output.format.unwrap_or(Format::Csv);
            Ok((commands::check(&input.load()?, &grid, format)?, output.out))
        }
        Command::Sweep {
            input,
            p_grid,
            output,
        } => {
            let format = output.format.unwrap_or(Format::Csv);
            Ok((
                commands::sweep(&input.load()?, &p_grid.0, format)?,
                output.out,
            ))
        }
        Command::Tail { n, p, u, output } => {
            let format = output.format.unwrap_or(Format::Csv);
            Ok((commands::tail(n, p, &parse_list(&u)?, format)?, output.out))
        }
        Command::Estimate {
            input,
            p,
            sampling,
            coord,
            total,
            subsample,
            output,
        } => {
            let s = Sampling {
                p,
                m: sampling.m,
                delta: sampling.delta,
                seed: sampling.seed,
                coord,
                total,
                subsample,
            };
            let format = output.format.unwrap_or(Format::Json);
            Ok((
                commands::estimate(&input.load()?, &s, "estimate", format)?,
                output.out,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match run(cli.command) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let written = match &out {
        Some(path) => fs::write(path, &outcome.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if outcome.checks_hold {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
