use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use qdiscrim::cli::{self, CliError, Format, ProblemFile, Report, RunOptions, SampleParams};
use qdiscrim::Subsystem;

#[derive(Parser, Debug)]
#[command(author, version, about = "Minimum-error discrimination between two quantum states")]
struct Args {
    /// Output format.
    #[arg(long, value_enum, default_value = "text", global = true)]
    format: Format,

    /// Scales every numerical tolerance by this factor.
    #[arg(long, default_value_t = 1.0, global = true)]
    tolerance: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// General two-state discrimination (mode "general").
    Discriminate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Pure state versus uniform orthonormal mixture (mode "filtering").
    Filter {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Collective versus local two-qubit discrimination (mode "two-qubit").
    TwoQubit {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        subsystem: Option<Party>,
    },
    /// Runs whichever command matches the file's mode.
    Run {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        subsystem: Option<Party>,
    },
    /// Randomised closed-form versus oracle experiment.
    Sample {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of mixture components.
        #[arg(long, default_value_t = 3)]
        d: usize,
        /// State-space dimension.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, value_enum, default_value = "A")]
        subsystem: Party,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Party {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<Party> for Subsystem {
    fn from(p: Party) -> Self {
        match p {
            Party::A => Subsystem::A,
            Party::B => Subsystem::B,
        }
    }
}

fn load(path: &PathBuf) -> Result<ProblemFile, CliError> {
    let text =
        std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
    ProblemFile::parse(&text)
}

fn execute(args: &Args) -> Result<Report, CliError> {
    let opts = |seed: Option<u64>, subsystem: Option<Party>| RunOptions {
        tolerance_scale: args.tolerance,
        seed,
        subsystem: subsystem.map(Into::into),
    };
    match &args.command {
        Command::Discriminate { input, seed } => cli::cmd_discriminate(&load(input)?, &opts(*seed, None)),
        Command::Filter { input, seed } => cli::cmd_filter(&load(input)?, &opts(*seed, None)),
        Command::TwoQubit { input, seed, subsystem } => cli::cmd_two_qubit(&load(input)?, &opts(*seed, *subsystem)),
        Command::Run { input, seed, subsystem } => cli::run(&load(input)?, &opts(*seed, *subsystem)),
        Command::Sample { trials, seed, d, dim, subsystem } => {
            let params =
                SampleParams { trials: *trials, seed: *seed, d: *d, dim: *dim, subsystem: (*subsystem).into() };
            cli::cmd_sample(&params, &opts(Some(*seed), Some(*subsystem)))
        }
    }
}

fn main() -> ExitCode {
    let args = Args::parse();
    match execute(&args) {
        Ok(report) => {
            print!("{}", report.render(args.format));
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("qdiscrim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
