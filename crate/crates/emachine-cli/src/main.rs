//! Reproducible experiment runner: analytic values, seeded simulations and
//! heat-ledger accounting in one self-contained JSON report per invocation.
//!
//! Exit status: 0 when every embedded check passes, 1 when any check fails,
//! 2 on usage or input errors. Identical configurations (seed included)
//! produce byte-identical reports.

mod experiments;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use emachine::thermo::AgentMode;

use experiments::Outcome;

const DEFAULT_TEMPERATURE: f64 = std::f64::consts::LOG2_E; // 1/ln2: one bit is one heat unit

#[derive(Parser)]
#[command(
    name = "emachine",
    about = "Measurement-process experiments: erased information, box protocols and Landauer ledgers",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl Format {
    fn name(&self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Memoryless,
    Memory,
}

#[derive(Args)]
struct CommonOpts {
    /// Report format: the JSON report, or the raw data (trajectory, ledger
    /// or per-step table) as CSV.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Boltzmann constant used for heat conversions.
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// Heat-bath temperature; the default makes one bit cost one heat unit.
    #[arg(long = "T", default_value_t = DEFAULT_TEMPERATURE)]
    temperature: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Repeated random-basis measurements of a qubit: exact 3/2-bit erased
    /// information and its empirical estimate.
    Qubit {
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The feedback NOR channel: 1/2 bit under a uniform prior, ~0.459 bits
    /// under the channel's own stationary prior.
    Nor {
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// The particle-in-a-box protocol and its statistical equivalence with
    /// the qubit machine.
    Spekkens {
        #[arg(long, default_value_t = 1_000_000)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// An observer with or without memory, with per-cycle Landauer costs.
    Agent {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long, default_value_t = 100_000)]
        cycles: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// System-side audit: per-step von Neumann entropy differences and the
    /// zero-cost RAND operation.
    Audit {
        #[arg(long, default_value_t = 10_000)]
        steps: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Causal-state reconstruction from a trajectory CSV.
    Infer {
        /// Trajectory CSV (columns t,x,y,s).
        trajectory: PathBuf,
        /// Past-word length for the finite-horizon causal equivalence.
        #[arg(long, default_value_t = 2)]
        max_history: usize,
        /// Total-variation tolerance for merging pasts.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
        /// Compare against a reference machine: "qubit", "nor", or a machine
        /// JSON path.
        #[arg(long)]
        reference: Option<String>,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    match cli.command {
        Command::Qubit { steps, seed, common } => {
            experiments::qubit(steps, seed, common.k, common.temperature, common.format.name())
        }
        Command::Nor { steps, seed, common } => {
            experiments::nor(steps, seed, common.k, common.temperature, common.format.name())
        }
        Command::Spekkens { steps, seed, common } => {
            experiments::spekkens(steps, seed, common.k, common.temperature, common.format.name())
        }
        Command::Agent {
            mode,
            cycles,
            seed,
            common,
        } => {
            let mode = match mode {
                Mode::Memoryless => AgentMode::Memoryless,
                Mode::Memory => AgentMode::MemoryAssisted,
            };
            experiments::agent(mode, cycles, seed, common.k, common.temperature, common.format.name())
        }
        Command::Audit { steps, seed, common } => {
            experiments::audit(steps, seed, common.k, common.temperature, common.format.name())
        }
        Command::Infer {
            trajectory,
            max_history,
            tol,
            reference,
            common,
        } => experiments::infer(
            &trajectory,
            max_history,
            tol,
            reference.as_deref(),
            common.k,
            common.temperature,
            common.format.name(),
        ),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => println!("{text}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (format, out) = match &cli.command {
        Command::Qubit { common, .. }
        | Command::Nor { common, .. }
        | Command::Spekkens { common, .. }
        | Command::Agent { common, .. }
        | Command::Audit { common, .. }
        | Command::Infer { common, .. } => (common.format, common.out.clone()),
    };
    match run(cli) {
        Ok(outcome) => {
            let payload = match format {
                Format::Json => outcome.report.to_json(),
                Format::Csv => match outcome.csv {
                    Some(csv) => csv,
                    None => {
                        eprintln!("error: csv output is not available for this experiment");
                        return ExitCode::from(2);
                    }
                },
            };
            if let Err(e) = emit(&payload, out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            if outcome.report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
