//! `quasiorbit` command-line tool.

mod commands;
mod exit;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "quasiorbit", version, about = "Invariant subspaces of uniform Jordan operators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Options shared by every verb.
#[derive(Args, Debug, Clone, Default)]
pub struct Common {
    /// Input file; `verify-orbit` takes it twice.
    #[arg(long)]
    pub input: Vec<PathBuf>,
    /// Ambient spec `{"theta": ..., "copies": N}`, overriding the one in the inputs or config.
    #[arg(long)]
    pub ambient: Option<PathBuf>,
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run configuration document.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Jordan models of the restriction and compression of an invariant subspace.
    JordanModel {
        #[command(flatten)]
        common: Common,
    },
    /// Decides whether two invariant subspaces are quasiaffine transforms of each other.
    VerifyOrbit {
        #[command(flatten)]
        common: Common,
        /// Truncation sweep, e.g. `4,8,12,16`.
        #[arg(long, value_delimiter = ',')]
        sweep: Option<Vec<usize>>,
        /// Largest final principal distance accepted as an orbit.
        #[arg(long)]
        gate: Option<f64>,
    },
    /// Density approximants and their bounds as CSV.
    DensitySweep {
        #[command(flatten)]
        common: Common,
    },
    /// Searches for invariant subspaces with equal restriction models outside a common orbit.
    Counterexample {
        #[command(flatten)]
        common: Common,
        /// Jordan block sizes of the nilpotent operator.
        #[arg(long, value_delimiter = ',', default_value = "2,1")]
        blocks: Vec<usize>,
        /// Integer range of generator entries; 0 enumerates lattice elements only.
        #[arg(long, default_value_t = 1)]
        resolution: i64,
        /// Maximum number of pairs decided.
        #[arg(long, default_value_t = 100_000)]
        budget: usize,
        /// Stop after this many witnesses.
        #[arg(long, default_value_t = 1)]
        max_witnesses: usize,
    },
    /// Orbit verdicts in a similarity-conjugated ambient against the uniform one.
    CordiagDemo {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::JordanModel { common } => commands::jordan_model(&common),
        Command::VerifyOrbit { common, sweep, gate } => commands::verify_orbit(&common, sweep, gate),
        Command::DensitySweep { common } => commands::density_sweep(&common),
        Command::Counterexample { common, blocks, resolution, budget, max_witnesses } => {
            commands::counterexample(&common, blocks, resolution, budget, max_witnesses)
        }
        Command::CordiagDemo { common } => commands::cordiag_demo(&common),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
