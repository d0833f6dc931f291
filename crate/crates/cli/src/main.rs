mod commands;
mod config;

use anyhow::Result;
use clap::{Parser, Subcommand};

use config::{CommonArgs, RunConfig};
use scmul_core::GateLibrary;

/// Stochastic multiplier simulator: bit-exact products, error sweeps and cost estimates.
#[derive(Debug, Parser)]
#[command(name = "scmul", version)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Multiply one operand pair and print the streams
    Mul {
        #[arg(short = 'x')]
        x: u64,
        #[arg(short = 'y')]
        y: u64,
    },
    /// Sweep operand pairs; writes pairs.csv and mae.csv
    Sweep,
    /// Error versus operand difference; writes hist.csv
    Hist,
    /// Structural cost comparison; writes cost.csv
    Cost {
        /// Count gates whose output is constant zero
        #[arg(long)]
        naive_counts: bool,
        /// Print the default gate library as JSON and exit
        #[arg(long)]
        print_gate_lib: bool,
    },
}

fn run(cli: Cli) -> Result<()> {
    if let Command::Cost { print_gate_lib: true, .. } = cli.command {
        println!("{}", GateLibrary::calibrated().to_json());
        return Ok(());
    }
    let cfg = RunConfig::resolve(&cli.common)?;
    if let Some(n) = cfg.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Mul { x, y } => commands::cmd_mul(&cfg, x, y, &mut stdout),
        Command::Sweep => commands::cmd_sweep(&cfg, &mut stdout),
        Command::Hist => commands::cmd_hist(&cfg, &mut stdout),
        Command::Cost { naive_counts, .. } => commands::cmd_cost(&cfg, naive_counts, &mut stdout),
    }
}

fn main() {
    if let Err(e) = run(Cli::parse()) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
