//! `ledgerlotto` — scenario-driven front end for the lottery-economics
//! simulator. Exit codes: 0 on success, 2 on configuration or validation
//! errors, 3 on output I/O failures.

mod commands;
mod scenario;
mod svg;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub enum CliError {
    /// Bad scenario, bad flag values, or a domain-validation failure. Exit 2.
    Config(String),
    /// Failure writing output artifacts. Exit 3.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(msg) | CliError::Io(msg) => f.write_str(msg),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Topology {
    Chain,
    Star,
    Independent,
}

impl Topology {
    fn name(self) -> &'static str {
        match self {
            Topology::Chain => "chain",
            Topology::Star => "star",
            Topology::Independent => "independent",
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ledgerlotto",
    version,
    about = "Lottery economics on bricks-and-mortar vs distributed-ledger rails",
    after_help = "Exit codes: 0 success, 2 configuration/validation error, 3 I/O failure."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep expected gains over strategy sizes; write CSV and SVG
    GainCurve {
        /// Scenario file (TOML)
        #[arg(long)]
        scenario: PathBuf,
        /// Output directory for gain_curve.csv and gain_curve.svg
        #[arg(long)]
        out: PathBuf,
    },
    /// Smallest strictly profitable strategy size per friction profile
    BreakEven {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Monte Carlo cross-check of the closed form at one strategy size
    Oracle {
        #[arg(long)]
        scenario: PathBuf,
        /// Player ticket count to simulate
        #[arg(long)]
        n: u64,
        /// Override the scenario's oracle seed
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Attack-incentive bounds: isolated vs CDS-amplified
    Incentive {
        #[arg(long)]
        scenario: PathBuf,
    },
    /// Push a synthetic dependent-transaction cascade through the ledger
    CascadeDemo {
        #[arg(long)]
        scenario: PathBuf,
        /// Dependency shape of the generated transactions
        #[arg(long, value_enum)]
        topology: Topology,
        /// Number of transactions in the cascade
        #[arg(long)]
        count: u64,
    },
    /// Run one seeded smart-contract lottery end to end and dump the chain
    LedgerLottery {
        #[arg(long)]
        scenario: PathBuf,
        /// Player ticket count to purchase on the contract
        #[arg(long)]
        n: u64,
        /// Override the scenario's oracle seed
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GainCurve { scenario, out } => {
            let artifact = commands::cmd_gain_curve(&scenario, &out)?;
            for curve in &artifact.curves {
                let crossing = curve
                    .break_even
                    .map_or_else(|| "none".to_string(), |n| n.to_string());
                println!("{} ({}): break-even {}", curve.label, curve.color, crossing);
            }
            println!("wrote {}", artifact.csv_path.display());
            println!("wrote {}", artifact.svg_path.display());
            Ok(())
        }
        Command::BreakEven { scenario } => commands::cmd_break_even(&scenario),
        Command::Oracle { scenario, n, seed } => commands::cmd_oracle(&scenario, n, seed),
        Command::Incentive { scenario } => commands::cmd_incentive(&scenario),
        Command::CascadeDemo {
            scenario,
            topology,
            count,
        } => commands::cmd_cascade_demo(&scenario, topology, count),
        Command::LedgerLottery { scenario, n, seed } => {
            commands::cmd_ledger_lottery(&scenario, n, seed)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
