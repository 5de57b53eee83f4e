use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod format;

use config::{Overrides, RangeSpec, ScenarioConfig, Threshold};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 1,
        }
    }
}

/// Full-duplex decode-and-forward relay: closed-form curves and Monte Carlo.
#[derive(Parser, Debug)]
#[command(name = "fdr", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form CDFs and PDFs over the SNR grid, as CSV.
    Analytic {
        #[command(flatten)]
        scenario: ScenarioArgs,
        /// Append the printed and corrected ISDF upper-branch CDFs.
        #[arg(long)]
        audit_isdf: bool,
    },
    /// Monte Carlo run: one ecdf_<PROTO>.csv per protocol plus summary.txt.
    Simulate {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
    /// Average SNR and cooperation percentage against rate, as CSV.
    Sweep {
        #[command(flatten)]
        scenario: ScenarioArgs,
    },
}

#[derive(Args, Debug)]
struct ScenarioArgs {
    /// Scenario file of `key = value` lines; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Mean S->D gain in dB [default: 10]
    #[arg(long, allow_hyphen_values = true)]
    pi_sd_db: Option<f64>,
    /// Mean S->R gain in dB [default: 20]
    #[arg(long, allow_hyphen_values = true)]
    pi_sr_db: Option<f64>,
    /// Mean R->D gain in dB [default: 20]
    #[arg(long, allow_hyphen_values = true)]
    pi_rd_db: Option<f64>,
    /// Mean residual self-interference gain in dB [default: 10]
    #[arg(long, allow_hyphen_values = true)]
    pi_rr_db: Option<f64>,
    /// Relay transmit power relative to the source [default: 1]
    #[arg(long)]
    relay_power: Option<f64>,
    /// Source rate in bits/s/Hz
    #[arg(long, conflicts_with = "gamma_th_db")]
    rate: Option<f64>,
    /// Outage threshold in dB [default: 5]
    #[arg(long, allow_hyphen_values = true)]
    gamma_th_db: Option<f64>,
    /// Block length L in symbols [default: 20]
    #[arg(long)]
    block_len: Option<usize>,
    /// Relay processing delay D in symbols [default: 2]
    #[arg(long)]
    delay: Option<usize>,
    /// Blocks per protocol and rate [default: 1000000]
    #[arg(long)]
    blocks: Option<u64>,
    /// Master seed [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; results do not depend on it [default: all cores]
    #[arg(long)]
    workers: Option<usize>,
    /// Comma-separated protocols for simulate: DT,SDF,ISDF,NSFDR [default: DT,SDF,ISDF]
    #[arg(long, value_delimiter = ',')]
    protocols: Option<Vec<fdr_core::ProtocolKind>>,
    /// SNR grid min:max:step in dB; min may be -inf for a single point [default: -40:50:0.1]
    #[arg(long, allow_hyphen_values = true, value_parser = RangeSpec::parse)]
    grid: Option<RangeSpec>,
    /// Rates min:max:step in bits/s/Hz, or a single rate
    #[arg(long, value_parser = RangeSpec::parse)]
    rates: Option<RangeSpec>,
    /// Output file (analytic, sweep; stdout if absent) or directory (simulate)
    #[arg(long)]
    out: Option<PathBuf>,
}

impl ScenarioArgs {
    fn resolve(self) -> Result<ScenarioConfig, CliError> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        let threshold = match (self.rate, self.gamma_th_db) {
            (Some(r), _) => Some(Threshold::Rate(r)),
            (None, Some(g)) => Some(Threshold::GammaDb(g)),
            (None, None) => None,
        };
        let flags = Overrides {
            pi_sd_db: self.pi_sd_db,
            pi_sr_db: self.pi_sr_db,
            pi_rd_db: self.pi_rd_db,
            pi_rr_db: self.pi_rr_db,
            relay_power: self.relay_power,
            threshold,
            block_len: self.block_len,
            delay: self.delay,
            blocks: self.blocks,
            seed: self.seed,
            workers: self.workers,
            protocols: self.protocols,
            grid: self.grid,
            rates: self.rates,
            out: self.out,
        };
        ScenarioConfig::resolve(file.overlay(flags))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Analytic {
            scenario,
            audit_isdf,
        } => commands::analytic(&scenario.resolve()?, audit_isdf),
        Command::Simulate { scenario } => commands::simulate_cmd(&scenario.resolve()?),
        Command::Sweep { scenario } => commands::sweep(&scenario.resolve()?),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fdr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
