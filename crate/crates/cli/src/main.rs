//! `mintplan`: plan, simulate and check coin minting schedules.
//!
//! Exit codes: 0 optimal or pass, 1 usage or internal error, 2 infeasible or
//! failed check.

mod export;
mod oracle;
mod output;
mod simulate;
mod solve;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mintplan_core::{HeuristicOrder, MintError, PlannerOptions};
use thiserror::Error;

#[derive(Parser)]
#[command(name = "mintplan", version, about = "Minimum-cost coin minting plans")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one scenario and print orders, shift levels, cost and K.
    Solve(solve::SolveArgs),
    /// Replay a history epoch by epoch and write the CSV report.
    Simulate(simulate::SimulateArgs),
    /// Compare branch and bound with exhaustive enumeration on random instances.
    Oracle(oracle::OracleArgs),
    /// Write the model of a scenario in LP text form.
    ExportLp(export::ExportArgs),
}

/// Planner switches shared by `solve` and `simulate`.
#[derive(Args, Debug, Clone)]
pub struct PlannerArgs {
    /// Run Procedure 1: fill the first quarter's base striking and blanking.
    #[arg(long)]
    proc1: bool,
    /// Run Procedure 2: postpone first-quarter extra shifts.
    #[arg(long)]
    proc2: bool,
    /// Order of the two procedures: proc2-proc1 or proc1-proc2.
    #[arg(long, default_value = "proc2-proc1", value_parser = parse_order)]
    heuristic_order: HeuristicOrder,
    /// Order unit in millions of coins.
    #[arg(long, default_value_t = 1.0, value_parser = parse_granularity)]
    granularity: f64,
    /// Procedure 1 keeps a re-solve only if the whole objective is unchanged.
    #[arg(long)]
    strict: bool,
    /// Keep continuous orders instead of rounding to whole units.
    #[arg(long)]
    relaxed: bool,
}

impl PlannerArgs {
    fn options(&self) -> PlannerOptions {
        let mut opts = PlannerOptions {
            proc1: self.proc1,
            proc2: self.proc2,
            order: self.heuristic_order,
            strict: self.strict,
            relaxed: self.relaxed,
            ..PlannerOptions::default()
        };
        opts.integerize.granularity = self.granularity;
        opts
    }
}

fn parse_order(s: &str) -> Result<HeuristicOrder, String> {
    s.parse().map_err(|e: MintError| e.to_string())
}

fn parse_granularity(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(g) if g > 0.0 && g.is_finite() => Ok(g),
        _ => Err(format!("`{s}` is not a positive number")),
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] MintError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// No feasible plan, or a failed check.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 2,
            _ => 1,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Solve(args) => solve::run(&args),
        Command::Simulate(args) => simulate::run(&args),
        Command::Oracle(args) => oracle::run(&args),
        Command::ExportLp(args) => export::run(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mintplan: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
