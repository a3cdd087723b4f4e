use clap::Args;
use mintplan_core::mip::ObjectiveMode;
use mintplan_core::oracle::{run_trials, InstanceShape};

use crate::CliError;

/// Largest objective gap between the two solvers that still passes.
const PASS_TOL: f64 = 1e-6;

#[derive(Args, Debug)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 50)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    quarters: usize,
    #[arg(long, default_value_t = 2)]
    denominations: usize,
    /// Extra blanking levels.
    #[arg(long, default_value_t = 2)]
    nc: usize,
    /// Extra striking levels.
    #[arg(long, default_value_t = 2)]
    na: usize,
}

pub fn run(args: &OracleArgs) -> Result<(), CliError> {
    let shape = InstanceShape {
        quarters: args.quarters,
        denominations: args.denominations,
        blanking_levels: args.nc,
        striking_levels: args.na,
    };
    shape.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if args.trials == 0 {
        eprintln!("warning: no trials requested; the check passes vacuously");
    }
    let report = run_trials(&shape, args.trials, args.seed)?;
    let weighted = report.trials.iter().filter(|t| t.mode == ObjectiveMode::Weighted).count();
    let passed = report.passed(PASS_TOL);
    println!(
        "shape: quarters={} denominations={} nc={} na={} binaries={}",
        shape.quarters,
        shape.denominations,
        shape.blanking_levels,
        shape.striking_levels,
        shape.binaries()
    );
    println!(
        "trials: {} seed={} infeasible={} weighted={} lexicographic={}",
        report.trials.len(),
        args.seed,
        report.infeasible(),
        weighted,
        report.trials.len() - weighted
    );
    println!("max deviation: {:e}", report.max_deviation);
    println!("result: {}", if passed { "pass" } else { "fail" });
    if passed {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "objective deviation {:e} exceeds {PASS_TOL:e}",
            report.max_deviation
        )))
    }
}
