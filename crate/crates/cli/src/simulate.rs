use std::path::PathBuf;

use clap::Args;
use mintplan_core::rolling::{
    compare, generate_synthetic, history_to_json, naive_baseline, read_history, read_orders, run_simulation,
    write_csv, SyntheticShape,
};
use mintplan_core::History;

use crate::output::emit;
use crate::{CliError, PlannerArgs};

#[derive(Args, Debug)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["history", "synthetic"]))]
pub struct SimulateArgs {
    /// History JSON file.
    history: Option<PathBuf>,
    /// Generate the 21-quarter synthetic history from this seed instead.
    #[arg(long, value_name = "SEED")]
    synthetic: Option<u64>,
    /// Compare against `naive` shortfall orders or an order matrix JSON file.
    #[arg(long, value_name = "naive|PATH")]
    baseline: Option<String>,
    #[command(flatten)]
    planner: PlannerArgs,
    /// Also write the replayed history as JSON.
    #[arg(long, value_name = "PATH")]
    save_history: Option<PathBuf>,
    /// Write the CSV here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn baseline(spec: &str, history: &History, granularity: f64) -> Result<Vec<Vec<f64>>, CliError> {
    if spec == "naive" {
        return Ok(naive_baseline(history, granularity));
    }
    let path = PathBuf::from(spec);
    if !path.is_file() {
        return Err(CliError::Usage(format!("baseline file {} does not exist", path.display())));
    }
    Ok(read_orders(&path)?)
}

pub fn run(args: &SimulateArgs) -> Result<(), CliError> {
    let history = match (&args.history, args.synthetic) {
        (Some(path), _) => read_history(path)?,
        (None, Some(seed)) => generate_synthetic(seed, &SyntheticShape::default())?.history,
        (None, None) => unreachable!("clap requires a history source"),
    };
    // Resolve the baseline before the run so a bad path fails fast.
    let orders = args
        .baseline
        .as_deref()
        .map(|b| baseline(b, &history, args.planner.granularity))
        .transpose()?;
    if let Some(path) = &args.save_history {
        emit(&history_to_json(&history), Some(path))?;
    }
    let report = run_simulation(&history, &args.planner.options())?;
    let comparison = orders.map(|o| compare(&report, &history, &o)).transpose()?;
    emit(&write_csv(&report, comparison.as_ref()), args.out.as_deref())
}
