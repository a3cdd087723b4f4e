use std::path::PathBuf;

use clap::Args;
use mintplan_core::mip::{build, export_lp_text};
use mintplan_core::model::read_scenario;

use crate::output::emit;
use crate::CliError;

#[derive(Args, Debug)]
pub struct ExportArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    /// Write here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

pub fn run(args: &ExportArgs) -> Result<(), CliError> {
    let doc = read_scenario(&args.scenario)?;
    let p = build(&doc.scenario, &doc.mint_config, &[])?;
    emit(&export_lp_text(&p), args.out.as_deref())
}
