use std::fmt::Write as _;
use std::path::PathBuf;

use clap::Args;
use mintplan_core::bnb::diagnose_infeasible;
use mintplan_core::heuristics::HeuristicStep;
use mintplan_core::model::read_scenario;
use mintplan_core::{plan, Escalation, MintError, Process, Refined, ScenarioDocument};
use serde::Serialize;

use crate::output::emit;
use crate::{CliError, PlannerArgs};

#[derive(Args, Debug)]
pub struct SolveArgs {
    /// Scenario JSON file.
    scenario: PathBuf,
    #[command(flatten)]
    planner: PlannerArgs,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Serialize)]
struct EscalationReport {
    quarter: usize,
    process: Process,
    min_level: usize,
    cost_delta: f64,
}

impl From<&Escalation> for EscalationReport {
    fn from(e: &Escalation) -> Self {
        EscalationReport {
            quarter: e.quarter,
            process: e.process,
            min_level: e.min_level,
            cost_delta: e.cost_delta,
        }
    }
}

#[derive(Serialize)]
struct SolveReport<'a> {
    status: &'static str,
    cost: f64,
    k: f64,
    objective: f64,
    denominations: Vec<&'a str>,
    orders: &'a [Vec<f64>],
    inventory: &'a [Vec<f64>],
    blanking_levels: &'a [usize],
    annealing_levels: &'a [usize],
    striking_levels: &'a [usize],
    heuristics: &'a [HeuristicStep],
    escalations: Vec<EscalationReport>,
}

impl<'a> SolveReport<'a> {
    fn new(doc: &'a ScenarioDocument, r: &'a Refined) -> Self {
        let sol = &r.solution;
        SolveReport {
            status: "optimal",
            cost: sol.cost,
            k: sol.k,
            objective: sol.objective,
            denominations: doc.scenario.coin_specs.iter().map(|c| c.id.as_str()).collect(),
            orders: &sol.plan.orders,
            inventory: &sol.plan.inventory,
            blanking_levels: &sol.shifts.blanking,
            annealing_levels: &sol.shifts.annealing,
            striking_levels: &sol.shifts.striking,
            heuristics: &r.log,
            escalations: sol.escalations.iter().map(EscalationReport::from).collect(),
        }
    }

    fn text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "status: {}", self.status);
        let _ = writeln!(s, "cost: {}", self.cost);
        let _ = writeln!(s, "K: {}", self.k);
        let _ = writeln!(s, "objective: {}", self.objective);
        let _ = writeln!(s, "orders:");
        let _ = writeln!(s, "  quarter,{}", self.denominations.join(","));
        for (t, row) in self.orders.iter().enumerate() {
            let _ = writeln!(s, "  {t},{}", join(row));
        }
        let _ = writeln!(s, "inventory:");
        for (t, row) in self.inventory.iter().enumerate() {
            let _ = writeln!(s, "  {t},{}", join(row));
        }
        let _ = writeln!(s, "shift levels:");
        let _ = writeln!(s, "  quarter,blanking,annealing,striking");
        for t in 0..self.orders.len() {
            let _ = writeln!(
                s,
                "  {t},{},{},{}",
                self.blanking_levels[t], self.annealing_levels[t], self.striking_levels[t]
            );
        }
        if !self.heuristics.is_empty() {
            let _ = writeln!(s, "heuristics:");
            for step in self.heuristics {
                let verdict = match (step.fired, step.accepted) {
                    (false, _) => "guard false".to_string(),
                    (true, true) => format!("accepted, cost {}", step.cost_after.unwrap_or(step.cost_before)),
                    (true, false) => match step.cost_after {
                        Some(c) => format!("rejected, cost would be {c}"),
                        None => "rejected, infeasible".to_string(),
                    },
                };
                let _ = writeln!(
                    s,
                    "  procedure {} {}: usage {} of base {}: {verdict}",
                    step.procedure.number(),
                    step.process,
                    step.usage,
                    step.base
                );
            }
        }
        for e in &self.escalations {
            let _ = writeln!(
                s,
                "escalation: quarter {} {} to level {} (+{})",
                e.quarter, e.process, e.min_level, e.cost_delta
            );
        }
        s
    }
}

fn join(row: &[f64]) -> String {
    row.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
}

fn infeasible(doc: &ScenarioDocument, args: &SolveArgs) -> Result<CliError, CliError> {
    let opts = args.planner.options();
    let label = diagnose_infeasible(&doc.scenario, &doc.mint_config, &[], &opts.solve.build)?;
    Ok(CliError::Failed(match label {
        Some(l) => format!(
            "infeasible: first violated constraint family `{}` in quarter {}",
            l.family.tag(),
            l.quarter.unwrap_or(0)
        ),
        None => "infeasible: no shift selection admits a plan".to_string(),
    }))
}

pub fn run(args: &SolveArgs) -> Result<(), CliError> {
    let doc = read_scenario(&args.scenario)?;
    let refined = match plan(&doc.scenario, &doc.mint_config, &args.planner.options()) {
        Ok(r) if r.solution.is_optimal() => r,
        Ok(_) => return Err(infeasible(&doc, args)?),
        Err(e @ MintError::RepairInfeasible { .. }) => {
            return Err(CliError::Failed(format!("infeasible in whole units: {e}")));
        }
        Err(e) => return Err(e.into()),
    };
    let report = SolveReport::new(&doc, &refined);
    let text = if args.json {
        let mut j = serde_json::to_string_pretty(&report).expect("reports always serialize");
        j.push('\n');
        j
    } else {
        report.text()
    };
    emit(&text, args.out.as_deref())
}
