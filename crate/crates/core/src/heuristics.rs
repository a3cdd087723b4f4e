//! First-quarter refinements applied after the exact solve.
//!
//! Procedure 1 tries to fill the base striking and blanking capacity of the
//! first quarter without raising the shift cost. Procedure 2 tries to move
//! first-quarter extra shifts to later quarters, accepting any feasible
//! result. Both re-solve the model with extra rows and chain the rows they
//! accept.
//!
//! ```
//! use mintplan_core::model::parse_scenario;
//! use mintplan_core::{plan, PlannerOptions};
//!
//! let doc = parse_scenario(include_str!("../../cli/fixtures/slack.json"))?;
//! let opts = PlannerOptions { proc2: false, ..PlannerOptions::default() };
//! let refined = plan(&doc.scenario, &doc.mint_config, &opts)?;
//! let first: f64 = refined.solution.first_order().unwrap().iter().sum();
//! assert_eq!(first, doc.mint_config.striking.base());
//! assert_eq!(refined.solution.cost, 0.0);
//! # Ok::<(), mintplan_core::MintError>(())
//! ```

use serde::Serialize;

use crate::bnb::{integerize, solve, IntegerizeOptions, SolveOptions};
use crate::costs::usage;
use crate::error::{MintError, Result};
use crate::mip::{InjectedConstraint, InjectionKind};
use crate::model::{effective_ladder, MintConfig, Process, Scenario, Solution};

/// Slack below which a guard counts as not firing.
const GUARD_TOL: f64 = 1e-6;
/// Tolerance of Procedure 1's cost comparison.
pub const COST_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HeuristicOrder {
    /// Procedure 2, then Procedure 1.
    PostponeFirst,
    /// Procedure 1, then Procedure 2.
    FillFirst,
}

impl std::str::FromStr for HeuristicOrder {
    type Err = MintError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "proc2-proc1" | "postpone-first" => Ok(HeuristicOrder::PostponeFirst),
            "proc1-proc2" | "fill-first" => Ok(HeuristicOrder::FillFirst),
            _ => Err(MintError::Parse(format!(
                "unknown heuristic order `{s}` (expected proc2-proc1 or proc1-proc2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct PlannerOptions {
    pub solve: SolveOptions,
    pub integerize: IntegerizeOptions,
    /// Skip the integer repair and keep continuous orders.
    pub relaxed: bool,
    pub proc1: bool,
    pub proc2: bool,
    pub order: HeuristicOrder,
    /// Procedure 1 compares the whole objective `cost - K` instead of the
    /// shift cost alone.
    pub strict: bool,
}

impl Default for PlannerOptions {
    fn default() -> Self {
        PlannerOptions {
            solve: SolveOptions::default(),
            integerize: IntegerizeOptions::default(),
            relaxed: false,
            proc1: true,
            proc2: true,
            order: HeuristicOrder::PostponeFirst,
            strict: false,
        }
    }
}

/// Solves one scenario with a growing list of injected rows.
#[derive(Debug, Clone, Copy)]
pub struct Planner<'a> {
    pub scenario: &'a Scenario,
    pub cfg: &'a MintConfig,
    pub opts: &'a PlannerOptions,
}

impl Planner<'_> {
    /// Exact solve followed by integer repair.
    pub fn solve(&self, injected: &[InjectedConstraint]) -> Result<Solution> {
        let sol = solve(self.scenario, self.cfg, injected, &self.opts.solve)?;
        if self.opts.relaxed {
            return Ok(sol);
        }
        integerize(&sol, self.scenario, self.cfg, injected, &self.opts.solve, &self.opts.integerize)
    }

    /// Like [`Planner::solve`], but an unrepairable model counts as infeasible.
    fn try_solve(&self, injected: &[InjectedConstraint]) -> Result<Option<Solution>> {
        match self.solve(injected) {
            Ok(sol) if sol.is_optimal() => Ok(Some(sol)),
            Ok(_) | Err(MintError::RepairInfeasible { .. }) => Ok(None),
            Err(e) => Err(e),
        }
    }

    fn first_usage(&self, sol: &Solution, process: Process) -> f64 {
        let order = sol.first_order().expect("optimal solutions have a first order");
        usage(order, &self.scenario.coin_specs).expect("order matches denominations").get(process)
    }

    /// Whether an accepted striking fill still holds for `sol`. Whole-unit
    /// orders cannot meet a blanking fill exactly, so only striking is held.
    fn keeps_fills(&self, sol: &Solution, accepted: &[InjectedConstraint]) -> bool {
        accepted
            .iter()
            .filter(|c| c.quarter == 0 && c.kind == InjectionKind::ForceBaseStriking)
            .all(|_| self.first_usage(sol, Process::Striking) >= self.first_base(Process::Striking) - GUARD_TOL)
    }

    fn first_base(&self, process: Process) -> f64 {
        effective_ladder(self.cfg, &self.scenario.disruptions, 0, process).base()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Procedure {
    Fill,
    Postpone,
}

impl Procedure {
    pub fn number(self) -> u8 {
        match self {
            Procedure::Fill => 1,
            Procedure::Postpone => 2,
        }
    }
}

/// One guarded step of a procedure.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeuristicStep {
    pub procedure: Procedure,
    pub process: Process,
    /// First-quarter usage when the guard was evaluated.
    pub usage: f64,
    /// Base capacity the guard compared against.
    pub base: f64,
    pub fired: bool,
    pub accepted: bool,
    pub cost_before: f64,
    /// Shift cost of the re-solved model, `None` when it was infeasible or
    /// the guard did not fire.
    pub cost_after: Option<f64>,
}

/// A solution together with the rows that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Refined {
    pub solution: Solution,
    pub injected: Vec<InjectedConstraint>,
    pub log: Vec<HeuristicStep>,
}

impl Refined {
    pub fn new(solution: Solution) -> Self {
        Refined {
            solution,
            injected: Vec::new(),
            log: Vec::new(),
        }
    }

    /// Whether `procedure` accepted a re-solve for `process`.
    pub fn accepted(&self, procedure: Procedure, process: Process) -> bool {
        self.log
            .iter()
            .any(|s| s.procedure == procedure && s.process == process && s.accepted)
    }
}

fn step(planner: &Planner, state: &mut Refined, procedure: Procedure, process: Process, kind: InjectionKind) -> Result<()> {
    let usage = planner.first_usage(&state.solution, process);
    let base = planner.first_base(process);
    let fired = match procedure {
        Procedure::Fill => usage < base - GUARD_TOL,
        Procedure::Postpone => usage > base + GUARD_TOL,
    };
    let mut entry = HeuristicStep {
        procedure,
        process,
        usage,
        base,
        fired,
        accepted: false,
        cost_before: state.solution.cost,
        cost_after: None,
    };
    if fired {
        let mut injected = state.injected.clone();
        injected.push(InjectedConstraint::first_quarter(kind));
        if let Some(candidate) = planner.try_solve(&injected)? {
            entry.cost_after = Some(candidate.cost);
            entry.accepted = match procedure {
                Procedure::Fill if planner.opts.strict => {
                    (candidate.objective - state.solution.objective).abs() <= COST_TOL
                }
                Procedure::Fill => (candidate.cost - state.solution.cost).abs() <= COST_TOL,
                Procedure::Postpone => true,
            } && planner.keeps_fills(&candidate, &state.injected);
            if entry.accepted {
                state.solution = candidate;
                state.injected = injected;
            }
        }
    }
    state.log.push(entry);
    Ok(())
}

/// Fills the first quarter's base striking, then base blanking capacity,
/// keeping each re-solve only if the shift cost is unchanged.
pub fn procedure1(planner: &Planner, state: Refined) -> Result<Refined> {
    let mut state = state;
    if !state.solution.is_optimal() {
        return Ok(state);
    }
    step(planner, &mut state, Procedure::Fill, Process::Striking, InjectionKind::ForceBaseStriking)?;
    step(planner, &mut state, Procedure::Fill, Process::Blanking, InjectionKind::ForceBaseBlanking)?;
    Ok(state)
}

/// Forbids first-quarter extra striking, blanking and annealing in turn,
/// keeping each re-solve that stays feasible.
pub fn procedure2(planner: &Planner, state: Refined) -> Result<Refined> {
    let mut state = state;
    if !state.solution.is_optimal() {
        return Ok(state);
    }
    step(planner, &mut state, Procedure::Postpone, Process::Striking, InjectionKind::ForbidExtraStriking)?;
    step(planner, &mut state, Procedure::Postpone, Process::Blanking, InjectionKind::ForbidExtraBlanking)?;
    step(planner, &mut state, Procedure::Postpone, Process::Annealing, InjectionKind::ForbidExtraAnnealing)?;
    Ok(state)
}

type ProcedureFn = fn(&Planner, Refined) -> Result<Refined>;

/// Solve, repair and refine one scenario.
pub fn plan(s: &Scenario, cfg: &MintConfig, opts: &PlannerOptions) -> Result<Refined> {
    let planner = Planner {
        scenario: s,
        cfg,
        opts,
    };
    let mut state = Refined::new(planner.solve(&[])?);
    let sequence: [(bool, ProcedureFn); 2] = match opts.order {
        HeuristicOrder::PostponeFirst => [(opts.proc2, procedure2), (opts.proc1, procedure1)],
        HeuristicOrder::FillFirst => [(opts.proc1, procedure1), (opts.proc2, procedure2)],
    };
    for (enabled, procedure) in sequence {
        if enabled {
            state = procedure(&planner, state)?;
        }
    }
    Ok(state)
}
