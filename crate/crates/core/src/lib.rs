//! Minimum-cost quarterly coin minting plans.
//!
//! A plan fixes per-denomination orders for each quarter of a short horizon.
//! Blanking, annealing and striking each have a base capacity covered by rent
//! and extra shift levels bought at a step cost. [`mip::build`] writes the
//! planning problem as a mixed-integer program, [`bnb`] solves it exactly and
//! rounds orders to whole units, [`heuristics`] refines the first quarter and
//! [`rolling`] replays a history epoch by epoch.
//!
//! ```
//! use mintplan_core::model::parse_scenario;
//! use mintplan_core::{plan, PlannerOptions};
//!
//! let doc = parse_scenario(include_str!("../../cli/fixtures/tiny.json"))?;
//! let refined = plan(&doc.scenario, &doc.mint_config, &PlannerOptions::default())?;
//! assert!(refined.solution.is_optimal());
//! assert_eq!(refined.solution.cost, 0.0);
//!
//! let infeasible = parse_scenario(include_str!("../../cli/fixtures/infeasible.json"))?;
//! let refined = plan(&infeasible.scenario, &infeasible.mint_config, &PlannerOptions::default())?;
//! assert!(!refined.solution.is_optimal());
//! # Ok::<(), mintplan_core::MintError>(())
//! ```

pub mod bnb;
pub mod costs;
pub mod error;
pub mod heuristics;
pub mod lpsolve;
pub mod mip;
pub mod model;
pub mod oracle;
pub mod rolling;

pub use bnb::{solve, SolveOptions};
pub use error::{MintError, Result};
pub use heuristics::{plan, HeuristicOrder, PlannerOptions, Refined};
pub use mip::{InjectedConstraint, InjectionKind, StandardFormProblem};
pub use model::{
    CoinSpec, Disruption, Escalation, MintConfig, MintingPlan, Process, Scenario, ScenarioDocument, ShiftSelection,
    Solution, SolveStatus, StepLadder,
};
pub use rolling::{History, SimulationReport};
