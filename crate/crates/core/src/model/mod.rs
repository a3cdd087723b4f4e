//! Domain types shared by every stage of the planner.
//!
//! Quantities use fixed units throughout: coin counts in millions, alloy
//! weights in tons, blanking time in working days, money in an arbitrary
//! currency unit. Quarters are indexed from zero; quarter 0 is the first
//! quarter of a planning horizon and `initial_inventory` is the stock on hand
//! before it.

pub(crate) mod json;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{MintError, Result};

pub use json::{parse_scenario, read_scenario, scenario_to_json, ScenarioDocument};

/// The three minting processes that carry extra-shift costs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Process {
    Blanking,
    Annealing,
    Striking,
}

impl Process {
    pub const ALL: [Process; 3] = [Process::Blanking, Process::Annealing, Process::Striking];

    /// Position in [`Process::ALL`].
    pub fn index(self) -> usize {
        match self {
            Process::Blanking => 0,
            Process::Annealing => 1,
            Process::Striking => 2,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Process::Blanking => "blanking",
            Process::Annealing => "annealing",
            Process::Striking => "striking",
        }
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Process {
    type Err = MintError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blanking" => Ok(Process::Blanking),
            "annealing" => Ok(Process::Annealing),
            "striking" => Ok(Process::Striking),
            other => Err(MintError::UnknownProcess(other.to_string())),
        }
    }
}

/// Physical parameters of one denomination.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinSpec {
    pub id: String,
    /// Tons of copper alloy per million coins; zero for mono-metallic coins.
    pub alloy_weight: f64,
    /// Working days of blanking per million coins.
    pub blanking_rate: f64,
}

impl CoinSpec {
    pub fn new(id: impl Into<String>, alloy_weight: f64, blanking_rate: f64) -> Self {
        CoinSpec {
            id: id.into(),
            alloy_weight,
            blanking_rate,
        }
    }
}

/// A step-cost ladder: usage up to `breakpoints[0]` is free, usage in
/// `(breakpoints[i-1], breakpoints[i]]` costs `costs[i-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepLadder {
    pub breakpoints: Vec<f64>,
    pub costs: Vec<f64>,
}

impl StepLadder {
    pub fn new(breakpoints: Vec<f64>, costs: Vec<f64>) -> Self {
        StepLadder { breakpoints, costs }
    }

    /// Number of extra-shift levels above the base level.
    pub fn levels(&self) -> usize {
        self.costs.len()
    }

    pub fn base(&self) -> f64 {
        self.breakpoints[0]
    }

    pub fn max_capacity(&self) -> f64 {
        *self.breakpoints.last().expect("ladder has at least one breakpoint")
    }

    /// Capacity reached when extra level `level` is active (0 = base).
    pub fn capacity(&self, level: usize) -> f64 {
        self.breakpoints[level]
    }

    /// Cost of running at `level` (0 = base, which is free).
    pub fn level_cost(&self, level: usize) -> f64 {
        if level == 0 {
            0.0
        } else {
            self.costs[level - 1]
        }
    }

    pub fn scaled(&self, factor: f64) -> StepLadder {
        StepLadder {
            breakpoints: self.breakpoints.iter().map(|b| b * factor).collect(),
            costs: self.costs.clone(),
        }
    }

    fn violations(&self, name: &str, out: &mut Vec<String>) {
        if self.breakpoints.is_empty() {
            out.push(format!("{name}: no breakpoints"));
            return;
        }
        if self.breakpoints.iter().any(|b| !b.is_finite() || *b < 0.0) {
            out.push(format!("{name}: breakpoints must be finite and non-negative"));
        }
        if self.breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            out.push(format!("{name}: breakpoints must be strictly increasing"));
        }
        if self.costs.len() + 1 != self.breakpoints.len() {
            out.push(format!(
                "{name}: {} breakpoints need {} costs, found {}",
                self.breakpoints.len(),
                self.breakpoints.len().saturating_sub(1),
                self.costs.len()
            ));
        }
        if self.costs.iter().any(|c| !c.is_finite() || *c < 0.0) {
            out.push(format!("{name}: costs must be finite and non-negative"));
        }
        if self.costs.windows(2).any(|w| w[0] > w[1]) {
            out.push(format!("{name}: costs must be non-decreasing"));
        }
    }
}

/// Capacity breakpoints and extra-shift costs of the mint.
#[derive(Debug, Clone, PartialEq)]
pub struct MintConfig {
    /// Working-day thresholds `x_0 < ... < x_nc` and costs `C_1..C_nc`.
    pub blanking: StepLadder,
    /// Alloy tonnage `(y_0, y_1)` and the single cost `H`.
    pub annealing: StepLadder,
    /// Coin-count thresholds `z_0 < ... < z_na` and costs `A_1..A_na`.
    pub striking: StepLadder,
}

impl MintConfig {
    pub fn new(blanking: StepLadder, annealing_base: f64, annealing_max: f64, annealing_cost: f64, striking: StepLadder) -> Self {
        MintConfig {
            blanking,
            annealing: StepLadder::new(vec![annealing_base, annealing_max], vec![annealing_cost]),
            striking,
        }
    }

    pub fn ladder(&self, process: Process) -> &StepLadder {
        match process {
            Process::Blanking => &self.blanking,
            Process::Annealing => &self.annealing,
            Process::Striking => &self.striking,
        }
    }

    pub fn levels(&self, process: Process) -> usize {
        self.ladder(process).levels()
    }

    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.blanking.violations("mint_config.blanking", &mut out);
        self.annealing.violations("mint_config.annealing", &mut out);
        if self.annealing.breakpoints.len() != 2 {
            out.push("mint_config.annealing: exactly one extra level (base, max) is supported".into());
        }
        self.striking.violations("mint_config.striking", &mut out);
        out
    }
}

/// A capacity reduction of one process in one quarter.
#[derive(Debug, Clone, PartialEq)]
pub struct Disruption {
    pub quarter: usize,
    pub process: Process,
    /// Multiplier in `[0, 1]` applied to every breakpoint of the process.
    pub scale: f64,
}

/// Everything the planner needs to know about one planning horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub horizon: usize,
    pub coin_specs: Vec<CoinSpec>,
    /// Forecast demand, `horizon` rows of one entry per denomination.
    pub demand: Vec<Vec<f64>>,
    /// Minimum stock to hold at the end of each quarter.
    pub operating_floor: Vec<Vec<f64>>,
    pub vault_cap: f64,
    /// Terminal inventory floor per denomination, scaled by `K`.
    pub safety_min: Vec<f64>,
    pub initial_inventory: Vec<f64>,
    pub disruptions: Vec<Disruption>,
}

impl Scenario {
    pub fn denominations(&self) -> usize {
        self.coin_specs.len()
    }
}

fn check_nonneg(name: &str, value: f64, out: &mut Vec<String>) {
    if !value.is_finite() || value < 0.0 {
        out.push(format!("{name} must be finite and non-negative, got {value}"));
    }
}

fn check_matrix(name: &str, m: &[Vec<f64>], rows: usize, cols: usize, out: &mut Vec<String>) {
    if m.len() != rows {
        out.push(format!("{name} dimensions: expected {rows} rows (quarters), found {}", m.len()));
    }
    for (t, row) in m.iter().enumerate() {
        if row.len() != cols {
            out.push(format!(
                "{name} dimensions: quarter {t} has {} entries, expected {cols}",
                row.len()
            ));
        }
        for (d, v) in row.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                out.push(format!("{name}[quarter {t}][denomination {d}] must be finite and non-negative, got {v}"));
            }
        }
    }
}

fn check_vector(name: &str, v: &[f64], len: usize, out: &mut Vec<String>) {
    if v.len() != len {
        out.push(format!("{name} dimensions: expected {len} entries, found {}", v.len()));
    }
    for (d, x) in v.iter().enumerate() {
        if !x.is_finite() || *x < 0.0 {
            out.push(format!("{name}[denomination {d}] must be finite and non-negative, got {x}"));
        }
    }
}

/// Lists every violated scenario invariant. An empty list means the scenario
/// is well formed.
pub fn validate_scenario(s: &Scenario) -> Vec<String> {
    let mut out = Vec::new();
    let t = s.horizon;
    let d = s.coin_specs.len();
    if t == 0 {
        out.push("horizon must be at least 1 quarter".into());
    }
    if d == 0 {
        out.push("denominations: at least one denomination is required".into());
    }
    let mut seen = HashSet::new();
    for (i, spec) in s.coin_specs.iter().enumerate() {
        if !seen.insert(spec.id.as_str()) {
            out.push(format!("denominations[{i}]: duplicate id `{}`", spec.id));
        }
        check_nonneg(&format!("denominations[{i}].alloy_weight"), spec.alloy_weight, &mut out);
        if !spec.blanking_rate.is_finite() || spec.blanking_rate <= 0.0 {
            out.push(format!(
                "denominations[{i}].blanking_rate must be positive, got {}",
                spec.blanking_rate
            ));
        }
    }
    check_matrix("demand", &s.demand, t, d, &mut out);
    check_matrix("operating_floor", &s.operating_floor, t, d, &mut out);
    check_nonneg("vault_cap", s.vault_cap, &mut out);
    check_vector("safety_min", &s.safety_min, d, &mut out);
    check_vector("initial_inventory", &s.initial_inventory, d, &mut out);
    let stock: f64 = s.initial_inventory.iter().sum();
    if s.vault_cap.is_finite() && stock > s.vault_cap {
        out.push(format!(
            "vault_cap: initial inventory {stock} exceeds vault capacity {}",
            s.vault_cap
        ));
    }
    for (i, dis) in s.disruptions.iter().enumerate() {
        if dis.quarter >= t {
            out.push(format!(
                "disruptions[{i}]: quarter {} outside horizon of {t}",
                dis.quarter
            ));
        }
        if !(0.0..=1.0).contains(&dis.scale) {
            out.push(format!(
                "disruptions[{i}]: capacity_scale {} not in [0, 1]",
                dis.scale
            ));
        }
    }
    out
}

/// Product of the capacity scales that apply to `(quarter, process)`.
pub fn capacity_scale(disruptions: &[Disruption], quarter: usize, process: Process) -> f64 {
    disruptions
        .iter()
        .filter(|d| d.quarter == quarter && d.process == process)
        .map(|d| d.scale)
        .product()
}

/// The ladder of `process` in `quarter` after applying disruptions.
pub fn effective_ladder(cfg: &MintConfig, disruptions: &[Disruption], quarter: usize, process: Process) -> StepLadder {
    let scale = capacity_scale(disruptions, quarter, process);
    if scale == 1.0 {
        cfg.ladder(process).clone()
    } else {
        cfg.ladder(process).scaled(scale)
    }
}

/// Breakpoints of `process` in quarter `t`, scaled by every disruption that
/// applies there.
pub fn effective_capacity(cfg: &MintConfig, s: &Scenario, t: usize, process: Process) -> Result<Vec<f64>> {
    if t >= s.horizon {
        return Err(MintError::QuarterOutOfRange {
            quarter: t,
            horizon: s.horizon,
        });
    }
    Ok(effective_ladder(cfg, &s.disruptions, t, process).breakpoints)
}

/// Quarterly minting orders and the inventory they produce.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct MintingPlan {
    pub orders: Vec<Vec<f64>>,
    pub inventory: Vec<Vec<f64>>,
}

impl MintingPlan {
    /// Builds a plan from orders, deriving inventories by the stock balance.
    pub fn from_orders(orders: Vec<Vec<f64>>, initial: &[f64], demand: &[Vec<f64>]) -> Self {
        let inventory = roll_inventory(&orders, initial, demand);
        MintingPlan { orders, inventory }
    }

    pub fn horizon(&self) -> usize {
        self.orders.len()
    }
}

/// `E_t = E_{t-1} + f_t - P_t` for every quarter.
pub fn roll_inventory(orders: &[Vec<f64>], initial: &[f64], demand: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut stock = initial.to_vec();
    orders
        .iter()
        .zip(demand)
        .map(|(f, p)| {
            for d in 0..stock.len() {
                stock[d] = stock[d] + f[d] - p[d];
            }
            stock.clone()
        })
        .collect()
}

/// Extra-shift level chosen per quarter and process; 0 is the base level.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShiftSelection {
    pub blanking: Vec<usize>,
    pub annealing: Vec<usize>,
    pub striking: Vec<usize>,
}

impl ShiftSelection {
    pub fn base(horizon: usize) -> Self {
        ShiftSelection {
            blanking: vec![0; horizon],
            annealing: vec![0; horizon],
            striking: vec![0; horizon],
        }
    }

    pub fn levels(&self, process: Process) -> &[usize] {
        match process {
            Process::Blanking => &self.blanking,
            Process::Annealing => &self.annealing,
            Process::Striking => &self.striking,
        }
    }

    pub fn levels_mut(&mut self, process: Process) -> &mut Vec<usize> {
        match process {
            Process::Blanking => &mut self.blanking,
            Process::Annealing => &mut self.annealing,
            Process::Striking => &mut self.striking,
        }
    }

    pub fn level(&self, process: Process, quarter: usize) -> usize {
        self.levels(process)[quarter]
    }

    /// Sum of the extra-shift costs implied by the selection.
    pub fn cost(&self, cfg: &MintConfig) -> f64 {
        Process::ALL
            .iter()
            .map(|&p| {
                self.levels(p)
                    .iter()
                    .map(|&l| cfg.ladder(p).level_cost(l))
                    .sum::<f64>()
            })
            .sum()
    }

    /// Number of quarters in which `process` runs above its base level.
    pub fn extended_count(&self, process: Process) -> usize {
        self.levels(process).iter().filter(|&&l| l > 0).count()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

/// A shift level that integer repair had to force upward.
#[derive(Debug, Clone, PartialEq)]
pub struct Escalation {
    pub quarter: usize,
    pub process: Process,
    pub min_level: usize,
    pub cost_delta: f64,
}

/// Result of planning one scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub status: SolveStatus,
    /// Extra-shift cost minus `k`.
    pub objective: f64,
    /// Extra-shift cost of the plan.
    pub cost: f64,
    pub k: f64,
    pub plan: MintingPlan,
    pub shifts: ShiftSelection,
    /// Shift escalations applied while restoring integral orders.
    pub escalations: Vec<Escalation>,
}

impl Solution {
    pub fn infeasible() -> Self {
        Solution {
            status: SolveStatus::Infeasible,
            objective: f64::INFINITY,
            cost: f64::INFINITY,
            k: 0.0,
            plan: MintingPlan::default(),
            shifts: ShiftSelection::default(),
            escalations: Vec::new(),
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }

    /// First-quarter order, which is the one a rolling plan executes.
    pub fn first_order(&self) -> Option<&[f64]> {
        self.plan.orders.first().map(Vec::as_slice)
    }
}
