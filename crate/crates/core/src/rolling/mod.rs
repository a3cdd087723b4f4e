//! Rolling-horizon replay: each quarter the plan is re-solved over a window
//! of 5, 4, 3 then 2 quarters, only its first order is executed, and stock
//! advances with the demand that actually materialized.

mod history;
mod report;
mod synthetic;

use crate::costs::{usage, ResourceUsage};
use crate::error::{MintError, Result};
use crate::heuristics::{plan, HeuristicStep, PlannerOptions, Procedure};
use crate::model::{effective_ladder, CoinSpec, Disruption, Escalation, MintConfig, Process, Scenario, StepLadder};

pub use history::{history_to_json, orders_to_json, parse_history, parse_orders, read_history, read_orders};
pub use report::{compare, write_csv, Comparison, QuarterNote};
pub use synthetic::{generate_synthetic, naive_baseline, synthetic_mint, Synthetic, SyntheticShape};

/// Planning window length by position in the yearly cycle.
pub const HORIZON_CYCLE: [usize; 4] = [5, 4, 3, 2];

/// Breakpoint tolerance when classifying executed usage into levels.
const LEVEL_TOL: f64 = 1e-7;

pub fn epoch_horizon(epoch: usize) -> usize {
    HORIZON_CYCLE[epoch % HORIZON_CYCLE.len()]
}

/// Information available when quarter `epoch` is planned.
#[derive(Debug, Clone, PartialEq)]
pub struct EpochInput {
    pub epoch: usize,
    /// Demand forecast for each quarter of the window. `None` plans with the
    /// realized demand of the coming quarters.
    pub forecast: Option<Vec<Vec<f64>>>,
    /// Operating floors for each quarter of the window.
    pub operating_floor: Vec<Vec<f64>>,
    /// Demand that materializes in this quarter.
    pub realized: Vec<f64>,
    /// Stock at the start of the quarter, checked against the replay when
    /// present.
    pub inventory: Option<Vec<f64>>,
    /// Capacity disruptions, with quarters relative to this epoch.
    pub disruptions: Vec<Disruption>,
}

/// Everything a replay needs.
#[derive(Debug, Clone, PartialEq)]
pub struct History {
    pub coin_specs: Vec<CoinSpec>,
    pub mint_config: MintConfig,
    pub vault_cap: f64,
    pub safety_min: Vec<f64>,
    pub initial_inventory: Vec<f64>,
    pub epochs: Vec<EpochInput>,
}

impl History {
    pub fn denominations(&self) -> usize {
        self.coin_specs.len()
    }

    /// Whether any epoch plans with realized instead of forecast demand.
    pub fn perfect_foresight(&self) -> bool {
        self.epochs.iter().any(|e| e.forecast.is_none())
    }

    /// Demand the planner sees at `epoch`: the forecast, or realized demand
    /// of the coming quarters with the last known quarter repeated past the
    /// end of the history.
    pub fn planning_demand(&self, epoch: usize) -> Vec<Vec<f64>> {
        let e = &self.epochs[epoch];
        if let Some(f) = &e.forecast {
            return f.clone();
        }
        let last = self.epochs.len() - 1;
        (0..epoch_horizon(epoch))
            .map(|i| self.epochs[(epoch + i).min(last)].realized.clone())
            .collect()
    }

    /// Structural problems of the history; inventory consistency is checked
    /// during the replay.
    pub fn violations(&self) -> Vec<String> {
        let mut out = self.mint_config.violations();
        let n = self.denominations();
        let vec_len = |name: &str, v: &[f64], out: &mut Vec<String>| {
            if v.len() != n {
                out.push(format!("{name}: expected {n} entries, found {}", v.len()));
            }
            if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
                out.push(format!("{name}: entries must be finite and non-negative"));
            }
        };
        if n == 0 {
            out.push("denominations: at least one denomination is required".into());
        }
        vec_len("safety_min", &self.safety_min, &mut out);
        vec_len("initial_inventory", &self.initial_inventory, &mut out);
        if self.epochs.is_empty() {
            out.push("epochs: at least one epoch is required".into());
        }
        for (i, e) in self.epochs.iter().enumerate() {
            if e.epoch != i {
                out.push(format!("epochs[{i}]: epoch index {} out of sequence", e.epoch));
            }
            let h = epoch_horizon(i);
            let matrix = |name: &str, m: &[Vec<f64>], out: &mut Vec<String>| {
                if m.len() != h {
                    out.push(format!("epochs[{i}].{name}: expected {h} rows for the window, found {}", m.len()));
                }
                for (t, row) in m.iter().enumerate() {
                    vec_len(&format!("epochs[{i}].{name}[{t}]"), row, out);
                }
            };
            if let Some(f) = &e.forecast {
                matrix("forecast", f, &mut out);
            }
            matrix("operating_floor", &e.operating_floor, &mut out);
            vec_len(&format!("epochs[{i}].realized_demand"), &e.realized, &mut out);
            for (j, d) in e.disruptions.iter().enumerate() {
                if d.quarter >= h || !(0.0..=1.0).contains(&d.scale) {
                    out.push(format!("epochs[{i}].disruptions[{j}]: quarter must be in the window and scale in [0, 1]"));
                }
            }
        }
        out
    }
}

/// How an epoch's executed order was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum EpochOutcome {
    Planned,
    /// The model was infeasible; a capacity-capped shortfall order was used.
    Fallback { reason: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub horizon: usize,
    pub order: Vec<f64>,
    /// Stock after the quarter's realized demand.
    pub inventory: Vec<f64>,
    /// Usage over effective base capacity, in percent, by [`Process::index`].
    pub utilization: [f64; 3],
    /// Cheapest shift levels covering the executed order.
    pub levels: [usize; 3],
    pub cost: f64,
    pub accumulated: f64,
    pub outcome: EpochOutcome,
    pub escalations: Vec<Escalation>,
    pub log: Vec<HeuristicStep>,
    /// Striking capacity was scaled down in this quarter.
    pub striking_disrupted: bool,
}

impl EpochRecord {
    pub fn utilization(&self, p: Process) -> f64 {
        self.utilization[p.index()]
    }

    pub fn level(&self, p: Process) -> usize {
        self.levels[p.index()]
    }

    pub fn accepted(&self, procedure: Procedure, process: Process) -> bool {
        self.log
            .iter()
            .any(|s| s.procedure == procedure && s.process == process && s.accepted)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimulationReport {
    pub denominations: Vec<String>,
    pub epochs: Vec<EpochRecord>,
    pub perfect_foresight: bool,
}

impl SimulationReport {
    pub fn horizons(&self) -> Vec<usize> {
        self.epochs.iter().map(|e| e.horizon).collect()
    }

    pub fn orders(&self) -> Vec<Vec<f64>> {
        self.epochs.iter().map(|e| e.order.clone()).collect()
    }

    pub fn total_cost(&self) -> f64 {
        self.epochs.last().map_or(0.0, |e| e.accumulated)
    }

    /// Quarters with an extra shift, by [`Process::index`].
    pub fn extended_counts(&self) -> [usize; 3] {
        let mut counts = [0; 3];
        for e in &self.epochs {
            for (c, &l) in counts.iter_mut().zip(&e.levels) {
                *c += usize::from(l > 0);
            }
        }
        counts
    }

    pub fn fallback_epochs(&self) -> Vec<usize> {
        self.epochs
            .iter()
            .filter(|e| matches!(e.outcome, EpochOutcome::Fallback { .. }))
            .map(|e| e.epoch)
            .collect()
    }
}

/// Shift levels and cost of one executed order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuarterCharge {
    pub usage: ResourceUsage,
    pub levels: [usize; 3],
    pub utilization: [f64; 3],
    pub cost: f64,
}

/// Charges `order` against the ladders of one quarter; usage above the last
/// breakpoint is reported as an error.
pub fn charge(order: &[f64], specs: &[CoinSpec], cfg: &MintConfig, disruptions: &[Disruption], quarter: usize) -> Result<QuarterCharge> {
    let u = usage(order, specs)?;
    let mut levels = [0; 3];
    let mut utilization = [0.0; 3];
    let mut cost = 0.0;
    for p in Process::ALL {
        let ladder = effective_ladder(cfg, disruptions, quarter, p);
        let amount = u.get(p);
        let level = ladder
            .breakpoints
            .iter()
            .position(|&b| amount <= b + LEVEL_TOL * (1.0 + b.abs()))
            .ok_or(MintError::CapacityExceeded {
                process: p,
                usage: amount,
                limit: ladder.max_capacity(),
                quarter: Some(quarter),
            })?;
        levels[p.index()] = level;
        utilization[p.index()] = if ladder.base() > 0.0 { amount / ladder.base() * 100.0 } else { 0.0 };
        cost += ladder.level_cost(level);
    }
    Ok(QuarterCharge {
        usage: u,
        levels,
        utilization,
        cost,
    })
}

fn max_scale(amount: f64, ladder: &StepLadder) -> f64 {
    if amount > ladder.max_capacity() {
        ladder.max_capacity() / amount
    } else {
        1.0
    }
}

/// Shortfall to the floor for one quarter, rounded up to `granularity` and
/// scaled down to the largest capacity of every process.
pub fn naive_order(
    inventory: &[f64],
    demand: &[f64],
    floor: &[f64],
    specs: &[CoinSpec],
    cfg: &MintConfig,
    disruptions: &[Disruption],
    granularity: f64,
) -> Vec<f64> {
    let round_up = |x: f64| (x / granularity - 1e-9).ceil().max(0.0) * granularity;
    let mut order: Vec<f64> = (0..inventory.len())
        .map(|d| round_up(floor[d] + demand[d] - inventory[d]))
        .collect();
    let u = usage(&order, specs).expect("order matches denominations");
    let scale = Process::ALL
        .into_iter()
        .map(|p| max_scale(u.get(p), &effective_ladder(cfg, disruptions, 0, p)))
        .fold(1.0, f64::min);
    if scale < 1.0 {
        for f in &mut order {
            *f = (*f * scale / granularity + 1e-9).floor() * granularity;
        }
    }
    order
}

fn inventory_matches(expected: &[f64], actual: &[f64]) -> bool {
    expected.len() == actual.len()
        && expected
            .iter()
            .zip(actual)
            .all(|(a, b)| (a - b).abs() <= 1e-6 * (1.0 + a.abs()))
}

/// Scenario solved at `epoch` given the stock on hand.
pub fn epoch_scenario(history: &History, epoch: usize, stock: &[f64]) -> Scenario {
    let e = &history.epochs[epoch];
    Scenario {
        horizon: epoch_horizon(epoch),
        coin_specs: history.coin_specs.clone(),
        demand: history.planning_demand(epoch),
        operating_floor: e.operating_floor.clone(),
        vault_cap: history.vault_cap,
        safety_min: history.safety_min.clone(),
        // A stockout is planned from empty shelves.
        initial_inventory: stock.iter().map(|x| x.max(0.0)).collect(),
        disruptions: e.disruptions.clone(),
    }
}

/// Replays `history`, planning every epoch with `opts`.
pub fn run_simulation(history: &History, opts: &PlannerOptions) -> Result<SimulationReport> {
    let violations = history.violations();
    if !violations.is_empty() {
        return Err(MintError::InvalidScenario(violations));
    }
    let cfg = &history.mint_config;
    let mut stock = history.initial_inventory.clone();
    let mut accumulated = 0.0;
    let mut epochs = Vec::with_capacity(history.epochs.len());
    for (i, e) in history.epochs.iter().enumerate() {
        if let Some(inv) = &e.inventory {
            if !inventory_matches(&stock, inv) {
                return Err(MintError::InconsistentHistory {
                    epoch: i,
                    reason: format!("recorded inventory {inv:?} differs from replayed {stock:?}"),
                });
            }
        }
        let s = epoch_scenario(history, i, &stock);
        let planned = match plan(&s, cfg, opts) {
            Ok(r) if r.solution.is_optimal() => Ok(r),
            Ok(_) => Err("model infeasible".to_string()),
            Err(
                err @ (MintError::RepairInfeasible { .. } | MintError::NodeLimit(_) | MintError::InvalidScenario(_)),
            ) => Err(err.to_string()),
            Err(err) => return Err(err),
        };
        let (order, outcome, escalations, log) = match planned {
            Ok(r) => (
                r.solution.first_order().expect("optimal").to_vec(),
                EpochOutcome::Planned,
                r.solution.escalations,
                r.log,
            ),
            Err(reason) => (
                naive_order(&s.initial_inventory, &s.demand[0], &s.operating_floor[0], &s.coin_specs, cfg, &s.disruptions, opts.integerize.granularity),
                EpochOutcome::Fallback { reason },
                Vec::new(),
                Vec::new(),
            ),
        };
        let c = charge(&order, &history.coin_specs, cfg, &e.disruptions, 0)?;
        for (d, x) in stock.iter_mut().enumerate() {
            *x = *x + order[d] - e.realized[d];
        }
        accumulated += c.cost;
        epochs.push(EpochRecord {
            epoch: i,
            horizon: s.horizon,
            order,
            inventory: stock.clone(),
            utilization: c.utilization,
            levels: c.levels,
            cost: c.cost,
            accumulated,
            outcome,
            escalations,
            log,
            striking_disrupted: crate::model::capacity_scale(&e.disruptions, 0, Process::Striking) < 1.0,
        });
    }
    Ok(SimulationReport {
        denominations: history.coin_specs.iter().map(|c| c.id.clone()).collect(),
        epochs,
        perfect_foresight: history.perfect_foresight(),
    })
}

/// The whole history as one scenario with realized demand and each epoch's
/// first-quarter floor; its optimum bounds the replay's cost from below.
pub fn monolithic_scenario(history: &History) -> Scenario {
    let n = history.epochs.len();
    Scenario {
        horizon: n,
        coin_specs: history.coin_specs.clone(),
        demand: history.epochs.iter().map(|e| e.realized.clone()).collect(),
        operating_floor: history.epochs.iter().map(|e| e.operating_floor[0].clone()).collect(),
        vault_cap: history.vault_cap,
        safety_min: history.safety_min.clone(),
        initial_inventory: history.initial_inventory.clone(),
        disruptions: history
            .epochs
            .iter()
            .flat_map(|e| {
                e.disruptions.iter().filter(|d| d.quarter == 0).map(move |d| Disruption {
                    quarter: e.epoch,
                    ..d.clone()
                })
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::roll_inventory;

    fn cfg() -> MintConfig {
        MintConfig::new(
            StepLadder::new(vec![10.0, 12.0], vec![5.0]),
            60.0,
            80.0,
            7.0,
            StepLadder::new(vec![100.0, 120.0, 140.0], vec![11.0, 20.0]),
        )
    }

    fn history(epochs: usize, demand: f64) -> History {
        let specs = vec![CoinSpec::new("a", 0.5, 0.05), CoinSpec::new("b", 0.0, 0.05)];
        History {
            coin_specs: specs,
            mint_config: cfg(),
            vault_cap: 400.0,
            safety_min: vec![5.0, 5.0],
            initial_inventory: vec![30.0, 30.0],
            epochs: (0..epochs)
                .map(|i| EpochInput {
                    epoch: i,
                    forecast: None,
                    operating_floor: vec![vec![demand / 6.0; 2]; epoch_horizon(i)],
                    realized: vec![demand / 2.0; 2],
                    inventory: None,
                    disruptions: vec![],
                })
                .collect(),
        }
    }

    #[test]
    fn horizon_cycle() {
        let h: Vec<usize> = (0..8).map(epoch_horizon).collect();
        assert_eq!(h, vec![5, 4, 3, 2, 5, 4, 3, 2]);
    }

    #[test]
    fn single_epoch_with_ample_capacity() {
        let h = history(1, 60.0);
        let r = run_simulation(&h, &PlannerOptions::default()).unwrap();
        assert_eq!(r.epochs.len(), 1);
        assert_eq!(r.total_cost(), 0.0);
        for d in 0..2 {
            assert!(r.epochs[0].inventory[d] >= h.epochs[0].operating_floor[0][d] - 1e-9);
        }
        assert!(r.perfect_foresight);
    }

    #[test]
    fn inventory_follows_realized_demand() {
        let mut h = history(8, 80.0);
        for (i, e) in h.epochs.iter_mut().enumerate() {
            e.forecast = Some(vec![vec![40.0 + i as f64, 40.0]; epoch_horizon(i)]);
        }
        let r = run_simulation(&h, &PlannerOptions::default()).unwrap();
        assert_eq!(r.horizons(), vec![5, 4, 3, 2, 5, 4, 3, 2]);
        let realized: Vec<Vec<f64>> = h.epochs.iter().map(|e| e.realized.clone()).collect();
        let expect = roll_inventory(&r.orders(), &h.initial_inventory, &realized);
        for (e, inv) in r.epochs.iter().zip(expect) {
            assert_eq!(e.inventory, inv);
        }
        assert!(!r.perfect_foresight);
    }

    #[test]
    fn recorded_inventory_is_checked() {
        let mut h = history(2, 60.0);
        h.epochs[1].inventory = Some(vec![0.0, 0.0]);
        assert!(matches!(
            run_simulation(&h, &PlannerOptions::default()),
            Err(MintError::InconsistentHistory { epoch: 1, .. })
        ));
    }

    #[test]
    fn disrupted_quarter_respects_scaled_capacity() {
        let mut h = history(3, 60.0);
        h.epochs[1].disruptions = vec![Disruption {
            quarter: 0,
            process: Process::Striking,
            scale: 0.6,
        }];
        let r = run_simulation(&h, &PlannerOptions::default()).unwrap();
        let struck: f64 = r.epochs[1].order.iter().sum();
        assert!(struck <= 0.6 * 140.0 + 1e-9);
        assert!(r.epochs[1].striking_disrupted);
    }

    #[test]
    fn infeasible_epoch_falls_back() {
        let mut h = history(2, 60.0);
        // Quarter 0 floors far beyond any capacity.
        h.epochs[0].operating_floor[0] = vec![200.0, 200.0];
        let r = run_simulation(&h, &PlannerOptions::default()).unwrap();
        assert_eq!(r.fallback_epochs(), vec![0]);
        let struck: f64 = r.epochs[0].order.iter().sum();
        assert!(struck <= 140.0 + 1e-9);
        assert_eq!(r.epochs[0].level(Process::Striking), 2);
    }

    #[test]
    fn utilization_exceeds_100_exactly_with_extra_level() {
        let h = history(6, 110.0);
        let r = run_simulation(&h, &PlannerOptions::default()).unwrap();
        for e in &r.epochs {
            for p in Process::ALL {
                assert_eq!(e.utilization(p) > 100.0 + 1e-6, e.level(p) > 0, "{e:?}");
            }
        }
        let acc: Vec<f64> = r.epochs.iter().map(|e| e.accumulated).collect();
        assert!(acc.windows(2).all(|w| w[1] >= w[0]));
    }

    #[test]
    fn naive_order_is_capped() {
        let specs = vec![CoinSpec::new("a", 0.0, 0.05)];
        let order = naive_order(&[0.0], &[300.0], &[10.0], &specs, &cfg(), &[], 1.0);
        assert_eq!(order, vec![140.0]);
        let order = naive_order(&[5.0], &[30.2], &[10.0], &specs, &cfg(), &[], 1.0);
        assert_eq!(order, vec![36.0]);
    }
}
