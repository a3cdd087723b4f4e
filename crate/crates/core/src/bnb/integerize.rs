//! Rounds a relaxed optimum to whole order units without touching the shift
//! selection.
//!
//! Quarters are rounded in order. Each first receives the units its floors
//! need, then units up to its cumulative relaxed total rounded down, given to
//! the denomination lagging furthest behind its relaxed cumulative
//! production. Remaining floor deficits are repaired one unit at a time,
//! largest first, placing the unit in the deficit quarter or the latest
//! earlier quarter with spare capacity. A deficit that only concerns the
//! terminal reserve lowers `K` instead. A floor deficit with no room anywhere
//! escalates one shift level and solves again.

use crate::costs::usage;
use crate::error::{MintError, Result};
use crate::mip::{InjectedConstraint, InjectionKind};
use crate::model::{effective_ladder, roll_inventory, Escalation, MintConfig, MintingPlan, Process, Scenario, Solution};

use super::{solve, SolveOptions};

const DEFICIT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy)]
pub struct IntegerizeOptions {
    /// Order unit in millions of coins, e.g. 1.0 or 0.1.
    pub granularity: f64,
    pub max_escalations: usize,
}

impl Default for IntegerizeOptions {
    fn default() -> Self {
        IntegerizeOptions {
            granularity: 1.0,
            max_escalations: 16,
        }
    }
}

/// Priority used when several processes block the same increment.
const BLOCKING_ORDER: [Process; 3] = [Process::Striking, Process::Blanking, Process::Annealing];

enum Blocked {
    Capacity(Vec<Process>),
    Vault,
}

struct Repair<'a> {
    s: &'a Scenario,
    /// Capacity at the selected level, per quarter and process.
    caps: Vec<[f64; 3]>,
    g: f64,
    orders: Vec<Vec<f64>>,
    inv: Vec<Vec<f64>>,
}

impl Repair<'_> {
    fn roll(&mut self) {
        self.inv = roll_inventory(&self.orders, &self.s.initial_inventory, &self.s.demand);
    }

    fn check(&self, t: usize, d: usize) -> Option<Blocked> {
        let mut order = self.orders[t].clone();
        order[d] += self.g;
        let u = usage(&order, &self.s.coin_specs).expect("order matches denominations");
        let over: Vec<Process> = BLOCKING_ORDER
            .into_iter()
            .filter(|&p| {
                let cap = self.caps[t][p.index()];
                u.get(p) > cap + 1e-9 * (1.0 + cap)
            })
            .collect();
        if !over.is_empty() {
            return Some(Blocked::Capacity(over));
        }
        let imax = self.s.vault_cap;
        let vault_full = self.inv[t..]
            .iter()
            .any(|row| row.iter().sum::<f64>() + self.g > imax + 1e-9 * (1.0 + imax));
        vault_full.then_some(Blocked::Vault)
    }

    fn add(&mut self, t: usize, d: usize) {
        self.orders[t][d] += self.g;
        self.roll();
    }

    fn units(&self, x: f64) -> f64 {
        (x / self.g + 1e-6).floor()
    }

    /// Whole units per quarter. Each quarter first gets what its floors
    /// need, then units up to its cumulative relaxed total rounded down, one
    /// at a time to the unblocked denomination furthest behind its relaxed
    /// cumulative production.
    fn round_quarters(&mut self, relaxed: &[Vec<f64>]) {
        let n = self.s.denominations();
        let mut cum_relaxed = vec![0.0; n];
        let mut relaxed_total = 0.0;
        let mut placed_total = 0.0;
        for (t, row) in relaxed.iter().enumerate() {
            for (c, f) in cum_relaxed.iter_mut().zip(row) {
                *c += f.max(0.0);
            }
            relaxed_total += row.iter().map(|f| f.max(0.0)).sum::<f64>();
            for d in 0..n {
                let before = if t == 0 { self.s.initial_inventory[d] } else { self.inv[t - 1][d] };
                let gap = self.s.operating_floor[t][d] - before + self.s.demand[t][d];
                let need = ((gap / self.g) - DEFICIT_TOL).ceil().max(0.0) as usize;
                for _ in 0..need {
                    if self.check(t, d).is_some() {
                        break;
                    }
                    self.add(t, d);
                }
            }
            let target = self.units(relaxed_total);
            let mut placed = placed_total + self.orders[t].iter().sum::<f64>() / self.g;
            let mut blocked = vec![false; n];
            while placed + 0.5 < target {
                let lag = |d: usize| cum_relaxed[d] - self.inv[t][d] - self.consumed(t, d);
                let Some(d) = (0..n)
                    .filter(|&d| !blocked[d])
                    .max_by(|&a, &b| lag(a).total_cmp(&lag(b)).then(b.cmp(&a)))
                else {
                    break;
                };
                if self.check(t, d).is_some() {
                    blocked[d] = true;
                    continue;
                }
                self.add(t, d);
                placed += 1.0;
            }
            placed_total = placed;
        }
    }

    /// Demand through quarter `t` less the starting stock, so that
    /// `inv + consumed` is the integer cumulative production.
    fn consumed(&self, t: usize, d: usize) -> f64 {
        self.s.demand[..=t].iter().map(|row| row[d]).sum::<f64>() - self.s.initial_inventory[d]
    }

    fn required(&self, t: usize, d: usize, k: f64) -> f64 {
        let floor = self.s.operating_floor[t][d];
        if t + 1 == self.s.horizon {
            floor.max(self.s.safety_min[d] * k)
        } else {
            floor
        }
    }

    /// Largest deficit, ties to the earliest quarter and lowest denomination.
    fn worst_deficit(&self, k: f64) -> Option<(usize, usize, f64)> {
        let mut worst: Option<(usize, usize, f64)> = None;
        for t in 0..self.s.horizon {
            for d in 0..self.s.denominations() {
                let gap = self.required(t, d, k) - self.inv[t][d];
                if gap > DEFICIT_TOL && worst.is_none_or(|(_, _, w)| gap > w) {
                    worst = Some((t, d, gap));
                }
            }
        }
        worst
    }
}

enum Outcome {
    Done(Solution),
    Escalate(InjectedConstraint),
}

fn repair(sol: &Solution, s: &Scenario, cfg: &MintConfig, g: f64) -> Result<Outcome> {
    let caps = (0..s.horizon)
        .map(|t| {
            let mut c = [0.0; 3];
            for p in Process::ALL {
                c[p.index()] = effective_ladder(cfg, &s.disruptions, t, p).capacity(sol.shifts.level(p, t));
            }
            c
        })
        .collect();
    let mut r = Repair {
        s,
        caps,
        g,
        orders: vec![vec![0.0; s.denominations()]; s.horizon],
        inv: Vec::new(),
    };
    r.roll();
    r.round_quarters(&sol.plan.orders);
    let mut k = sol.k;
    while let Some((t, d, _)) = r.worst_deficit(k) {
        if let Some(tp) = (0..=t).rev().find(|&tp| r.check(tp, d).is_none()) {
            r.add(tp, d);
            continue;
        }
        if r.inv[t][d] + DEFICIT_TOL >= s.operating_floor[t][d] {
            // Only the terminal reserve is short.
            let last = &r.inv[s.horizon - 1];
            k = s
                .safety_min
                .iter()
                .zip(last)
                .filter(|(&m, _)| m > 0.0)
                .map(|(&m, &e)| e / m)
                .fold(k, f64::min)
                .max(0.0);
            continue;
        }
        for tp in (0..=t).rev() {
            if let Some(Blocked::Capacity(over)) = r.check(tp, d) {
                if let Some(&process) = over.iter().find(|&&p| sol.shifts.level(p, tp) < cfg.levels(p)) {
                    return Ok(Outcome::Escalate(InjectedConstraint {
                        kind: InjectionKind::RequireLevel {
                            process,
                            min_level: sol.shifts.level(process, tp) + 1,
                        },
                        quarter: tp,
                    }));
                }
            }
        }
        return Err(MintError::RepairInfeasible {
            quarter: t,
            reason: format!("no capacity or vault room left for denomination {}", s.coin_specs[d].id),
        });
    }
    let plan = MintingPlan {
        orders: r.orders,
        inventory: r.inv,
    };
    Ok(Outcome::Done(Solution {
        status: sol.status,
        objective: sol.cost - k,
        cost: sol.cost,
        k,
        plan,
        shifts: sol.shifts.clone(),
        escalations: sol.escalations.clone(),
    }))
}

/// Whole-unit version of the relaxed optimum `sol`, which must come from
/// solving `s` with `injected`. Escalations, if any, are recorded on the
/// result with their cost increase.
pub fn integerize(
    sol: &Solution,
    s: &Scenario,
    cfg: &MintConfig,
    injected: &[InjectedConstraint],
    solve_opts: &SolveOptions,
    opts: &IntegerizeOptions,
) -> Result<Solution> {
    if !sol.is_optimal() {
        return Ok(sol.clone());
    }
    if !(opts.granularity > 0.0 && opts.granularity.is_finite()) {
        return Err(MintError::InvalidProblem(format!("granularity must be positive, got {}", opts.granularity)));
    }
    let mut current = sol.clone();
    let mut injected = injected.to_vec();
    for _ in 0..=opts.max_escalations {
        let extra = match repair(&current, s, cfg, opts.granularity)? {
            Outcome::Done(done) => return Ok(done),
            Outcome::Escalate(extra) => extra,
        };
        injected.push(extra);
        let mut next = solve(s, cfg, &injected, solve_opts)?;
        if !next.is_optimal() {
            return Err(MintError::RepairInfeasible {
                quarter: extra.quarter,
                reason: "escalated model is infeasible".into(),
            });
        }
        let InjectionKind::RequireLevel { process, min_level } = extra.kind else {
            unreachable!("repair only escalates levels")
        };
        next.escalations = current.escalations.clone();
        next.escalations.push(Escalation {
            quarter: extra.quarter,
            process,
            min_level,
            cost_delta: next.cost - current.cost,
        });
        current = next;
    }
    Err(MintError::RepairInfeasible {
        quarter: 0,
        reason: format!("more than {} escalations needed", opts.max_escalations),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::{assignment, build, check_solution};
    use crate::model::{CoinSpec, ShiftSelection, SolveStatus, StepLadder};

    fn one_coin(floor: f64, blanking_rate: f64) -> (Scenario, MintConfig) {
        let s = Scenario {
            horizon: 1,
            coin_specs: vec![CoinSpec::new("a", 0.0, blanking_rate)],
            demand: vec![vec![0.0]],
            operating_floor: vec![vec![floor]],
            vault_cap: 500.0,
            safety_min: vec![0.0],
            initial_inventory: vec![0.0],
            disruptions: vec![],
        };
        let cfg = MintConfig::new(
            StepLadder::new(vec![10.0, 14.0], vec![5.0]),
            60.0,
            90.0,
            7.0,
            StepLadder::new(vec![100.0, 120.0], vec![11.0]),
        );
        (s, cfg)
    }

    fn relaxed(f: f64) -> Solution {
        Solution {
            status: SolveStatus::Optimal,
            objective: 0.0,
            cost: 0.0,
            k: 0.0,
            plan: MintingPlan {
                orders: vec![vec![f]],
                inventory: vec![vec![f]],
            },
            shifts: ShiftSelection::base(1),
            escalations: vec![],
        }
    }

    fn run(sol: &Solution, s: &Scenario, cfg: &MintConfig) -> Result<Solution> {
        integerize(sol, s, cfg, &[], &SolveOptions::default(), &IntegerizeOptions::default())
    }

    #[test]
    fn rounds_up_only_when_a_floor_binds() {
        let (s, cfg) = one_coin(3.4, 0.01);
        assert_eq!(run(&relaxed(3.4), &s, &cfg).unwrap().plan.orders, vec![vec![4.0]]);
        let (s, cfg) = one_coin(3.0, 0.01);
        assert_eq!(run(&relaxed(3.4), &s, &cfg).unwrap().plan.orders, vec![vec![3.0]]);
    }

    #[test]
    fn integral_relaxation_is_unchanged() {
        let (s, cfg) = one_coin(7.0, 0.01);
        let sol = relaxed(7.0);
        let out = run(&sol, &s, &cfg).unwrap();
        assert_eq!(out.plan, sol.plan);
        assert_eq!(out.shifts, sol.shifts);
        assert_eq!(out.objective, sol.objective);
    }

    #[test]
    fn finer_granularity_keeps_tenths() {
        let (s, cfg) = one_coin(3.4, 0.01);
        let opts = IntegerizeOptions {
            granularity: 0.1,
            ..IntegerizeOptions::default()
        };
        let out = integerize(&relaxed(3.45), &s, &cfg, &[], &SolveOptions::default(), &opts).unwrap();
        assert!((out.plan.orders[0][0] - 3.4).abs() < 1e-9);
    }

    #[test]
    fn blocked_floor_escalates_blanking() {
        // 99.5 coins take 9.99975 days; 100 coins take 10.05 and need the
        // first blanking extension.
        let (s, cfg) = one_coin(99.5, 0.1005);
        let sol = solve(&s, &cfg, &[], &SolveOptions::default()).unwrap();
        assert_eq!(sol.shifts.blanking, vec![0]);
        let out = run(&sol, &s, &cfg).unwrap();
        assert_eq!(out.plan.orders, vec![vec![100.0]]);
        assert_eq!(out.shifts.blanking, vec![1]);
        assert_eq!(out.escalations.len(), 1);
        let e = &out.escalations[0];
        assert_eq!((e.quarter, e.process, e.min_level), (0, Process::Blanking, 1));
        assert!((e.cost_delta - 5.0).abs() < 1e-9);
        let p = build(&s, &cfg, &[]).unwrap();
        assert!(check_solution(&p, &assignment(&p, &out)).is_empty());
    }

    #[test]
    fn no_level_left_is_reported() {
        let (s, mut cfg) = one_coin(99.5, 0.1005);
        cfg.blanking = StepLadder::new(vec![10.0], vec![]);
        let sol = solve(&s, &cfg, &[], &SolveOptions::default()).unwrap();
        assert!(matches!(run(&sol, &s, &cfg), Err(MintError::RepairInfeasible { quarter: 0, .. })));
    }

    #[test]
    fn deficit_is_moved_to_an_earlier_quarter() {
        let (mut s, cfg) = one_coin(0.0, 0.01);
        s.horizon = 2;
        s.demand = vec![vec![0.0], vec![100.5]];
        s.operating_floor = vec![vec![0.0], vec![0.0]];
        let sol = Solution {
            plan: MintingPlan {
                orders: vec![vec![0.5], vec![100.0]],
                inventory: vec![vec![0.5], vec![0.0]],
            },
            shifts: ShiftSelection::base(2),
            ..relaxed(0.0)
        };
        let out = run(&sol, &s, &cfg).unwrap();
        assert_eq!(out.plan.orders, vec![vec![1.0], vec![100.0]]);
    }
}
