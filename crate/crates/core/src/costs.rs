//! Resource usage of a minting order and the step-cost functions of the
//! three processes.
//!
//! Every ladder is right-closed: usage exactly at a breakpoint is charged at
//! that breakpoint's level. Comparisons absorb [`BOUNDARY_TOL`] of round-off so
//! LP solutions sitting on a breakpoint are not pushed to the next level.

use std::ops::Add;

use crate::error::{MintError, Result};
use crate::model::{effective_ladder, CoinSpec, Disruption, MintConfig, MintingPlan, Process, ShiftSelection, StepLadder};

pub const BOUNDARY_TOL: f64 = 1e-9;

/// Resource needs of one quarter's order.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResourceUsage {
    pub blanking_days: f64,
    pub annealing_tons: f64,
    /// Millions of coins.
    pub striking_count: f64,
}

impl ResourceUsage {
    pub fn get(&self, process: Process) -> f64 {
        match process {
            Process::Blanking => self.blanking_days,
            Process::Annealing => self.annealing_tons,
            Process::Striking => self.striking_count,
        }
    }
}

impl Add for ResourceUsage {
    type Output = ResourceUsage;

    fn add(self, rhs: Self) -> Self {
        ResourceUsage {
            blanking_days: self.blanking_days + rhs.blanking_days,
            annealing_tons: self.annealing_tons + rhs.annealing_tons,
            striking_count: self.striking_count + rhs.striking_count,
        }
    }
}

pub fn usage(order: &[f64], specs: &[CoinSpec]) -> Result<ResourceUsage> {
    if order.len() != specs.len() {
        return Err(MintError::LengthMismatch {
            what: "order entries vs denominations",
            expected: specs.len(),
            actual: order.len(),
        });
    }
    let mut u = ResourceUsage::default();
    for (f, spec) in order.iter().zip(specs) {
        u.blanking_days += spec.blanking_rate * f;
        u.annealing_tons += spec.alloy_weight * f;
        u.striking_count += f;
    }
    Ok(u)
}

/// Smallest level whose breakpoint covers `amount`, or `None` beyond the
/// last breakpoint.
pub fn covering_level(amount: f64, ladder: &StepLadder) -> Option<usize> {
    ladder
        .breakpoints
        .iter()
        .position(|&b| amount <= b + BOUNDARY_TOL)
}

fn ladder_level(amount: f64, ladder: &StepLadder, process: Process, quarter: Option<usize>) -> Result<usize> {
    covering_level(amount, ladder).ok_or_else(|| MintError::CapacityExceeded {
        process,
        usage: amount,
        limit: ladder.max_capacity(),
        quarter,
    })
}

/// Step cost of `amount` units of `process` under `ladder`.
pub fn ladder_cost(amount: f64, ladder: &StepLadder, process: Process) -> Result<f64> {
    ladder_level(amount, ladder, process, None).map(|l| ladder.level_cost(l))
}

pub fn blanking_cost(days: f64, cfg: &MintConfig) -> Result<f64> {
    ladder_cost(days, &cfg.blanking, Process::Blanking)
}

pub fn annealing_cost(tons: f64, cfg: &MintConfig) -> Result<f64> {
    ladder_cost(tons, &cfg.annealing, Process::Annealing)
}

pub fn striking_cost(count: f64, cfg: &MintConfig) -> Result<f64> {
    ladder_cost(count, &cfg.striking, Process::Striking)
}

/// Cheapest shift levels that cover every quarter of `plan`.
pub fn minimal_shifts(plan: &MintingPlan, specs: &[CoinSpec], cfg: &MintConfig, disruptions: &[Disruption]) -> Result<ShiftSelection> {
    let mut shifts = ShiftSelection::base(plan.horizon());
    for (t, order) in plan.orders.iter().enumerate() {
        let u = usage(order, specs)?;
        for p in Process::ALL {
            let ladder = effective_ladder(cfg, disruptions, t, p);
            shifts.levels_mut(p)[t] = ladder_level(u.get(p), &ladder, p, Some(t))?;
        }
    }
    Ok(shifts)
}

/// Extra-shift cost of one quarter's order.
pub fn quarter_cost(order: &[f64], quarter: usize, specs: &[CoinSpec], cfg: &MintConfig, disruptions: &[Disruption]) -> Result<f64> {
    let u = usage(order, specs)?;
    let mut total = 0.0;
    for p in Process::ALL {
        let ladder = effective_ladder(cfg, disruptions, quarter, p);
        total += ladder.level_cost(ladder_level(u.get(p), &ladder, p, Some(quarter))?);
    }
    Ok(total)
}

/// Total extra-shift cost of a plan over its horizon.
pub fn plan_cost(plan: &MintingPlan, specs: &[CoinSpec], cfg: &MintConfig, disruptions: &[Disruption]) -> Result<f64> {
    plan.orders
        .iter()
        .enumerate()
        .map(|(t, order)| quarter_cost(order, t, specs, cfg, disruptions))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cfg() -> MintConfig {
        MintConfig::new(
            StepLadder::new(vec![10.0, 14.0, 18.0], vec![5.0, 9.0]),
            30.0,
            45.0,
            7.0,
            StepLadder::new(vec![100.0, 120.0, 140.0], vec![11.0, 20.0]),
        )
    }

    fn specs() -> Vec<CoinSpec> {
        vec![CoinSpec::new("a", 2.0, 0.1), CoinSpec::new("b", 0.0, 0.05)]
    }

    #[test]
    fn usage_of_zero_order_is_zero() {
        assert_eq!(usage(&[0.0, 0.0], &specs()).unwrap(), ResourceUsage::default());
    }

    #[test]
    fn usage_is_three_dot_products() {
        let u = usage(&[10.0, 20.0], &specs()).unwrap();
        assert!((u.blanking_days - 2.0).abs() < 1e-12);
        assert_eq!(u.annealing_tons, 20.0);
        assert_eq!(u.striking_count, 30.0);
    }

    #[test]
    fn usage_rejects_length_mismatch() {
        assert!(matches!(usage(&[1.0], &specs()), Err(MintError::LengthMismatch { .. })));
    }

    #[test]
    fn blanking_ladder() {
        let c = cfg();
        assert_eq!(blanking_cost(0.0, &c).unwrap(), 0.0);
        assert_eq!(blanking_cost(10.0, &c).unwrap(), 0.0);
        assert_eq!(blanking_cost(12.0, &c).unwrap(), 5.0);
        assert_eq!(blanking_cost(14.0, &c).unwrap(), 5.0);
        assert_eq!(blanking_cost(14.5, &c).unwrap(), 9.0);
        assert!(matches!(
            blanking_cost(18.5, &c),
            Err(MintError::CapacityExceeded { process: Process::Blanking, .. })
        ));
    }

    #[test]
    fn annealing_ladder() {
        let c = cfg();
        assert_eq!(annealing_cost(30.0, &c).unwrap(), 0.0);
        assert_eq!(annealing_cost(31.0, &c).unwrap(), 7.0);
        assert!(annealing_cost(46.0, &c).is_err());
    }

    #[test]
    fn striking_ladder() {
        let c = cfg();
        assert_eq!(striking_cost(99.0, &c).unwrap(), 0.0);
        assert_eq!(striking_cost(100.0, &c).unwrap(), 0.0);
        assert_eq!(striking_cost(130.0, &c).unwrap(), 20.0);
    }

    #[test]
    fn boundary_absorbs_round_off() {
        assert_eq!(striking_cost(100.0 + 1e-10, &cfg()).unwrap(), 0.0);
    }

    fn plan(orders: Vec<Vec<f64>>) -> MintingPlan {
        let t = orders.len();
        MintingPlan::from_orders(orders, &[100.0, 100.0], &vec![vec![0.0, 0.0]; t])
    }

    #[test]
    fn base_plan_costs_nothing() {
        let p = plan(vec![vec![10.0, 20.0], vec![5.0, 5.0]]);
        assert_eq!(plan_cost(&p, &specs(), &cfg(), &[]).unwrap(), 0.0);
        assert_eq!(minimal_shifts(&p, &specs(), &cfg(), &[]).unwrap(), ShiftSelection::base(2));
    }

    #[test]
    fn plan_cost_adds_quarters() {
        // q0: 12 blanking days (level 1, cost 5); q1: 130 coins in 6.5 days
        // (striking level 2, cost 20).
        let specs = vec![CoinSpec::new("a", 0.0, 1.2), CoinSpec::new("b", 0.0, 0.05)];
        let p = plan(vec![vec![10.0, 0.0], vec![0.0, 130.0]]);
        assert_eq!(plan_cost(&p, &specs, &cfg(), &[]).unwrap(), 25.0);
        let shifts = minimal_shifts(&p, &specs, &cfg(), &[]).unwrap();
        assert_eq!(shifts.blanking, vec![1, 0]);
        assert_eq!(shifts.striking, vec![0, 2]);
        assert_eq!(shifts.cost(&cfg()), 25.0);
    }

    #[test]
    fn disruption_makes_quarter_infeasible() {
        let p = plan(vec![vec![10.0, 20.0], vec![0.0, 75.0]]);
        let d = [Disruption {
            quarter: 1,
            process: Process::Striking,
            scale: 0.5,
        }];
        match plan_cost(&p, &specs(), &cfg(), &d) {
            Err(MintError::CapacityExceeded { quarter, process, .. }) => {
                assert_eq!(quarter, Some(1));
                assert_eq!(process, Process::Striking);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn minimal_level_examples() {
        assert_eq!(covering_level(12.0, &cfg().blanking), Some(1));
        assert_eq!(covering_level(100.0, &cfg().striking), Some(0));
        assert_eq!(covering_level(141.0, &cfg().striking), None);
    }

    proptest! {
        #[test]
        fn usage_is_linear(a in proptest::collection::vec(0.0..100.0f64, 2), b in proptest::collection::vec(0.0..100.0f64, 2)) {
            let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
            let lhs = usage(&sum, &specs()).unwrap();
            let rhs = usage(&a, &specs()).unwrap() + usage(&b, &specs()).unwrap();
            for p in Process::ALL {
                prop_assert!((lhs.get(p) - rhs.get(p)).abs() < 1e-9);
            }
        }

        #[test]
        fn costs_are_monotone(u in 0.0..140.0f64, v in 0.0..140.0f64) {
            let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
            let c = cfg();
            prop_assert!(striking_cost(lo, &c).unwrap() <= striking_cost(hi, &c).unwrap());
            prop_assert!(blanking_cost(lo / 10.0, &c).unwrap() <= blanking_cost(hi / 10.0, &c).unwrap());
            prop_assert!(annealing_cost(lo / 4.0, &c).unwrap() <= annealing_cost(hi / 4.0, &c).unwrap());
        }

        #[test]
        fn cost_is_constant_within_a_step(level in 0usize..3, a in 0.001..1.0f64, b in 0.001..1.0f64) {
            let c = cfg();
            let bp = &c.striking.breakpoints;
            let lo = if level == 0 { 0.0 } else { bp[level - 1] };
            let width = bp[level] - lo;
            prop_assert_eq!(
                striking_cost(lo + a * width, &c).unwrap(),
                striking_cost(lo + b * width, &c).unwrap()
            );
        }

        #[test]
        fn minimal_shifts_agree_with_plan_cost(orders in proptest::collection::vec(proptest::collection::vec(0.0..60.0f64, 2), 1..5)) {
            let p = plan(orders);
            let c = cfg();
            if let Ok(cost) = plan_cost(&p, &specs(), &c, &[]) {
                let shifts = minimal_shifts(&p, &specs(), &c, &[]).unwrap();
                prop_assert!((shifts.cost(&c) - cost).abs() < 1e-9);
                prop_assert_eq!(minimal_shifts(&p, &specs(), &c, &[]).unwrap(), shifts);
            }
        }
    }
}
