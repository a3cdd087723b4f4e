//! Brute-force reference for [`crate::bnb::solve_mip`]: every 0/1 assignment
//! of the level columns is fixed in turn and the remaining LP is solved.
//!
//! With the binaries fixed the shift cost is a constant, so each LP only
//! maximizes `K`. The best assignment minimizes `cost - K` in the weighted
//! mode and `(cost, -K)` lexicographically otherwise.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bnb::{solve_mip_with, BnbOptions};
use crate::error::{MintError, Result};
use crate::lpsolve::{solve_lp_with, LpOptions, LpStatus};
use crate::mip::{build, ObjectiveMode, StandardFormProblem};
use crate::model::{CoinSpec, MintConfig, Scenario, SolveStatus, StepLadder};

/// Largest number of binaries the oracle will enumerate.
pub const MAX_ORACLE_BINARIES: usize = 12;

const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub status: SolveStatus,
    pub objective: f64,
    pub cost: f64,
    pub k: f64,
    /// Binary assignments whose LP was feasible.
    pub feasible_assignments: usize,
}

pub fn exhaustive(p: &StandardFormProblem) -> Result<OracleOutcome> {
    let binaries = p.binary_columns();
    if binaries.len() > MAX_ORACLE_BINARIES {
        return Err(MintError::InvalidProblem(format!(
            "{} binaries exceed the oracle cap of {MAX_ORACLE_BINARIES}",
            binaries.len()
        )));
    }
    let mut lp = p.relaxation();
    lp.objective = vec![0.0; p.columns.len()];
    lp.objective[p.layout.reserve()] = -1.0;
    let cost_of = p.cost_objective();
    let opts = LpOptions::default();
    let mut best: Option<(f64, f64)> = None;
    let mut feasible = 0;
    for mask in 0u32..(1 << binaries.len()) {
        let mut cost = 0.0;
        for (bit, &col) in binaries.iter().enumerate() {
            let v = f64::from((mask >> bit) & 1);
            lp.lower[col] = v;
            lp.upper[col] = v;
            cost += cost_of[col] * v;
        }
        let r = solve_lp_with(&lp, &opts)?;
        if r.status != LpStatus::Optimal {
            continue;
        }
        feasible += 1;
        let k = -r.objective;
        let better = match best {
            None => true,
            Some((bc, bk)) => match p.mode {
                ObjectiveMode::Weighted => cost - k < bc - bk - TIE_TOL,
                ObjectiveMode::Lexicographic => cost < bc - TIE_TOL || (cost <= bc + TIE_TOL && k > bk + TIE_TOL),
            },
        };
        if better {
            best = Some((cost, k));
        }
    }
    Ok(match best {
        Some((cost, k)) => OracleOutcome {
            status: SolveStatus::Optimal,
            objective: cost - k,
            cost,
            k,
            feasible_assignments: feasible,
        },
        None => OracleOutcome {
            status: SolveStatus::Infeasible,
            objective: f64::INFINITY,
            cost: f64::INFINITY,
            k: 0.0,
            feasible_assignments: 0,
        },
    })
}

/// Size of a random oracle instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InstanceShape {
    pub quarters: usize,
    pub denominations: usize,
    /// Extra blanking levels (`nc`).
    pub blanking_levels: usize,
    /// Extra striking levels (`na`).
    pub striking_levels: usize,
}

impl Default for InstanceShape {
    fn default() -> Self {
        InstanceShape {
            quarters: 2,
            denominations: 2,
            blanking_levels: 2,
            striking_levels: 2,
        }
    }
}

impl InstanceShape {
    pub fn binaries(&self) -> usize {
        self.quarters * (self.blanking_levels + self.striking_levels + 1)
    }

    pub fn validate(&self) -> Result<()> {
        if self.quarters == 0 || self.denominations == 0 || self.blanking_levels == 0 || self.striking_levels == 0 {
            return Err(MintError::InvalidProblem("instance dimensions must be positive".into()));
        }
        if self.binaries() > MAX_ORACLE_BINARIES {
            return Err(MintError::InvalidProblem(format!(
                "2^{} binary assignments exceed the oracle cap of 2^{MAX_ORACLE_BINARIES}",
                self.binaries()
            )));
        }
        Ok(())
    }
}

/// Extra-shift cost increment. Coarse costs are multiples of 5, which keeps
/// every gap between cost totals above `k_max` and selects the weighted
/// objective.
fn step_cost<R: Rng>(rng: &mut R, coarse: bool) -> f64 {
    if coarse {
        5.0 * f64::from(rng.random_range(1u8..4))
    } else {
        rng.random_range(3.0..12.0)
    }
}

fn ladder<R: Rng>(rng: &mut R, base: f64, levels: usize, coarse: bool) -> StepLadder {
    let mut breakpoints = vec![base];
    let mut costs = Vec::with_capacity(levels);
    let mut cost = 0.0;
    for _ in 0..levels {
        let last = *breakpoints.last().expect("non-empty");
        breakpoints.push(last + base * rng.random_range(0.1..0.3));
        cost += step_cost(rng, coarse);
        costs.push(cost);
    }
    StepLadder::new(breakpoints, costs)
}

/// Small scenario whose demand sometimes fits base capacity, sometimes needs
/// extra shifts and occasionally cannot be met at all.
pub fn random_instance<R: Rng>(rng: &mut R, shape: &InstanceShape) -> (Scenario, MintConfig) {
    let (t, n) = (shape.quarters, shape.denominations);
    let z0 = rng.random_range(80.0..120.0);
    let coarse = rng.random_bool(0.5);
    let coin_specs: Vec<CoinSpec> = (0..n)
        .map(|d| {
            let weight = if rng.random_bool(0.3) { 0.0 } else { rng.random_range(0.3..1.2) };
            CoinSpec::new(format!("c{d}"), weight, rng.random_range(0.05..0.15))
        })
        .collect();
    let avg_rate = coin_specs.iter().map(|c| c.blanking_rate).sum::<f64>() / n as f64;
    let avg_weight = coin_specs.iter().map(|c| c.alloy_weight).sum::<f64>() / n as f64;
    let x0 = z0 * avg_rate * rng.random_range(0.7..1.1);
    let y0 = (z0 * avg_weight * rng.random_range(0.6..1.1)).max(1.0);
    let cfg = MintConfig::new(
        ladder(rng, x0, shape.blanking_levels, coarse),
        y0,
        y0 * rng.random_range(1.2..1.5),
        step_cost(rng, coarse),
        ladder(rng, z0, shape.striking_levels, coarse),
    );
    let demand: Vec<Vec<f64>> = (0..t)
        .map(|_| (0..n).map(|_| z0 * rng.random_range(0.5..1.3) / n as f64).collect())
        .collect();
    let operating_floor: Vec<Vec<f64>> = demand
        .iter()
        .map(|row| row.iter().map(|p| p * rng.random_range(0.2..0.6)).collect())
        .collect();
    let safety_min = operating_floor[t - 1].iter().map(|f| f * rng.random_range(0.2..0.5)).collect();
    let initial_inventory = operating_floor[0].iter().map(|f| f * rng.random_range(0.5..1.5)).collect();
    let s = Scenario {
        horizon: t,
        coin_specs,
        demand,
        operating_floor,
        vault_cap: z0 * rng.random_range(1.5..3.0),
        safety_min,
        initial_inventory,
        disruptions: Vec::new(),
    };
    (s, cfg)
}

/// Outcome of one oracle comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct Trial {
    pub status: SolveStatus,
    pub mode: ObjectiveMode,
    pub mip_objective: f64,
    pub oracle_objective: f64,
    /// Zero when both sides agree on infeasibility; infinite when they
    /// disagree on status.
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub trials: Vec<Trial>,
    pub max_deviation: f64,
}

impl OracleReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }

    pub fn infeasible(&self) -> usize {
        self.trials.iter().filter(|t| t.status == SolveStatus::Infeasible).count()
    }
}

pub fn compare(s: &Scenario, cfg: &MintConfig, bnb: &BnbOptions) -> Result<Trial> {
    let p = build(s, cfg, &[])?;
    let mip = solve_mip_with(&p, bnb)?;
    let oracle = exhaustive(&p)?;
    let deviation = match (mip.status, oracle.status) {
        (SolveStatus::Optimal, SolveStatus::Optimal) => (mip.objective - oracle.objective).abs(),
        (SolveStatus::Infeasible, SolveStatus::Infeasible) => 0.0,
        _ => f64::INFINITY,
    };
    Ok(Trial {
        status: oracle.status,
        mode: p.mode,
        mip_objective: mip.objective,
        oracle_objective: oracle.objective,
        deviation,
    })
}

/// Runs `trials` seeded random instances through both solvers.
pub fn run_trials(shape: &InstanceShape, trials: usize, seed: u64) -> Result<OracleReport> {
    shape.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let bnb = BnbOptions::default();
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let (s, cfg) = random_instance(&mut rng, shape);
        out.push(compare(&s, &cfg, &bnb)?);
    }
    let max_deviation = out.iter().map(|t| t.deviation).fold(0.0, f64::max);
    Ok(OracleReport {
        trials: out,
        max_deviation,
    })
}
