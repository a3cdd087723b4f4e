//! Seeded synthetic histories with seasonal demand, noisy forecasts and one
//! striking disruption, plus the naive shortfall baseline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{epoch_horizon, naive_order, EpochInput, History};
use crate::error::{MintError, Result};
use crate::model::{effective_ladder, CoinSpec, Disruption, MintConfig, Process, StepLadder};

/// Extra quarters of demand generated so the last forecast windows are full.
const HORIZON_TAIL: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticShape {
    pub quarters: usize,
    pub denominations: usize,
    /// Mean demand as a fraction of base striking capacity.
    pub mean_load: f64,
    /// Relative swing of the yearly demand cycle; peaks fall on quarters
    /// divisible by 4.
    pub amplitude: f64,
    /// Relative jitter of realized demand.
    pub demand_noise: f64,
    /// Relative forecast error one quarter ahead; grows with the square root
    /// of the lead time.
    pub forecast_noise: f64,
    /// Quarter and scale of a striking capacity cut.
    pub disruption: Option<(usize, f64)>,
}

impl Default for SyntheticShape {
    fn default() -> Self {
        SyntheticShape {
            quarters: 21,
            denominations: 7,
            mean_load: 0.9,
            amplitude: 0.25,
            demand_noise: 0.05,
            forecast_noise: 0.05,
            disruption: Some((10, 0.6)),
        }
    }
}

impl SyntheticShape {
    fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.quarters == 0 || self.denominations == 0 {
            out.push("quarters and denominations must be positive".into());
        }
        if !(self.mean_load > 0.0 && self.mean_load.is_finite()) {
            out.push(format!("mean_load must be positive, got {}", self.mean_load));
        }
        if !(0.0..1.0).contains(&self.amplitude) {
            out.push(format!("amplitude must be in [0, 1), got {}", self.amplitude));
        }
        for (name, v) in [("demand_noise", self.demand_noise), ("forecast_noise", self.forecast_noise)] {
            if !(0.0..0.5).contains(&v) {
                out.push(format!("{name} must be in [0, 0.5), got {v}"));
            }
        }
        if let Some((q, scale)) = self.disruption {
            if q >= self.quarters || !(scale > 0.0 && scale <= 1.0) {
                out.push(format!("disruption ({q}, {scale}) must fall inside the run with scale in (0, 1]"));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub history: History,
    /// Naive shortfall orders, one row per quarter.
    pub baseline: Vec<Vec<f64>>,
}

/// The mint every synthetic history runs on.
pub fn synthetic_mint() -> MintConfig {
    MintConfig::new(
        StepLadder::new(vec![60.0, 70.0, 80.0], vec![6.0, 11.0]),
        400.0,
        500.0,
        5.0,
        StepLadder::new(vec![700.0, 800.0, 900.0], vec![10.0, 18.0]),
    )
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Standard normal draw clipped to three deviations.
fn normal<R: Rng>(rng: &mut R) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    z.clamp(-3.0, 3.0)
}

/// Denominations whose base-capacity mix fills 95% of base blanking and 85%
/// of base annealing. The upper half is bimetallic.
fn coin_specs(n: usize, shares: &[f64], cfg: &MintConfig) -> Vec<CoinSpec> {
    let z0 = cfg.striking.base();
    let raw_rate: Vec<f64> = (0..n).map(|d| 0.07 + 0.04 * d as f64 / (n.max(2) - 1) as f64).collect();
    let raw_weight: Vec<f64> = (0..n).map(|d| if 2 * d >= n { 1.0 + d as f64 } else { 0.0 }).collect();
    let mix = |v: &[f64]| v.iter().zip(shares).map(|(x, s)| x * s).sum::<f64>() * z0;
    let rate_scale = 0.95 * cfg.blanking.base() / mix(&raw_rate);
    let weight_mix = mix(&raw_weight);
    let weight_scale = if weight_mix > 0.0 { 0.85 * cfg.annealing.base() / weight_mix } else { 0.0 };
    (0..n)
        .map(|d| {
            CoinSpec::new(
                format!("d{}", d + 1),
                (raw_weight[d] * weight_scale * 1e4).round() / 1e4,
                (raw_rate[d] * rate_scale * 1e5).round() / 1e5,
            )
        })
        .collect()
}

/// Orders that cover each quarter's realized demand plus its floor and no
/// more, limited by the largest capacity.
pub fn naive_baseline(history: &History, granularity: f64) -> Vec<Vec<f64>> {
    let mut stock = history.initial_inventory.clone();
    history
        .epochs
        .iter()
        .map(|e| {
            let order = naive_order(
                &stock,
                &e.realized,
                &e.operating_floor[0],
                &history.coin_specs,
                &history.mint_config,
                &e.disruptions,
                granularity,
            );
            for (d, x) in stock.iter_mut().enumerate() {
                *x = *x + order[d] - e.realized[d];
            }
            order
        })
        .collect()
}

/// Deterministic history and naive baseline for `seed`.
pub fn generate_synthetic(seed: u64, shape: &SyntheticShape) -> Result<Synthetic> {
    let violations = shape.violations();
    if !violations.is_empty() {
        return Err(MintError::InvalidScenario(violations));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = synthetic_mint();
    let n = shape.denominations;
    let z0 = cfg.striking.base();

    let raw: Vec<f64> = (0..n).map(|d| (n - d) as f64 * rng.random_range(0.8..1.2)).collect();
    let total: f64 = raw.iter().sum();
    let shares: Vec<f64> = raw.iter().map(|r| r / total).collect();
    let coin_specs = coin_specs(n, &shares, &cfg);

    // Forecast windows reach four quarters past the last epoch.
    let span = shape.quarters + HORIZON_TAIL;
    let demand: Vec<Vec<f64>> = (0..span)
        .map(|q| {
            let season = 1.0 + shape.amplitude * (std::f64::consts::FRAC_PI_2 * q as f64).cos();
            let level = z0 * shape.mean_load * season;
            shares
                .iter()
                .map(|s| round2((level * s * (1.0 + shape.demand_noise * normal(&mut rng))).max(0.0)))
                .collect()
        })
        .collect();

    let mut epochs = Vec::with_capacity(shape.quarters);
    for e in 0..shape.quarters {
        let h = epoch_horizon(e);
        let forecast: Vec<Vec<f64>> = (0..h)
            .map(|i| {
                let spread = shape.forecast_noise * ((i + 1) as f64).sqrt();
                demand[e + i]
                    .iter()
                    .map(|p| round2((p * (1.0 + spread * normal(&mut rng))).max(0.0)))
                    .collect()
            })
            .collect();
        let operating_floor = forecast.iter().map(|row| row.iter().map(|p| round2(p / 3.0)).collect()).collect();
        let disruptions = match shape.disruption {
            Some((q, scale)) if q == e => vec![Disruption {
                quarter: 0,
                process: Process::Striking,
                scale,
            }],
            _ => Vec::new(),
        };
        epochs.push(EpochInput {
            epoch: e,
            forecast: Some(forecast),
            operating_floor,
            realized: demand[e].clone(),
            inventory: None,
            disruptions,
        });
    }

    let mean: Vec<f64> = (0..n)
        .map(|d| demand[..shape.quarters].iter().map(|row| row[d]).sum::<f64>() / shape.quarters as f64)
        .collect();
    let history = History {
        coin_specs,
        mint_config: cfg,
        vault_cap: 1.5 * z0,
        safety_min: mean.iter().map(|m| round2(m / 6.0)).collect(),
        initial_inventory: demand[0].iter().map(|p| round2(p / 2.0)).collect(),
        epochs,
    };

    for e in &history.epochs {
        let u = crate::costs::usage(&e.realized, &history.coin_specs)?;
        for p in Process::ALL {
            let max = effective_ladder(&history.mint_config, &e.disruptions, 0, p).max_capacity();
            if u.get(p) > max {
                return Err(MintError::InvalidProblem(format!(
                    "quarter {}: realized {p} load {:.2} exceeds the largest capacity {max:.2}",
                    e.epoch,
                    u.get(p)
                )));
            }
        }
    }
    let baseline = naive_baseline(&history, 1.0);
    Ok(Synthetic { history, baseline })
}

#[cfg(test)]
mod tests {
    use super::super::history_to_json;
    use super::*;

    #[test]
    fn same_seed_same_bytes() {
        let a = generate_synthetic(42, &SyntheticShape::default()).unwrap();
        let b = generate_synthetic(42, &SyntheticShape::default()).unwrap();
        assert_eq!(history_to_json(&a.history), history_to_json(&b.history));
        assert_eq!(a.baseline, b.baseline);
        let c = generate_synthetic(43, &SyntheticShape::default()).unwrap();
        assert_ne!(history_to_json(&a.history), history_to_json(&c.history));
    }

    #[test]
    fn default_shape() {
        let s = generate_synthetic(1, &SyntheticShape::default()).unwrap();
        assert_eq!(s.history.epochs.len(), 21);
        assert_eq!(s.history.denominations(), 7);
        assert_eq!(s.baseline.len(), 21);
        assert!(s.history.violations().is_empty());
        assert_eq!(s.history.epochs[10].disruptions.len(), 1);
    }

    #[test]
    fn zero_noise_forecasts_equal_realized() {
        let shape = SyntheticShape {
            forecast_noise: 0.0,
            ..SyntheticShape::default()
        };
        let s = generate_synthetic(5, &shape).unwrap();
        for (i, e) in s.history.epochs.iter().enumerate() {
            let f = e.forecast.as_ref().unwrap();
            assert_eq!(f[0], e.realized);
            if i + 1 < s.history.epochs.len() {
                assert_eq!(f[1], s.history.epochs[i + 1].realized);
            }
        }
    }

    #[test]
    fn bad_shapes_are_rejected() {
        let bad = SyntheticShape {
            amplitude: 1.5,
            ..SyntheticShape::default()
        };
        assert!(generate_synthetic(0, &bad).is_err());
        let overload = SyntheticShape {
            mean_load: 2.0,
            ..SyntheticShape::default()
        };
        assert!(matches!(generate_synthetic(0, &overload), Err(MintError::InvalidProblem(_))));
    }

    #[test]
    fn baseline_meets_floors_when_capacity_allows() {
        let s = generate_synthetic(7, &SyntheticShape::default()).unwrap();
        let mut stock = s.history.initial_inventory.clone();
        for (e, order) in s.history.epochs.iter().zip(&s.baseline) {
            for d in 0..stock.len() {
                stock[d] += order[d] - e.realized[d];
            }
            assert!(stock.iter().all(|&x| x > -1e-9), "quarter {}", e.epoch);
        }
    }
}
