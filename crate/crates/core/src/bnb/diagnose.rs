//! Names the constraint family behind an infeasible model.

use crate::error::Result;
use crate::lpsolve::{solve_lp_with, LpOptions, LpStatus};
use crate::mip::{build_with, BuildOptions, InjectedConstraint, RowFamily, RowLabel};
use crate::model::{effective_ladder, MintConfig, Process, Scenario};

fn truncated(s: &Scenario, horizon: usize) -> Scenario {
    Scenario {
        horizon,
        demand: s.demand[..horizon].to_vec(),
        operating_floor: s.operating_floor[..horizon].to_vec(),
        disruptions: s.disruptions.iter().filter(|d| d.quarter < horizon).cloned().collect(),
        ..s.clone()
    }
}

fn relaxation_feasible(s: &Scenario, cfg: &MintConfig, injected: &[InjectedConstraint], build: &BuildOptions) -> Result<bool> {
    let p = build_with(s, cfg, injected, build)?;
    Ok(solve_lp_with(&p.relaxation(), &LpOptions::default())?.status != LpStatus::Infeasible)
}

fn injected_family(c: &InjectedConstraint) -> RowFamily {
    use crate::mip::InjectionKind::*;
    match c.kind {
        ForceBaseStriking => RowFamily::FillBaseStriking,
        ForceBaseBlanking => RowFamily::FillBaseBlanking,
        ForbidExtraStriking => RowFamily::HoldStriking,
        ForbidExtraBlanking => RowFamily::HoldBlanking,
        ForbidExtraAnnealing => RowFamily::HoldAnnealing,
        RequireLevel { process, .. } => RowFamily::MinimumLevel(process),
    }
}

/// The earliest quarter whose rows cannot hold even in the relaxation, with
/// the family that blocks it: an injected row when dropping the injections
/// restores feasibility, else the vault when lifting it does, else the
/// operating floor. `None` when the relaxation of `s` is feasible.
pub fn diagnose_infeasible(
    s: &Scenario,
    cfg: &MintConfig,
    injected: &[InjectedConstraint],
    build: &BuildOptions,
) -> Result<Option<RowLabel>> {
    for t in 0..s.horizon {
        let cut = truncated(s, t + 1);
        let active: Vec<InjectedConstraint> = injected.iter().filter(|c| c.quarter <= t).copied().collect();
        if relaxation_feasible(&cut, cfg, &active, build)? {
            continue;
        }
        let label = |family| RowLabel {
            family,
            quarter: Some(t),
            index: None,
        };
        if !active.is_empty() && relaxation_feasible(&cut, cfg, &[], build)? {
            let first = active
                .iter()
                .find(|c| !relaxation_feasible(&cut, cfg, std::slice::from_ref(*c), build).unwrap_or(true))
                .unwrap_or(&active[0]);
            return Ok(Some(RowLabel {
                quarter: Some(first.quarter),
                ..label(injected_family(first))
            }));
        }
        let most = (0..=t)
            .map(|q| effective_ladder(cfg, &s.disruptions, q, Process::Striking).max_capacity())
            .sum::<f64>();
        let open = Scenario {
            vault_cap: s.initial_inventory.iter().sum::<f64>() + most + 1.0,
            ..cut.clone()
        };
        let family = if relaxation_feasible(&open, cfg, &[], build)? {
            RowFamily::VaultCap
        } else {
            RowFamily::OperatingFloor
        };
        return Ok(Some(label(family)));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mip::InjectionKind;
    use crate::model::{CoinSpec, StepLadder};

    fn scenario(second: f64) -> (Scenario, MintConfig) {
        let s = Scenario {
            horizon: 3,
            coin_specs: vec![CoinSpec::new("a", 0.0, 0.05)],
            demand: vec![vec![50.0], vec![second], vec![50.0]],
            operating_floor: vec![vec![10.0]; 3],
            vault_cap: 300.0,
            safety_min: vec![0.0],
            initial_inventory: vec![10.0],
            disruptions: vec![],
        };
        let cfg = MintConfig::new(
            StepLadder::new(vec![10.0, 14.0], vec![5.0]),
            60.0,
            80.0,
            7.0,
            StepLadder::new(vec![100.0, 120.0], vec![11.0]),
        );
        (s, cfg)
    }

    #[test]
    fn feasible_model_has_no_diagnosis() {
        let (s, cfg) = scenario(50.0);
        assert_eq!(diagnose_infeasible(&s, &cfg, &[], &BuildOptions::default()).unwrap(), None);
    }

    #[test]
    fn overload_names_the_floor() {
        // Two quarters of 120 coins and 14 blanking days cannot cover 50 + 500.
        let (s, cfg) = scenario(500.0);
        let d = diagnose_infeasible(&s, &cfg, &[], &BuildOptions::default()).unwrap().unwrap();
        assert_eq!((d.family, d.quarter), (RowFamily::OperatingFloor, Some(1)));
    }

    #[test]
    fn tight_vault_is_named() {
        let (mut s, cfg) = scenario(50.0);
        s.vault_cap = 12.0;
        s.operating_floor[0] = vec![15.0];
        let d = diagnose_infeasible(&s, &cfg, &[], &BuildOptions::default()).unwrap().unwrap();
        assert_eq!((d.family, d.quarter), (RowFamily::VaultCap, Some(0)));
    }

    #[test]
    fn injected_rows_are_blamed_first() {
        let (mut s, cfg) = scenario(50.0);
        s.vault_cap = 50.0;
        let fill = [InjectedConstraint::first_quarter(InjectionKind::ForceBaseStriking)];
        let d = diagnose_infeasible(&s, &cfg, &fill, &BuildOptions::default()).unwrap().unwrap();
        assert_eq!((d.family, d.quarter), (RowFamily::FillBaseStriking, Some(0)));
    }
}
