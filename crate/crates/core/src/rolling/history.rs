//! JSON files for replay histories and baseline order matrices.
//!
//! A history has the scenario keys shared by every epoch (`denominations`,
//! `mint_config`, `vault_cap`, `safety_min`, `initial_inventory`) and an
//! `epochs` array. Each epoch holds `operating_floor` and `realized_demand`,
//! and optionally `forecast`, `inventory` and `disruptions`. A baseline is a
//! bare array of per-quarter order rows.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{EpochInput, History};
use crate::error::{MintError, Result};
use crate::model::json::{json_error, DenominationDto, DisruptionDto, MintConfigDto};
use crate::model::{CoinSpec, Disruption};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HistoryDto {
    denominations: Vec<DenominationDto>,
    mint_config: MintConfigDto,
    vault_cap: f64,
    safety_min: Vec<f64>,
    initial_inventory: Vec<f64>,
    epochs: Vec<EpochDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EpochDto {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forecast: Option<Vec<Vec<f64>>>,
    operating_floor: Vec<Vec<f64>>,
    realized_demand: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    inventory: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    disruptions: Vec<DisruptionDto>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| MintError::Parse(format!("{}: {e}", path.display())))
}

pub fn parse_history(text: &str) -> Result<History> {
    let dto: HistoryDto = serde_json::from_str(text).map_err(json_error)?;
    let history = History {
        coin_specs: dto.denominations.into_iter().map(CoinSpec::from).collect(),
        mint_config: dto.mint_config.into(),
        vault_cap: dto.vault_cap,
        safety_min: dto.safety_min,
        initial_inventory: dto.initial_inventory,
        epochs: dto
            .epochs
            .into_iter()
            .enumerate()
            .map(|(i, e)| EpochInput {
                epoch: i,
                forecast: e.forecast,
                operating_floor: e.operating_floor,
                realized: e.realized_demand,
                inventory: e.inventory,
                disruptions: e.disruptions.into_iter().map(Disruption::from).collect(),
            })
            .collect(),
    };
    let violations = history.violations();
    if violations.is_empty() {
        Ok(history)
    } else {
        Err(MintError::InvalidScenario(violations))
    }
}

pub fn read_history(path: impl AsRef<Path>) -> Result<History> {
    parse_history(&read(path.as_ref())?)
}

pub fn history_to_json(h: &History) -> String {
    let dto = HistoryDto {
        denominations: h.coin_specs.iter().map(DenominationDto::from).collect(),
        mint_config: (&h.mint_config).into(),
        vault_cap: h.vault_cap,
        safety_min: h.safety_min.clone(),
        initial_inventory: h.initial_inventory.clone(),
        epochs: h
            .epochs
            .iter()
            .map(|e| EpochDto {
                forecast: e.forecast.clone(),
                operating_floor: e.operating_floor.clone(),
                realized_demand: e.realized.clone(),
                inventory: e.inventory.clone(),
                disruptions: e.disruptions.iter().map(DisruptionDto::from).collect(),
            })
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&dto).expect("histories always serialize");
    text.push('\n');
    text
}

pub fn parse_orders(text: &str) -> Result<Vec<Vec<f64>>> {
    let orders: Vec<Vec<f64>> = serde_json::from_str(text).map_err(json_error)?;
    for (t, row) in orders.iter().enumerate() {
        if let Some(d) = row.iter().position(|x| !x.is_finite() || *x < 0.0) {
            return Err(MintError::Parse(format!("orders[{t}][{d}] must be finite and non-negative")));
        }
    }
    Ok(orders)
}

pub fn read_orders(path: impl AsRef<Path>) -> Result<Vec<Vec<f64>>> {
    parse_orders(&read(path.as_ref())?)
}

pub fn orders_to_json(orders: &[Vec<f64>]) -> String {
    let mut text = serde_json::to_string(orders).expect("orders always serialize");
    text.push('\n');
    text
}
