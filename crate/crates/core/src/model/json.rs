//! JSON scenario documents.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{validate_scenario, CoinSpec, Disruption, MintConfig, Process, Scenario, StepLadder};
use crate::error::{MintError, Result};

/// A scenario together with the mint configuration it is planned against.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioDocument {
    pub scenario: Scenario,
    pub mint_config: MintConfig,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DocumentDto {
    horizon: usize,
    denominations: Vec<DenominationDto>,
    mint_config: MintConfigDto,
    demand: Vec<Vec<f64>>,
    operating_floor: Vec<Vec<f64>>,
    vault_cap: f64,
    safety_min: Vec<f64>,
    initial_inventory: Vec<f64>,
    #[serde(default)]
    disruptions: Vec<DisruptionDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DenominationDto {
    pub id: String,
    pub alloy_weight: f64,
    pub blanking_rate: f64,
}

impl From<&CoinSpec> for DenominationDto {
    fn from(c: &CoinSpec) -> Self {
        DenominationDto {
            id: c.id.clone(),
            alloy_weight: c.alloy_weight,
            blanking_rate: c.blanking_rate,
        }
    }
}

impl From<DenominationDto> for CoinSpec {
    fn from(d: DenominationDto) -> Self {
        CoinSpec::new(d.id, d.alloy_weight, d.blanking_rate)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct LadderDto {
    pub breakpoints: Vec<f64>,
    pub costs: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct AnnealingDto {
    pub base: f64,
    pub max: f64,
    pub cost: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct MintConfigDto {
    pub blanking: LadderDto,
    pub annealing: AnnealingDto,
    pub striking: LadderDto,
}

#[derive(Serialize, Deserialize, Clone, Copy)]
#[serde(rename_all = "lowercase")]
pub(crate) enum ProcessDto {
    Blanking,
    Annealing,
    Striking,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct DisruptionDto {
    pub quarter: usize,
    pub process: ProcessDto,
    pub scale: f64,
}

impl From<ProcessDto> for Process {
    fn from(p: ProcessDto) -> Self {
        match p {
            ProcessDto::Blanking => Process::Blanking,
            ProcessDto::Annealing => Process::Annealing,
            ProcessDto::Striking => Process::Striking,
        }
    }
}

impl From<Process> for ProcessDto {
    fn from(p: Process) -> Self {
        match p {
            Process::Blanking => ProcessDto::Blanking,
            Process::Annealing => ProcessDto::Annealing,
            Process::Striking => ProcessDto::Striking,
        }
    }
}

impl From<&MintConfig> for MintConfigDto {
    fn from(cfg: &MintConfig) -> Self {
        let ladder = |l: &StepLadder| LadderDto {
            breakpoints: l.breakpoints.clone(),
            costs: l.costs.clone(),
        };
        MintConfigDto {
            blanking: ladder(&cfg.blanking),
            annealing: AnnealingDto {
                base: cfg.annealing.breakpoints.first().copied().unwrap_or(0.0),
                max: cfg.annealing.breakpoints.get(1).copied().unwrap_or(0.0),
                cost: cfg.annealing.costs.first().copied().unwrap_or(0.0),
            },
            striking: ladder(&cfg.striking),
        }
    }
}

impl From<MintConfigDto> for MintConfig {
    fn from(dto: MintConfigDto) -> Self {
        MintConfig::new(
            StepLadder::new(dto.blanking.breakpoints, dto.blanking.costs),
            dto.annealing.base,
            dto.annealing.max,
            dto.annealing.cost,
            StepLadder::new(dto.striking.breakpoints, dto.striking.costs),
        )
    }
}

impl From<&Disruption> for DisruptionDto {
    fn from(d: &Disruption) -> Self {
        DisruptionDto {
            quarter: d.quarter,
            process: d.process.into(),
            scale: d.scale,
        }
    }
}

impl From<DisruptionDto> for Disruption {
    fn from(d: DisruptionDto) -> Self {
        Disruption {
            quarter: d.quarter,
            process: d.process.into(),
            scale: d.scale,
        }
    }
}

pub(crate) fn json_error(err: serde_json::Error) -> MintError {
    MintError::Parse(format!("line {} column {}: {err}", err.line(), err.column()))
}

/// Parses and validates a scenario document. Structural errors carry the
/// line and column; invariant violations are collected into one error.
pub fn parse_scenario(text: &str) -> Result<ScenarioDocument> {
    let dto: DocumentDto = serde_json::from_str(text).map_err(json_error)?;
    let doc = ScenarioDocument {
        scenario: Scenario {
            horizon: dto.horizon,
            coin_specs: dto.denominations.into_iter().map(CoinSpec::from).collect(),
            demand: dto.demand,
            operating_floor: dto.operating_floor,
            vault_cap: dto.vault_cap,
            safety_min: dto.safety_min,
            initial_inventory: dto.initial_inventory,
            disruptions: dto.disruptions.into_iter().map(Disruption::from).collect(),
        },
        mint_config: dto.mint_config.into(),
    };
    let mut violations = doc.mint_config.violations();
    violations.extend(validate_scenario(&doc.scenario));
    if violations.is_empty() {
        Ok(doc)
    } else {
        Err(MintError::InvalidScenario(violations))
    }
}

pub fn read_scenario(path: impl AsRef<Path>) -> Result<ScenarioDocument> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| MintError::Parse(format!("{}: {e}", path.display())))?;
    parse_scenario(&text)
}

/// Canonical pretty-printed form of a scenario document.
pub fn scenario_to_json(doc: &ScenarioDocument) -> String {
    let s = &doc.scenario;
    let dto = DocumentDto {
        horizon: s.horizon,
        denominations: s.coin_specs.iter().map(DenominationDto::from).collect(),
        mint_config: (&doc.mint_config).into(),
        demand: s.demand.clone(),
        operating_floor: s.operating_floor.clone(),
        vault_cap: s.vault_cap,
        safety_min: s.safety_min.clone(),
        initial_inventory: s.initial_inventory.clone(),
        disruptions: s.disruptions.iter().map(DisruptionDto::from).collect(),
    };
    let mut text = serde_json::to_string_pretty(&dto).expect("scenario documents always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const SAMPLE: &str = r#"{
  "horizon": 2,
  "denominations": [
    {"id": "1", "alloy_weight": 2.5, "blanking_rate": 0.1},
    {"id": "5", "alloy_weight": 0, "blanking_rate": 0.05}
  ],
  "mint_config": {
    "blanking": {"breakpoints": [10, 14, 18], "costs": [5, 9]},
    "annealing": {"base": 30, "max": 45, "cost": 7},
    "striking": {"breakpoints": [100, 120, 140], "costs": [11, 20]}
  },
  "demand": [[10, 20], [12, 18]],
  "operating_floor": [[5, 5], [5, 5]],
  "vault_cap": 200,
  "safety_min": [5, 5],
  "initial_inventory": [20, 30],
  "disruptions": [{"quarter": 1, "process": "striking", "scale": 0.5}]
}"#;

    #[test]
    fn parses_sample() {
        let doc = parse_scenario(SAMPLE).unwrap();
        assert_eq!(doc.scenario.horizon, 2);
        assert_eq!(doc.scenario.coin_specs[0].alloy_weight, 2.5);
        assert_eq!(doc.mint_config.annealing.breakpoints, vec![30.0, 45.0]);
        assert_eq!(doc.scenario.disruptions[0].process, Process::Striking);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let doc = parse_scenario(SAMPLE).unwrap();
        let canonical = scenario_to_json(&doc);
        let again = parse_scenario(&canonical).unwrap();
        assert_eq!(again, doc);
        assert_eq!(scenario_to_json(&again), canonical);
    }

    #[test]
    fn rejects_negative_demand() {
        let text = SAMPLE.replace("[[10, 20]", "[[-10, 20]");
        match parse_scenario(&text) {
            Err(MintError::InvalidScenario(v)) => assert!(v[0].contains("demand")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_nan_and_reports_line() {
        let text = SAMPLE.replace("\"vault_cap\": 200", "\"vault_cap\": NaN");
        match parse_scenario(&text) {
            Err(MintError::Parse(msg)) => assert!(msg.contains("line 14"), "{msg}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_unknown_process() {
        let text = SAMPLE.replace("\"striking\", \"scale\"", "\"polishing\", \"scale\"");
        assert!(matches!(parse_scenario(&text), Err(MintError::Parse(_))));
    }

    fn finite() -> impl Strategy<Value = f64> {
        prop_oneof![0.0..1e6f64, (0u32..1000).prop_map(f64::from)]
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            demand in proptest::collection::vec(proptest::collection::vec(finite(), 3), 1..5),
            weights in proptest::collection::vec(finite(), 3),
            rate in 1e-3..10.0f64,
            scale in 0.0..=1.0f64,
        ) {
            let mut doc = parse_scenario(SAMPLE).unwrap();
            let t = demand.len();
            doc.scenario.horizon = t;
            doc.scenario.coin_specs = weights
                .iter()
                .enumerate()
                .map(|(i, w)| CoinSpec::new(format!("d{i}"), *w, rate))
                .collect();
            doc.scenario.operating_floor = demand.iter().map(|r| r.iter().map(|x| x / 3.0).collect()).collect();
            doc.scenario.demand = demand;
            doc.scenario.safety_min = vec![1.0; 3];
            doc.scenario.initial_inventory = vec![0.0, 1.5, 2.25];
            doc.scenario.disruptions = vec![Disruption { quarter: t - 1, process: Process::Annealing, scale }];
            let text = scenario_to_json(&doc);
            let parsed = parse_scenario(&text).unwrap();
            prop_assert_eq!(&parsed, &doc);
            prop_assert_eq!(scenario_to_json(&parsed), text);
        }
    }
}
