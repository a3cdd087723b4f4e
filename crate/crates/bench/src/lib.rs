//! Deterministic inputs for the planner benchmarks.

use mintplan_core::oracle::{random_instance, InstanceShape};
use mintplan_core::rolling::{epoch_scenario, generate_synthetic, SyntheticShape};
use mintplan_core::{History, MintConfig, Scenario};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Random instance of `shape` drawn from `seed`.
pub fn instance(shape: &InstanceShape, seed: u64) -> (Scenario, MintConfig) {
    random_instance(&mut ChaCha8Rng::seed_from_u64(seed), shape)
}

/// The default 21-quarter synthetic history.
pub fn synthetic_history(seed: u64) -> History {
    generate_synthetic(seed, &SyntheticShape::default())
        .expect("default synthetic shape is valid")
        .history
}

/// First five-quarter window of the synthetic history, planned from its
/// initial stock.
pub fn synthetic_window(seed: u64) -> (Scenario, MintConfig) {
    let history = synthetic_history(seed);
    let s = epoch_scenario(&history, 0, &history.initial_inventory);
    (s, history.mint_config)
}
