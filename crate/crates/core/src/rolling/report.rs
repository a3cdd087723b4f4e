//! Baseline comparison and the CSV report.

use super::{charge, History, SimulationReport};
use crate::error::{MintError, Result};
use crate::model::{roll_inventory, Process};

/// Something noteworthy about one baseline quarter.
#[derive(Debug, Clone, PartialEq)]
pub struct QuarterNote {
    pub quarter: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    /// Extra-shift cost of the baseline per quarter; `None` where the
    /// baseline order exceeds the largest capacity.
    pub baseline_costs: Vec<Option<f64>>,
    /// Prefix sums over the quarters the baseline can be charged for.
    pub baseline_accumulated: Vec<f64>,
    pub baseline_inventory: Vec<Vec<f64>>,
    pub notes: Vec<QuarterNote>,
    /// Model cost over the quarters with a baseline cost.
    pub model_total: f64,
    pub baseline_total: f64,
    /// `(baseline_total - model_total) / baseline_total`, absent when the
    /// baseline costs nothing.
    pub reduction: Option<f64>,
    /// Quarters with an extra shift, by [`Process::index`].
    pub model_extended: [usize; 3],
    pub baseline_extended: [usize; 3],
}

/// Charges `baseline` orders against the same history the report replayed.
pub fn compare(report: &SimulationReport, history: &History, baseline: &[Vec<f64>]) -> Result<Comparison> {
    let n = history.denominations();
    if baseline.len() != report.epochs.len() {
        return Err(MintError::LengthMismatch {
            what: "baseline quarters vs simulated quarters",
            expected: report.epochs.len(),
            actual: baseline.len(),
        });
    }
    if let Some(row) = baseline.iter().find(|r| r.len() != n) {
        return Err(MintError::LengthMismatch {
            what: "baseline order entries vs denominations",
            expected: n,
            actual: row.len(),
        });
    }
    let realized: Vec<Vec<f64>> = history.epochs.iter().map(|e| e.realized.clone()).collect();
    let baseline_inventory = roll_inventory(baseline, &history.initial_inventory, &realized);
    let cfg = &history.mint_config;
    let mut notes = Vec::new();
    let mut baseline_costs = Vec::with_capacity(baseline.len());
    let mut baseline_accumulated = Vec::with_capacity(baseline.len());
    let mut baseline_extended = [0; 3];
    let (mut model_total, mut baseline_total) = (0.0, 0.0);
    for (q, order) in baseline.iter().enumerate() {
        match charge(order, &history.coin_specs, cfg, &history.epochs[q].disruptions, 0) {
            Ok(c) => {
                baseline_total += c.cost;
                model_total += report.epochs[q].cost;
                for (count, &level) in baseline_extended.iter_mut().zip(&c.levels) {
                    *count += usize::from(level > 0);
                }
                baseline_costs.push(Some(c.cost));
            }
            Err(e) => {
                notes.push(QuarterNote {
                    quarter: q,
                    message: format!("excluded: {e}"),
                });
                baseline_costs.push(None);
            }
        }
        baseline_accumulated.push(baseline_total);
        if let Some(d) = baseline_inventory[q].iter().position(|&x| x < -1e-9) {
            notes.push(QuarterNote {
                quarter: q,
                message: format!("stockout of {}", history.coin_specs[d].id),
            });
        }
    }
    let reduction = (baseline_total > 0.0).then(|| (baseline_total - model_total) / baseline_total);
    Ok(Comparison {
        baseline_costs,
        baseline_accumulated,
        baseline_inventory,
        notes,
        model_total,
        baseline_total,
        reduction,
        model_extended: report.extended_counts(),
        baseline_extended,
    })
}

fn counts(c: &[usize; 3]) -> String {
    Process::ALL
        .iter()
        .map(|p| format!("{}:{}", p.name(), c[p.index()]))
        .collect::<Vec<_>>()
        .join(",")
}

/// Per-quarter CSV followed by `#` comment lines: baseline notes, then one
/// summary line.
pub fn write_csv(report: &SimulationReport, comparison: Option<&Comparison>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["quarter".to_string()];
    header.extend(report.denominations.iter().map(|id| format!("f_{id}")));
    header.extend(Process::ALL.iter().map(|p| format!("util_{}", p.name())));
    header.extend(["cost", "accumulated_cost", "baseline_accumulated_cost"].map(String::from));
    w.write_record(&header).expect("in-memory write");
    for (q, e) in report.epochs.iter().enumerate() {
        let mut row = vec![q.to_string()];
        row.extend(e.order.iter().map(|f| f.to_string()));
        row.extend(e.utilization.iter().map(|u| format!("{u:.2}")));
        row.push(e.cost.to_string());
        row.push(e.accumulated.to_string());
        row.push(comparison.map_or_else(String::new, |c| c.baseline_accumulated[q].to_string()));
        w.write_record(&row).expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is UTF-8");
    let mut summary = format!("# summary total_cost={}", report.total_cost());
    if let Some(c) = comparison {
        for note in &c.notes {
            out.push_str(&format!("# baseline quarter {}: {}\n", note.quarter, note.message));
        }
        let reduction = c.reduction.map_or_else(|| "n/a".to_string(), |r| format!("{:.2}", r * 100.0));
        summary.push_str(&format!(
            " baseline_total={} compared_model_total={} reduction_percent={reduction} extended_model={} extended_baseline={}",
            c.baseline_total,
            c.model_total,
            counts(&c.model_extended),
            counts(&c.baseline_extended)
        ));
    } else {
        summary.push_str(&format!(" extended_model={}", counts(&report.extended_counts())));
    }
    summary.push_str(&format!(
        " fallback_epochs={} perfect_foresight={}\n",
        report.fallback_epochs().len(),
        report.perfect_foresight
    ));
    out.push_str(&summary);
    out
}
