//! The minting model as a solver-neutral mixed-integer program.
//!
//! Columns are laid out in blocks: orders `f`, inventories `E`, then per
//! quarter the blanking level binaries `c`, the annealing binary `h` and the
//! striking level binaries `a`, and finally the scalar `K` that rewards
//! terminal stock above the safety minima.
//!
//! Capacity rows use `z_0 + sum_j (z_j - z_0) a_j`, so with at most one level
//! active the striking capacity at level `j` is exactly the breakpoint `z_j`
//! used by the step-cost ladder (likewise for blanking and annealing).

mod lp_text;

use std::fmt;

use crate::error::{MintError, Result};
use crate::lpsolve::{LinearProgram, LinearRow, Relation};
use crate::model::{effective_ladder, validate_scenario, MintConfig, Process, Scenario, Solution};

pub use lp_text::{export_lp_text, parse_lp_text, LP_TEXT_HEADER};

/// Absolute tolerance used when auditing rows, bounds and integrality.
pub const AUDIT_TOL: f64 = 1e-6;

/// Default upper bound of `K`.
pub const DEFAULT_K_MAX: f64 = 2.0;

/// Problem dimensions; fixes the column layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    pub quarters: usize,
    pub denominations: usize,
    pub blanking_levels: usize,
    pub striking_levels: usize,
}

impl Layout {
    fn shift_block(&self) -> usize {
        self.blanking_levels + self.striking_levels + 1
    }

    fn shift_base(&self, t: usize) -> usize {
        2 * self.quarters * self.denominations + t * self.shift_block()
    }

    pub fn columns(&self) -> usize {
        2 * self.quarters * self.denominations + self.quarters * self.shift_block() + 1
    }

    pub fn order(&self, t: usize, d: usize) -> usize {
        t * self.denominations + d
    }

    pub fn inventory(&self, t: usize, d: usize) -> usize {
        self.quarters * self.denominations + t * self.denominations + d
    }

    /// Blanking level `level` in `1..=blanking_levels`.
    pub fn blanking(&self, t: usize, level: usize) -> usize {
        self.shift_base(t) + level - 1
    }

    pub fn annealing(&self, t: usize) -> usize {
        self.shift_base(t) + self.blanking_levels
    }

    /// Striking level `level` in `1..=striking_levels`.
    pub fn striking(&self, t: usize, level: usize) -> usize {
        self.shift_base(t) + self.blanking_levels + 1 + level - 1
    }

    pub fn reserve(&self) -> usize {
        self.columns() - 1
    }

    /// Level binaries of `process` in quarter `t`, as `(level, column)`.
    pub fn level_columns(&self, process: Process, t: usize) -> Vec<(usize, usize)> {
        match process {
            Process::Blanking => (1..=self.blanking_levels).map(|i| (i, self.blanking(t, i))).collect(),
            Process::Annealing => vec![(1, self.annealing(t))],
            Process::Striking => (1..=self.striking_levels).map(|j| (j, self.striking(t, j))).collect(),
        }
    }

    /// Kind of the variable stored in column `col`.
    pub fn kind(&self, col: usize) -> VariableKind {
        let td = self.quarters * self.denominations;
        if col < td {
            VariableKind::Order {
                quarter: col / self.denominations,
                denomination: col % self.denominations,
            }
        } else if col < 2 * td {
            let c = col - td;
            VariableKind::Inventory {
                quarter: c / self.denominations,
                denomination: c % self.denominations,
            }
        } else if col == self.reserve() {
            VariableKind::Reserve
        } else {
            let c = col - 2 * td;
            let quarter = c / self.shift_block();
            let r = c % self.shift_block();
            if r < self.blanking_levels {
                VariableKind::BlankingLevel { quarter, level: r + 1 }
            } else if r == self.blanking_levels {
                VariableKind::AnnealingLevel { quarter }
            } else {
                VariableKind::StrikingLevel {
                    quarter,
                    level: r - self.blanking_levels,
                }
            }
        }
    }

    /// Column of `kind`, if it exists in this layout.
    pub fn position(&self, kind: VariableKind) -> Option<usize> {
        let col = match kind {
            VariableKind::Order { quarter, denomination } if quarter < self.quarters && denomination < self.denominations => {
                self.order(quarter, denomination)
            }
            VariableKind::Inventory { quarter, denomination } if quarter < self.quarters && denomination < self.denominations => {
                self.inventory(quarter, denomination)
            }
            VariableKind::BlankingLevel { quarter, level } if quarter < self.quarters && (1..=self.blanking_levels).contains(&level) => {
                self.blanking(quarter, level)
            }
            VariableKind::AnnealingLevel { quarter } if quarter < self.quarters => self.annealing(quarter),
            VariableKind::StrikingLevel { quarter, level } if quarter < self.quarters && (1..=self.striking_levels).contains(&level) => {
                self.striking(quarter, level)
            }
            VariableKind::Reserve => self.reserve(),
            _ => return None,
        };
        Some(col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VariableKind {
    Order { quarter: usize, denomination: usize },
    Inventory { quarter: usize, denomination: usize },
    BlankingLevel { quarter: usize, level: usize },
    AnnealingLevel { quarter: usize },
    StrikingLevel { quarter: usize, level: usize },
    Reserve,
}

impl VariableKind {
    pub fn is_binary(self) -> bool {
        matches!(
            self,
            VariableKind::BlankingLevel { .. } | VariableKind::AnnealingLevel { .. } | VariableKind::StrikingLevel { .. }
        )
    }

    pub fn parse(name: &str) -> Option<VariableKind> {
        if name == "K" {
            return Some(VariableKind::Reserve);
        }
        let mut parts = name.split('_');
        let head = parts.next()?;
        let quarter = parts.next()?.strip_prefix('t')?.parse().ok()?;
        let index = |p: Option<&str>, prefix: char| -> Option<usize> { p?.strip_prefix(prefix)?.parse().ok() };
        let kind = match head {
            "f" => VariableKind::Order {
                quarter,
                denomination: index(parts.next(), 'd')?,
            },
            "E" => VariableKind::Inventory {
                quarter,
                denomination: index(parts.next(), 'd')?,
            },
            "c" => VariableKind::BlankingLevel {
                quarter,
                level: index(parts.next(), 'i')?,
            },
            "h" => VariableKind::AnnealingLevel { quarter },
            "a" => VariableKind::StrikingLevel {
                quarter,
                level: index(parts.next(), 'j')?,
            },
            _ => return None,
        };
        if parts.next().is_some() {
            return None;
        }
        Some(kind)
    }
}

impl fmt::Display for VariableKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VariableKind::Order { quarter, denomination } => write!(f, "f_t{quarter}_d{denomination}"),
            VariableKind::Inventory { quarter, denomination } => write!(f, "E_t{quarter}_d{denomination}"),
            VariableKind::BlankingLevel { quarter, level } => write!(f, "c_t{quarter}_i{level}"),
            VariableKind::AnnealingLevel { quarter } => write!(f, "h_t{quarter}"),
            VariableKind::StrikingLevel { quarter, level } => write!(f, "a_t{quarter}_j{level}"),
            VariableKind::Reserve => f.write_str("K"),
        }
    }
}

/// Which model constraint a row instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RowFamily {
    /// Alloy tonnage within the annealing level chosen.
    AnnealingCapacity,
    /// Coin count within the striking level chosen.
    StrikingCapacity,
    StrikingSingleLevel,
    /// Working days within the blanking level chosen.
    BlankingCapacity,
    BlankingSingleLevel,
    /// `E_t = E_{t-1} + f_t - P_t`.
    StockBalance,
    /// `E_T >= IMIN * K`.
    TerminalReserve,
    /// Total stock within the vault.
    VaultCap,
    /// `E_t >= DEM_t`.
    OperatingFloor,
    /// Injected: striking runs exactly at base capacity.
    FillBaseStriking,
    /// Injected: blanking runs exactly at base capacity.
    FillBaseBlanking,
    /// Injected: no extra striking level.
    HoldStriking,
    /// Injected: no extra blanking level.
    HoldBlanking,
    /// Injected: no extra annealing shift.
    HoldAnnealing,
    /// Injected: at least a given level of a process.
    MinimumLevel(Process),
}

impl RowFamily {
    const NAMED: [(RowFamily, &'static str); 17] = [
        (RowFamily::AnnealingCapacity, "anneal_cap"),
        (RowFamily::StrikingCapacity, "strike_cap"),
        (RowFamily::StrikingSingleLevel, "strike_one"),
        (RowFamily::BlankingCapacity, "blank_cap"),
        (RowFamily::BlankingSingleLevel, "blank_one"),
        (RowFamily::StockBalance, "balance"),
        (RowFamily::TerminalReserve, "reserve"),
        (RowFamily::VaultCap, "vault"),
        (RowFamily::OperatingFloor, "floor"),
        (RowFamily::FillBaseStriking, "fill_strike"),
        (RowFamily::FillBaseBlanking, "fill_blank"),
        (RowFamily::HoldStriking, "hold_strike"),
        (RowFamily::HoldBlanking, "hold_blank"),
        (RowFamily::HoldAnnealing, "hold_anneal"),
        (RowFamily::MinimumLevel(Process::Blanking), "min_blank"),
        (RowFamily::MinimumLevel(Process::Annealing), "min_anneal"),
        (RowFamily::MinimumLevel(Process::Striking), "min_strike"),
    ];

    pub fn tag(self) -> &'static str {
        Self::NAMED
            .iter()
            .find(|(f, _)| *f == self)
            .map(|(_, n)| *n)
            .expect("every family is named")
    }

    pub fn is_injected(self) -> bool {
        matches!(
            self,
            RowFamily::FillBaseStriking
                | RowFamily::FillBaseBlanking
                | RowFamily::HoldStriking
                | RowFamily::HoldBlanking
                | RowFamily::HoldAnnealing
                | RowFamily::MinimumLevel(_)
        )
    }
}

/// Provenance of a row: its family and the quarter/denomination it covers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RowLabel {
    pub family: RowFamily,
    pub quarter: Option<usize>,
    /// Denomination, or the level for `MinimumLevel` rows.
    pub index: Option<usize>,
}

impl RowLabel {
    fn new(family: RowFamily, quarter: Option<usize>, index: Option<usize>) -> Self {
        RowLabel { family, quarter, index }
    }

    pub fn parse(name: &str) -> Option<RowLabel> {
        RowFamily::NAMED.iter().find_map(|&(family, tag)| {
            let rest = name.strip_prefix(tag)?;
            let mut quarter = None;
            let mut index = None;
            for piece in rest.split('_').skip(1) {
                let (prefix, digits) = piece.split_at(piece.find(|c: char| c.is_ascii_digit())?);
                let value = digits.parse().ok()?;
                match prefix {
                    "t" if quarter.is_none() && index.is_none() => quarter = Some(value),
                    "d" | "l" if index.is_none() => index = Some(value),
                    _ => return None,
                }
            }
            let label = RowLabel::new(family, quarter, index);
            (label.to_string() == name).then_some(label)
        })
    }
}

impl fmt::Display for RowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.tag())?;
        if let Some(t) = self.quarter {
            write!(f, "_t{t}")?;
        }
        if let Some(i) = self.index {
            let prefix = if matches!(self.family, RowFamily::MinimumLevel(_)) { 'l' } else { 'd' };
            write!(f, "_{prefix}{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub label: RowLabel,
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub lower: f64,
    pub upper: f64,
}

/// How the `-K` term of the objective is traded against cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveMode {
    /// Minimize `cost - K` directly; distinct cost totals are further apart
    /// than the range of `K`, so cost always wins.
    Weighted,
    /// Minimize cost first, then maximize `K` at that cost.
    Lexicographic,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StandardFormProblem {
    pub layout: Layout,
    pub mode: ObjectiveMode,
    pub objective: Vec<f64>,
    pub columns: Vec<Column>,
    pub rows: Vec<Row>,
}

impl StandardFormProblem {
    pub fn column_name(&self, col: usize) -> String {
        self.layout.kind(col).to_string()
    }

    pub fn is_binary(&self, col: usize) -> bool {
        self.layout.kind(col).is_binary()
    }

    pub fn binary_columns(&self) -> Vec<usize> {
        (0..self.columns.len()).filter(|&j| self.is_binary(j)).collect()
    }

    /// Objective without the `-K` term: the extra-shift cost alone.
    pub fn cost_objective(&self) -> Vec<f64> {
        let mut c = self.objective.clone();
        c[self.layout.reserve()] = 0.0;
        c
    }

    pub fn cost_of(&self, x: &[f64]) -> f64 {
        self.cost_objective().iter().zip(x).map(|(c, v)| c * v).sum()
    }

    /// The continuous relaxation (binaries range over `[0, 1]`).
    pub fn relaxation(&self) -> LinearProgram {
        LinearProgram {
            objective: self.objective.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| LinearRow::new(r.coeffs.clone(), r.relation, r.rhs))
                .collect(),
            lower: self.columns.iter().map(|c| c.lower).collect(),
            upper: self.columns.iter().map(|c| c.upper).collect(),
        }
    }

    pub fn count_family(&self, family: RowFamily) -> usize {
        self.rows.iter().filter(|r| r.label.family == family).count()
    }
}

/// Extra rows layered onto the base model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InjectionKind {
    /// `sum_d f_q^d = z_0`.
    ForceBaseStriking,
    /// `D(f_q) = x_0`.
    ForceBaseBlanking,
    /// `sum_j a_q^j = 0`.
    ForbidExtraStriking,
    /// `sum_i c_q^i = 0`.
    ForbidExtraBlanking,
    /// `h_q = 0`.
    ForbidExtraAnnealing,
    /// `sum_{l >= min_level} level_q^l = 1`, used when integer repair needs
    /// more capacity than the relaxed optimum selected.
    RequireLevel { process: Process, min_level: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InjectedConstraint {
    pub kind: InjectionKind,
    pub quarter: usize,
}

impl InjectedConstraint {
    pub fn first_quarter(kind: InjectionKind) -> Self {
        InjectedConstraint { kind, quarter: 0 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub k_max: f64,
    /// Cap on distinct cost totals enumerated when choosing the objective
    /// mode; beyond it the lexicographic mode is used.
    pub max_cost_totals: usize,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions {
            k_max: DEFAULT_K_MAX,
            max_cost_totals: 200_000,
        }
    }
}

pub fn build(s: &Scenario, cfg: &MintConfig, injected: &[InjectedConstraint]) -> Result<StandardFormProblem> {
    build_with(s, cfg, injected, &BuildOptions::default())
}

pub fn build_with(s: &Scenario, cfg: &MintConfig, injected: &[InjectedConstraint], opts: &BuildOptions) -> Result<StandardFormProblem> {
    let mut violations = cfg.violations();
    violations.extend(validate_scenario(s));
    if violations.is_empty() {
        for inj in injected {
            if inj.quarter >= s.horizon {
                violations.push(format!("injected constraint quarter {} outside horizon", inj.quarter));
            }
            if let InjectionKind::RequireLevel { process, min_level } = inj.kind {
                if min_level == 0 || min_level > cfg.levels(process) {
                    violations.push(format!("no {process} level {min_level} to require"));
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(MintError::InvalidScenario(violations));
    }

    let layout = Layout {
        quarters: s.horizon,
        denominations: s.denominations(),
        blanking_levels: cfg.levels(Process::Blanking),
        striking_levels: cfg.levels(Process::Striking),
    };
    let n = layout.columns();
    let (tq, nd) = (layout.quarters, layout.denominations);

    let mut objective = vec![0.0; n];
    let mut columns = vec![Column { lower: 0.0, upper: 1.0 }; n];
    for t in 0..tq {
        let ladders = Process::ALL.map(|p| effective_ladder(cfg, &s.disruptions, t, p));
        for d in 0..nd {
            let spec = &s.coin_specs[d];
            let mut ub = ladders[2].max_capacity().min(ladders[0].max_capacity() / spec.blanking_rate);
            if spec.alloy_weight > 0.0 {
                ub = ub.min(ladders[1].max_capacity() / spec.alloy_weight);
            }
            columns[layout.order(t, d)].upper = ub;
            columns[layout.inventory(t, d)].upper = s.vault_cap;
        }
        for p in Process::ALL {
            for (level, col) in layout.level_columns(p, t) {
                objective[col] = cfg.ladder(p).level_cost(level);
            }
        }
    }
    objective[layout.reserve()] = -1.0;
    columns[layout.reserve()].upper = opts.k_max;

    let mut rows = Vec::new();
    for t in 0..tq {
        let blanking = effective_ladder(cfg, &s.disruptions, t, Process::Blanking);
        let annealing = effective_ladder(cfg, &s.disruptions, t, Process::Annealing);
        let striking = effective_ladder(cfg, &s.disruptions, t, Process::Striking);
        let orders = |weight: &dyn Fn(usize) -> f64| -> Vec<(usize, f64)> { (0..nd).map(|d| (layout.order(t, d), weight(d))).collect() };
        let q = Some(t);

        let mut coeffs = orders(&|d| s.coin_specs[d].alloy_weight);
        coeffs.push((layout.annealing(t), -(annealing.capacity(1) - annealing.base())));
        rows.push(Row {
            label: RowLabel::new(RowFamily::AnnealingCapacity, q, None),
            coeffs,
            relation: Relation::Le,
            rhs: annealing.base(),
        });

        let mut coeffs = orders(&|_| 1.0);
        coeffs.extend(layout.level_columns(Process::Striking, t).into_iter().map(|(j, col)| (col, -(striking.capacity(j) - striking.base()))));
        rows.push(Row {
            label: RowLabel::new(RowFamily::StrikingCapacity, q, None),
            coeffs,
            relation: Relation::Le,
            rhs: striking.base(),
        });
        rows.push(Row {
            label: RowLabel::new(RowFamily::StrikingSingleLevel, q, None),
            coeffs: layout.level_columns(Process::Striking, t).into_iter().map(|(_, col)| (col, 1.0)).collect(),
            relation: Relation::Le,
            rhs: 1.0,
        });

        let mut coeffs = orders(&|d| s.coin_specs[d].blanking_rate);
        coeffs.extend(layout.level_columns(Process::Blanking, t).into_iter().map(|(i, col)| (col, -(blanking.capacity(i) - blanking.base()))));
        rows.push(Row {
            label: RowLabel::new(RowFamily::BlankingCapacity, q, None),
            coeffs,
            relation: Relation::Le,
            rhs: blanking.base(),
        });
        rows.push(Row {
            label: RowLabel::new(RowFamily::BlankingSingleLevel, q, None),
            coeffs: layout.level_columns(Process::Blanking, t).into_iter().map(|(_, col)| (col, 1.0)).collect(),
            relation: Relation::Le,
            rhs: 1.0,
        });
    }
    for t in 0..tq {
        for d in 0..nd {
            let mut coeffs = vec![(layout.inventory(t, d), 1.0), (layout.order(t, d), -1.0)];
            let rhs = if t == 0 {
                s.initial_inventory[d] - s.demand[0][d]
            } else {
                coeffs.push((layout.inventory(t - 1, d), -1.0));
                -s.demand[t][d]
            };
            rows.push(Row {
                label: RowLabel::new(RowFamily::StockBalance, Some(t), Some(d)),
                coeffs,
                relation: Relation::Eq,
                rhs,
            });
        }
    }
    for d in 0..nd {
        rows.push(Row {
            label: RowLabel::new(RowFamily::TerminalReserve, None, Some(d)),
            coeffs: vec![(layout.inventory(tq - 1, d), 1.0), (layout.reserve(), -s.safety_min[d])],
            relation: Relation::Ge,
            rhs: 0.0,
        });
    }
    for t in 0..tq {
        rows.push(Row {
            label: RowLabel::new(RowFamily::VaultCap, Some(t), None),
            coeffs: (0..nd).map(|d| (layout.inventory(t, d), 1.0)).collect(),
            relation: Relation::Le,
            rhs: s.vault_cap,
        });
    }
    for t in 0..tq {
        for d in 0..nd {
            rows.push(Row {
                label: RowLabel::new(RowFamily::OperatingFloor, Some(t), Some(d)),
                coeffs: vec![(layout.inventory(t, d), 1.0)],
                relation: Relation::Ge,
                rhs: s.operating_floor[t][d],
            });
        }
    }
    for inj in injected {
        rows.push(injected_row(&layout, s, cfg, inj));
    }

    let mode = choose_mode(cfg, tq, opts);
    Ok(StandardFormProblem {
        layout,
        mode,
        objective,
        columns,
        rows,
    })
}

fn injected_row(layout: &Layout, s: &Scenario, cfg: &MintConfig, inj: &InjectedConstraint) -> Row {
    let t = inj.quarter;
    let nd = layout.denominations;
    let level_sum = |p: Process| -> Vec<(usize, f64)> { layout.level_columns(p, t).into_iter().map(|(_, c)| (c, 1.0)).collect() };
    let (family, index, coeffs, rhs) = match inj.kind {
        InjectionKind::ForceBaseStriking => (
            RowFamily::FillBaseStriking,
            None,
            (0..nd).map(|d| (layout.order(t, d), 1.0)).collect(),
            effective_ladder(cfg, &s.disruptions, t, Process::Striking).base(),
        ),
        InjectionKind::ForceBaseBlanking => (
            RowFamily::FillBaseBlanking,
            None,
            (0..nd).map(|d| (layout.order(t, d), s.coin_specs[d].blanking_rate)).collect(),
            effective_ladder(cfg, &s.disruptions, t, Process::Blanking).base(),
        ),
        InjectionKind::ForbidExtraStriking => (RowFamily::HoldStriking, None, level_sum(Process::Striking), 0.0),
        InjectionKind::ForbidExtraBlanking => (RowFamily::HoldBlanking, None, level_sum(Process::Blanking), 0.0),
        InjectionKind::ForbidExtraAnnealing => (RowFamily::HoldAnnealing, None, level_sum(Process::Annealing), 0.0),
        InjectionKind::RequireLevel { process, min_level } => (
            RowFamily::MinimumLevel(process),
            Some(min_level),
            layout
                .level_columns(process, t)
                .into_iter()
                .filter(|&(l, _)| l >= min_level)
                .map(|(_, c)| (c, 1.0))
                .collect(),
            1.0,
        ),
    };
    Row {
        label: RowLabel::new(family, Some(t), index),
        coeffs,
        relation: Relation::Eq,
        rhs,
    }
}

/// Picks the weighted objective when every two distinct achievable cost
/// totals differ by more than `k_max`.
fn choose_mode(cfg: &MintConfig, quarters: usize, opts: &BuildOptions) -> ObjectiveMode {
    let mut totals = vec![0.0f64];
    for _ in 0..quarters {
        for p in Process::ALL {
            let ladder = cfg.ladder(p);
            let mut next = Vec::with_capacity(totals.len() * (ladder.levels() + 1));
            for &base in &totals {
                next.push(base);
                next.extend(ladder.costs.iter().map(|c| base + c));
            }
            next.sort_by(f64::total_cmp);
            next.dedup_by(|a, b| (*a - *b).abs() <= 1e-9);
            if next.len() > opts.max_cost_totals {
                return ObjectiveMode::Lexicographic;
            }
            totals = next;
        }
    }
    let min_gap = totals.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if min_gap > opts.k_max {
        ObjectiveMode::Weighted
    } else {
        ObjectiveMode::Lexicographic
    }
}

/// Labels of every row, bound or integrality requirement violated by `x`.
pub fn check_solution(p: &StandardFormProblem, x: &[f64]) -> Vec<String> {
    let mut out = Vec::new();
    if x.len() != p.columns.len() {
        out.push(format!("assignment has {} entries for {} columns", x.len(), p.columns.len()));
        return out;
    }
    for row in &p.rows {
        let lhs: f64 = row.coeffs.iter().map(|&(j, a)| a * x[j]).sum();
        if !lhs.is_finite() || !row.relation.holds(lhs, row.rhs, AUDIT_TOL) {
            out.push(row.label.to_string());
        }
    }
    for (j, col) in p.columns.iter().enumerate() {
        let v = x[j];
        if !(v >= col.lower - AUDIT_TOL && v <= col.upper + AUDIT_TOL) {
            out.push(format!("bound:{}", p.column_name(j)));
        }
        if p.is_binary(j) && v.min((v - 1.0).abs()) > AUDIT_TOL {
            out.push(format!("integrality:{}", p.column_name(j)));
        }
    }
    out
}

/// Column assignment equivalent to a solution of this problem.
pub fn assignment(p: &StandardFormProblem, sol: &Solution) -> Vec<f64> {
    let l = &p.layout;
    let mut x = vec![0.0; l.columns()];
    for t in 0..l.quarters {
        for d in 0..l.denominations {
            x[l.order(t, d)] = sol.plan.orders[t][d];
            x[l.inventory(t, d)] = sol.plan.inventory[t][d];
        }
        for process in Process::ALL {
            let level = sol.shifts.level(process, t);
            for (lv, col) in l.level_columns(process, t) {
                x[col] = if lv == level { 1.0 } else { 0.0 };
            }
        }
    }
    x[l.reserve()] = sol.k;
    x
}
