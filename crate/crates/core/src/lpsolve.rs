//! Dense primal simplex for linear programs with bounded variables.
//!
//! Every column needs a finite lower bound; upper bounds may be infinite.
//! Rows are turned into equalities with one slack each, phase 1 drives
//! artificial variables out of the rows whose slack cannot start feasible, and
//! both phases pick entering and leaving columns by Bland's smallest-index
//! rule, so the search never cycles.

use crate::error::{MintError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }

    /// Whether `lhs (rel) rhs` holds within `tol`.
    pub fn holds(self, lhs: f64, rhs: f64, tol: f64) -> bool {
        match self {
            Relation::Le => lhs <= rhs + tol,
            Relation::Eq => (lhs - rhs).abs() <= tol,
            Relation::Ge => lhs >= rhs - tol,
        }
    }
}

/// One constraint row as sparse `(column, coefficient)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRow {
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearRow {
    pub fn new(coeffs: Vec<(usize, f64)>, relation: Relation, rhs: f64) -> Self {
        LinearRow { coeffs, relation, rhs }
    }

    pub fn activity(&self, x: &[f64]) -> f64 {
        self.coeffs.iter().map(|&(j, a)| a * x[j]).sum()
    }
}

/// Minimize `objective · x` subject to `rows` and `lower <= x <= upper`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub rows: Vec<LinearRow>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl LinearProgram {
    pub fn columns(&self) -> usize {
        self.objective.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarStatus {
    Basic,
    AtLower,
    AtUpper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LpResult {
    pub status: LpStatus,
    pub objective: f64,
    pub values: Vec<f64>,
    /// Final status of every structural column.
    pub basis: Vec<VarStatus>,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LpOptions {
    pub pivot_tol: f64,
    pub feasibility_tol: f64,
    pub optimality_tol: f64,
    /// Overrides the default cap of `50 * (rows + columns)` iterations.
    pub iteration_cap: Option<usize>,
}

impl Default for LpOptions {
    fn default() -> Self {
        LpOptions {
            pivot_tol: 1e-9,
            feasibility_tol: 1e-7,
            optimality_tol: 1e-9,
            iteration_cap: None,
        }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> Result<LpResult> {
    solve_lp_with(lp, &LpOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &LpOptions) -> Result<LpResult> {
    let n = lp.columns();
    if lp.lower.len() != n || lp.upper.len() != n {
        return Err(MintError::InvalidProblem(format!(
            "{n} objective entries but {} lower and {} upper bounds",
            lp.lower.len(),
            lp.upper.len()
        )));
    }
    for (i, row) in lp.rows.iter().enumerate() {
        if let Some(&(j, _)) = row.coeffs.iter().find(|&&(j, _)| j >= n) {
            return Err(MintError::InvalidProblem(format!("row {i} references column {j} of {n}")));
        }
        if !row.rhs.is_finite() {
            return Err(MintError::InvalidProblem(format!("row {i} has non-finite rhs")));
        }
    }
    for j in 0..n {
        if !lp.lower[j].is_finite() || lp.upper[j].is_nan() {
            return Err(MintError::InvalidProblem(format!("column {j} needs a finite lower bound")));
        }
        if lp.lower[j] > lp.upper[j] {
            return Ok(LpResult {
                status: LpStatus::Infeasible,
                objective: f64::NAN,
                values: lp.lower.clone(),
                basis: vec![VarStatus::AtLower; n],
                iterations: 0,
            });
        }
    }
    let cap = opts.iteration_cap.unwrap_or(50 * (lp.rows.len() + n));
    Simplex::new(lp, *opts, cap).run()
}

enum Step {
    Optimal,
    Unbounded,
}

struct Simplex<'a> {
    lp: &'a LinearProgram,
    opts: LpOptions,
    cap: usize,
    iterations: usize,
    m: usize,
    n: usize,
    cols: usize,
    /// Row-major `m x cols` tableau, `B^-1 A`.
    tab: Vec<f64>,
    beta: Vec<f64>,
    basis: Vec<usize>,
    status: Vec<VarStatus>,
    lower: Vec<f64>,
    upper: Vec<f64>,
    cost: Vec<f64>,
    reduced: Vec<f64>,
    eligible: Vec<bool>,
    /// Column that was basic in each row at the start, with its coefficient
    /// there; those columns of the tableau hold `B^-1`.
    initial: Vec<(usize, f64)>,
    /// Original sparse columns of slacks and artificials.
    aux_coef: Vec<(usize, f64)>,
}

impl<'a> Simplex<'a> {
    fn new(lp: &'a LinearProgram, opts: LpOptions, cap: usize) -> Self {
        let m = lp.rows.len();
        let n = lp.columns();
        let mut residual: Vec<f64> = lp
            .rows
            .iter()
            .map(|r| r.rhs - r.coeffs.iter().map(|&(j, a)| a * lp.lower[j]).sum::<f64>())
            .collect();
        // Decide per row whether the slack can start basic.
        let mut needs_art = vec![false; m];
        let mut slack_sign = vec![1.0; m];
        for (i, row) in lp.rows.iter().enumerate() {
            let r = residual[i];
            match row.relation {
                Relation::Le => needs_art[i] = r < 0.0,
                Relation::Ge => {
                    slack_sign[i] = -1.0;
                    needs_art[i] = r > 0.0;
                }
                Relation::Eq => needs_art[i] = true,
            }
        }
        let arts = needs_art.iter().filter(|&&b| b).count();
        let cols = n + m + arts;
        let mut tab = vec![0.0; m * cols];
        let mut lower = lp.lower.clone();
        let mut upper = lp.upper.clone();
        let mut aux_coef = Vec::with_capacity(m + arts);
        for (i, row) in lp.rows.iter().enumerate() {
            lower.push(0.0);
            upper.push(if row.relation == Relation::Eq { 0.0 } else { f64::INFINITY });
            aux_coef.push((i, slack_sign[i]));
        }
        let mut basis = vec![0; m];
        let mut beta = vec![0.0; m];
        let mut initial = Vec::with_capacity(m);
        let eligible = vec![true; cols];
        let mut status = vec![VarStatus::AtLower; cols];
        let mut next_art = n + m;
        for (i, row) in lp.rows.iter().enumerate() {
            let (col, coef) = if needs_art[i] {
                let g = if residual[i] < 0.0 { -1.0 } else { 1.0 };
                let c = next_art;
                next_art += 1;
                lower.push(0.0);
                upper.push(f64::INFINITY);
                aux_coef.push((i, g));
                (c, g)
            } else {
                (n + i, slack_sign[i])
            };
            let base = i * cols;
            for &(j, a) in &row.coeffs {
                tab[base + j] += a / coef;
            }
            tab[base + n + i] = slack_sign[i] / coef;
            if col != n + i {
                tab[base + col] = 1.0;
            }
            residual[i] /= coef;
            basis[i] = col;
            beta[i] = residual[i];
            status[col] = VarStatus::Basic;
            initial.push((col, coef));
        }
        Simplex {
            lp,
            opts,
            cap,
            iterations: 0,
            m,
            n,
            cols,
            tab,
            beta,
            basis,
            status,
            lower,
            upper,
            cost: vec![0.0; cols],
            reduced: vec![0.0; cols],
            eligible,
            initial,
            aux_coef,
        }
    }

    fn nonbasic_value(&self, j: usize) -> f64 {
        match self.status[j] {
            VarStatus::AtUpper => self.upper[j],
            _ => self.lower[j],
        }
    }

    fn set_costs(&mut self, cost: Vec<f64>) {
        self.cost = cost;
        self.reduced.copy_from_slice(&self.cost);
        for i in 0..self.m {
            let cb = self.cost[self.basis[i]];
            if cb != 0.0 {
                let row = &self.tab[i * self.cols..(i + 1) * self.cols];
                for (d, a) in self.reduced.iter_mut().zip(row) {
                    *d -= cb * a;
                }
            }
        }
    }

    /// Recomputes basic values from the original data to shed drift.
    fn refresh(&mut self) {
        let mut rhs: Vec<f64> = self.lp.rows.iter().map(|r| r.rhs).collect();
        for (i, row) in self.lp.rows.iter().enumerate() {
            for &(j, a) in &row.coeffs {
                if self.status[j] != VarStatus::Basic {
                    rhs[i] -= a * self.nonbasic_value(j);
                }
            }
        }
        for (k, &(i, a)) in self.aux_coef.iter().enumerate() {
            let j = self.n + k;
            if self.status[j] != VarStatus::Basic {
                rhs[i] -= a * self.nonbasic_value(j);
            }
        }
        for r in 0..self.m {
            let row = &self.tab[r * self.cols..(r + 1) * self.cols];
            self.beta[r] = self
                .initial
                .iter()
                .zip(&rhs)
                .map(|(&(col, coef), b)| row[col] / coef * b)
                .sum();
        }
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let cols = self.cols;
        let piv = self.tab[r * cols + j];
        {
            let row = &mut self.tab[r * cols..(r + 1) * cols];
            for a in row.iter_mut() {
                *a /= piv;
            }
            row[j] = 1.0;
        }
        let (before, rest) = self.tab.split_at_mut(r * cols);
        let (prow, after) = rest.split_at_mut(cols);
        for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
            let f = other[j];
            if f != 0.0 {
                for (a, p) in other.iter_mut().zip(prow.iter()) {
                    *a -= f * p;
                }
                other[j] = 0.0;
            }
        }
        let f = self.reduced[j];
        if f != 0.0 {
            for (d, p) in self.reduced.iter_mut().zip(prow.iter()) {
                *d -= f * p;
            }
            self.reduced[j] = 0.0;
        }
    }

    fn iterate(&mut self) -> Result<Step> {
        let cols = self.cols;
        loop {
            let mut entering = None;
            for j in 0..cols {
                if self.status[j] == VarStatus::Basic || !self.eligible[j] || self.upper[j] <= self.lower[j] {
                    continue;
                }
                let d = self.reduced[j];
                match self.status[j] {
                    VarStatus::AtLower if d < -self.opts.optimality_tol => {
                        entering = Some((j, 1.0));
                        break;
                    }
                    VarStatus::AtUpper if d > self.opts.optimality_tol => {
                        entering = Some((j, -1.0));
                        break;
                    }
                    _ => {}
                }
            }
            let Some((j, dir)) = entering else {
                return Ok(Step::Optimal);
            };
            self.iterations += 1;
            if self.iterations > self.cap {
                return Err(MintError::IterationLimit(self.cap));
            }

            // Ratio test; `None` row means the entering column flips bounds.
            let mut theta = self.upper[j] - self.lower[j];
            let mut leave: Option<(usize, VarStatus)> = None;
            let mut leave_index = j;
            for i in 0..self.m {
                let alpha = dir * self.tab[i * cols + j];
                let b = self.basis[i];
                let (limit, bound) = if alpha > self.opts.pivot_tol {
                    ((self.beta[i] - self.lower[b]) / alpha, VarStatus::AtLower)
                } else if alpha < -self.opts.pivot_tol {
                    if self.upper[b].is_infinite() {
                        continue;
                    }
                    ((self.upper[b] - self.beta[i]) / -alpha, VarStatus::AtUpper)
                } else {
                    continue;
                };
                let limit = limit.max(0.0);
                let tie = theta.is_finite() && (limit - theta).abs() <= 1e-12 * (1.0 + theta.abs());
                if (limit < theta && !tie) || (tie && b < leave_index) {
                    theta = limit;
                    leave = Some((i, bound));
                    leave_index = b;
                }
            }
            if theta.is_infinite() {
                return Ok(Step::Unbounded);
            }
            let step = theta * dir;
            let entering_value = self.nonbasic_value(j) + step;
            for i in 0..self.m {
                let a = self.tab[i * cols + j];
                if a != 0.0 {
                    self.beta[i] -= step * a;
                }
            }
            match leave {
                None => {
                    self.status[j] = if dir > 0.0 { VarStatus::AtUpper } else { VarStatus::AtLower };
                }
                Some((r, bound)) => {
                    let out = self.basis[r];
                    self.status[out] = bound;
                    self.beta[r] = entering_value;
                    self.basis[r] = j;
                    self.status[j] = VarStatus::Basic;
                    self.pivot(r, j);
                }
            }
        }
    }

    fn phase_one(&mut self) -> Result<bool> {
        let first_art = self.n + self.m;
        if self.cols == first_art {
            return Ok(true);
        }
        let mut cost = vec![0.0; self.cols];
        for c in cost.iter_mut().skip(first_art) {
            *c = 1.0;
        }
        self.set_costs(cost);
        match self.iterate()? {
            Step::Optimal => {}
            Step::Unbounded => unreachable!("phase-one objective is bounded below by zero"),
        }
        self.refresh();
        let scale = 1.0 + self.lp.rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        let infeasibility: f64 = (0..self.m)
            .filter(|&i| self.basis[i] >= first_art)
            .map(|i| self.beta[i].abs())
            .sum();
        if infeasibility > self.opts.feasibility_tol * scale {
            return Ok(false);
        }
        // Pivot remaining zero-valued artificials out where possible.
        for r in 0..self.m {
            if self.basis[r] < first_art {
                continue;
            }
            let candidate = (0..first_art).find(|&j| {
                self.status[j] != VarStatus::Basic && self.tab[r * self.cols + j].abs() > self.opts.pivot_tol * 1e3
            });
            if let Some(j) = candidate {
                let out = self.basis[r];
                self.status[out] = VarStatus::AtLower;
                self.beta[r] = self.nonbasic_value(j);
                self.basis[r] = j;
                self.status[j] = VarStatus::Basic;
                self.pivot(r, j);
            }
        }
        for j in first_art..self.cols {
            self.upper[j] = 0.0;
            self.eligible[j] = false;
        }
        self.refresh();
        Ok(true)
    }

    fn run(mut self) -> Result<LpResult> {
        let feasible = self.phase_one()?;
        if !feasible {
            return Ok(self.finish(LpStatus::Infeasible));
        }
        let mut cost = vec![0.0; self.cols];
        cost[..self.n].copy_from_slice(&self.lp.objective);
        self.set_costs(cost);
        let step = self.iterate()?;
        self.refresh();
        Ok(self.finish(match step {
            Step::Optimal => LpStatus::Optimal,
            Step::Unbounded => LpStatus::Unbounded,
        }))
    }

    fn finish(self, status: LpStatus) -> LpResult {
        let mut values: Vec<f64> = (0..self.n).map(|j| self.nonbasic_value(j)).collect();
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.n {
                values[b] = self.beta[r].clamp(self.lower[b], self.upper[b]);
            }
        }
        let objective = match status {
            LpStatus::Optimal => self.lp.objective.iter().zip(&values).map(|(c, x)| c * x).sum(),
            LpStatus::Infeasible => f64::NAN,
            LpStatus::Unbounded => f64::NEG_INFINITY,
        };
        LpResult {
            status,
            objective,
            values,
            basis: self.status[..self.n].to_vec(),
            iterations: self.iterations,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(objective: Vec<f64>, rows: Vec<LinearRow>, lower: Vec<f64>, upper: Vec<f64>) -> LinearProgram {
        LinearProgram {
            objective,
            rows,
            lower,
            upper,
        }
    }

    #[test]
    fn single_constraint_optimum() {
        let p = lp(
            vec![-1.0],
            vec![LinearRow::new(vec![(0, 1.0)], Relation::Le, 5.0)],
            vec![0.0],
            vec![10.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.values[0] - 5.0).abs() < 1e-12);
        assert!((r.objective + 5.0).abs() < 1e-12);
    }

    #[test]
    fn zero_objective_is_optimal() {
        let p = lp(
            vec![0.0, 0.0],
            vec![
                LinearRow::new(vec![(0, 1.0), (1, 1.0)], Relation::Ge, 3.0),
                LinearRow::new(vec![(0, 1.0), (1, -1.0)], Relation::Eq, 1.0),
            ],
            vec![0.0, 0.0],
            vec![f64::INFINITY, f64::INFINITY],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.objective, 0.0);
        for row in &p.rows {
            assert!(row.relation.holds(row.activity(&r.values), row.rhs, 1e-9));
        }
    }

    #[test]
    fn contradictory_rows_are_infeasible() {
        let p = lp(
            vec![1.0],
            vec![
                LinearRow::new(vec![(0, 1.0)], Relation::Ge, 1.0),
                LinearRow::new(vec![(0, 1.0)], Relation::Le, 0.0),
            ],
            vec![0.0],
            vec![f64::INFINITY],
        );
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn open_direction_is_unbounded() {
        let p = lp(
            vec![-1.0, 0.0],
            vec![LinearRow::new(vec![(0, 1.0), (1, -1.0)], Relation::Le, 2.0)],
            vec![0.0, 0.0],
            vec![f64::INFINITY, f64::INFINITY],
        );
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn bound_flip_reaches_upper_bound() {
        let p = lp(vec![-1.0, -2.0], vec![], vec![1.0, -3.0], vec![4.0, 2.0]);
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.values, vec![4.0, 2.0]);
        assert_eq!(r.basis, vec![VarStatus::AtUpper, VarStatus::AtUpper]);
    }

    #[test]
    fn crossed_bounds_are_infeasible() {
        let p = lp(vec![1.0], vec![], vec![2.0], vec![1.0]);
        assert_eq!(solve_lp(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn rejects_missing_lower_bound() {
        let p = lp(vec![1.0], vec![], vec![f64::NEG_INFINITY], vec![1.0]);
        assert!(matches!(solve_lp(&p), Err(MintError::InvalidProblem(_))));
    }

    #[test]
    fn iteration_cap_is_reported() {
        let p = lp(
            vec![-1.0, -1.0],
            vec![
                LinearRow::new(vec![(0, 1.0), (1, 2.0)], Relation::Le, 4.0),
                LinearRow::new(vec![(0, 3.0), (1, 1.0)], Relation::Le, 6.0),
            ],
            vec![0.0, 0.0],
            vec![f64::INFINITY, f64::INFINITY],
        );
        let opts = LpOptions {
            iteration_cap: Some(1),
            ..LpOptions::default()
        };
        assert_eq!(solve_lp_with(&p, &opts), Err(MintError::IterationLimit(1)));
        let r = solve_lp(&p).unwrap();
        assert!((r.objective + 2.8).abs() < 1e-9);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let p = lp(
            vec![1.0, 1.0],
            vec![
                LinearRow::new(vec![(0, 1.0), (1, 1.0)], Relation::Eq, 2.0),
                LinearRow::new(vec![(0, 2.0), (1, 2.0)], Relation::Eq, 4.0),
            ],
            vec![0.0, 0.0],
            vec![5.0, 5.0],
        );
        let r = solve_lp(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert!((r.objective - 2.0).abs() < 1e-9);
    }
}
