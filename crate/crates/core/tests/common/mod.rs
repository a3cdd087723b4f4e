//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use mintplan_core::lpsolve::{LinearProgram, LinearRow, Relation};
use rand::Rng;

/// Ground truth for a small LP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truth {
    Optimal(f64),
    Infeasible,
    Unbounded,
}

const VERTEX_TOL: f64 = 1e-9;

/// Dense halfspace `a · x (rel) b`.
#[derive(Clone)]
struct Half {
    a: Vec<f64>,
    rel: Relation,
    b: f64,
}

impl Half {
    fn holds(&self, x: &[f64]) -> bool {
        let lhs: f64 = self.a.iter().zip(x).map(|(a, x)| a * x).sum();
        let scale = 1.0 + self.b.abs() + self.a.iter().zip(x).map(|(a, x)| (a * x).abs()).sum::<f64>();
        self.rel.holds(lhs, self.b, 1e-9 * scale)
    }
}

/// Solves the square system `m x = rhs` with partial pivoting; `None` when
/// singular.
fn solve_square(mut m: Vec<Vec<f64>>, mut rhs: Vec<f64>) -> Option<Vec<f64>> {
    let n = rhs.len();
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().total_cmp(&m[b][c].abs()))?;
        if m[p][c].abs() < VERTEX_TOL {
            return None;
        }
        m.swap(c, p);
        rhs.swap(c, p);
        for r in 0..n {
            if r != c {
                let f = m[r][c] / m[c][c];
                if f != 0.0 {
                    let pivot = m[c].clone();
                    for (v, p) in m[r].iter_mut().zip(&pivot).skip(c) {
                        *v -= f * p;
                    }
                    rhs[r] -= f * rhs[c];
                }
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

fn combinations(n: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit);
}

/// Smallest `c · x` over the vertices of `{x : halves}`, `None` when no
/// vertex exists.
fn best_vertex(n: usize, halves: &[Half], c: &[f64]) -> Option<f64> {
    let mut best: Option<f64> = None;
    combinations(halves.len(), n, |idx| {
        let m = idx.iter().map(|&i| halves[i].a.clone()).collect();
        let rhs = idx.iter().map(|&i| halves[i].b).collect();
        if let Some(x) = solve_square(m, rhs) {
            if halves.iter().all(|h| h.holds(&x)) {
                let v: f64 = c.iter().zip(&x).map(|(c, x)| c * x).sum();
                best = Some(best.map_or(v, |b: f64| b.min(v)));
            }
        }
    });
    best
}

fn dense(row: &LinearRow, n: usize) -> Vec<f64> {
    let mut a = vec![0.0; n];
    for &(j, v) in &row.coeffs {
        a[j] += v;
    }
    a
}

/// Vertex enumeration. Every column needs a finite lower bound, so a
/// non-empty feasible set always has a vertex; unboundedness is read off the
/// vertices of the normalized recession cone.
pub fn vertex_oracle(lp: &LinearProgram) -> Truth {
    let n = lp.columns();
    let unit = |j: usize| {
        let mut a = vec![0.0; n];
        a[j] = 1.0;
        a
    };
    let mut halves: Vec<Half> = lp
        .rows
        .iter()
        .map(|r| Half {
            a: dense(r, n),
            rel: r.relation,
            b: r.rhs,
        })
        .collect();
    for j in 0..n {
        halves.push(Half { a: unit(j), rel: Relation::Ge, b: lp.lower[j] });
        if lp.upper[j].is_finite() {
            halves.push(Half { a: unit(j), rel: Relation::Le, b: lp.upper[j] });
        }
    }
    let Some(best) = best_vertex(n, &halves, &lp.objective) else {
        return Truth::Infeasible;
    };
    let mut cone: Vec<Half> = halves.iter().map(|h| Half { b: 0.0, ..h.clone() }).collect();
    cone.push(Half { a: vec![1.0; n], rel: Relation::Eq, b: 1.0 });
    match best_vertex(n, &cone, &lp.objective) {
        Some(slope) if slope < -1e-9 => Truth::Unbounded,
        _ => Truth::Optimal(best),
    }
}

/// Dense LP with at most `max_vars` columns and `max_rows` rows, small
/// integer data, lower bounds at zero and some finite upper bounds.
pub fn random_lp<R: Rng>(rng: &mut R, max_vars: usize, max_rows: usize) -> LinearProgram {
    let n = rng.random_range(1..=max_vars);
    let m = rng.random_range(1..=max_rows);
    let coef = |rng: &mut R| f64::from(rng.random_range(-5i8..=5));
    let objective = (0..n).map(|_| coef(rng)).collect();
    let rows = (0..m)
        .map(|_| {
            let coeffs = (0..n).map(|j| (j, coef(rng))).collect();
            let relation = match rng.random_range(0..5) {
                0 => Relation::Eq,
                1 | 2 => Relation::Ge,
                _ => Relation::Le,
            };
            LinearRow::new(coeffs, relation, f64::from(rng.random_range(-10i8..=10)))
        })
        .collect();
    let upper = (0..n)
        .map(|_| if rng.random_bool(0.3) { f64::from(rng.random_range(1u8..=10)) } else { f64::INFINITY })
        .collect();
    LinearProgram {
        objective,
        rows,
        lower: vec![0.0; n],
        upper,
    }
}

use mintplan_core::heuristics::{procedure1, procedure2, Planner};
use mintplan_core::mip::{assignment, build, check_solution};
use mintplan_core::{plan, MintConfig, MintError, PlannerOptions, Refined, Scenario, Solution};

/// Every planner configuration the audit runs.
pub fn planner_variants() -> Vec<PlannerOptions> {
    let mut out = Vec::new();
    for (proc1, proc2) in [(false, false), (true, false), (false, true), (true, true)] {
        out.push(PlannerOptions {
            proc1,
            proc2,
            ..PlannerOptions::default()
        });
    }
    out.push(PlannerOptions {
        order: mintplan_core::HeuristicOrder::FillFirst,
        ..PlannerOptions::default()
    });
    out
}

/// Violated rows of the unmodified model for `sol`, plus any order that is
/// not a whole multiple of `granularity`.
pub fn audit(s: &Scenario, cfg: &MintConfig, sol: &Solution, granularity: f64) -> Vec<String> {
    let p = build(s, cfg, &[]).expect("valid scenario");
    let mut bad = check_solution(&p, &assignment(&p, sol));
    for (t, row) in sol.plan.orders.iter().enumerate() {
        for (d, f) in row.iter().enumerate() {
            let units = f / granularity;
            if (units - units.round()).abs() > 1e-9 {
                bad.push(format!("order f[{t}][{d}] = {f} is not whole"));
            }
        }
    }
    bad
}

/// Runs every planner variant on `s` and audits each optimal result.
/// Returns how many optimal solutions were audited.
pub fn audit_pipeline(s: &Scenario, cfg: &MintConfig) -> Result<usize, String> {
    let mut audited = 0;
    for opts in planner_variants() {
        match plan(s, cfg, &opts) {
            Ok(r) if r.solution.is_optimal() => {
                let bad = audit(s, cfg, &r.solution, opts.integerize.granularity);
                if !bad.is_empty() {
                    return Err(format!("{opts:?}: {bad:?}"));
                }
                audited += 1;
            }
            Ok(_) | Err(MintError::RepairInfeasible { .. }) => {}
            Err(e) => return Err(e.to_string()),
        }
    }
    Ok(audited)
}

/// What one scenario says about the two procedures' contracts.
#[derive(Debug, Default, Clone, Copy)]
pub struct ContractCheck {
    pub proc1_fired: bool,
    pub proc2_fired: bool,
}

/// Checks both procedures from the same starting plan: Procedure 1 keeps
/// the shift cost, Procedure 2 stays feasible for the original model, and a
/// procedure whose guards are all false changes nothing.
pub fn heuristic_contracts(s: &Scenario, cfg: &MintConfig) -> Result<Option<ContractCheck>, String> {
    let opts = PlannerOptions::default();
    let planner = Planner { scenario: s, cfg, opts: &opts };
    let start = match planner.solve(&[]) {
        Ok(sol) if sol.is_optimal() => Refined::new(sol),
        Ok(_) | Err(MintError::RepairInfeasible { .. }) => return Ok(None),
        Err(e) => return Err(e.to_string()),
    };
    let mut out = ContractCheck::default();

    let one = procedure1(&planner, start.clone()).map_err(|e| e.to_string())?;
    out.proc1_fired = one.log.iter().any(|st| st.fired);
    if out.proc1_fired {
        let drift = (one.solution.cost - start.solution.cost).abs();
        if drift > 1e-6 {
            return Err(format!("procedure 1 changed the cost by {drift}"));
        }
    } else if one.solution != start.solution {
        return Err("procedure 1 changed the plan with every guard false".into());
    }
    let bad = audit(s, cfg, &one.solution, opts.integerize.granularity);
    if !bad.is_empty() {
        return Err(format!("procedure 1 output infeasible: {bad:?}"));
    }

    let two = procedure2(&planner, start.clone()).map_err(|e| e.to_string())?;
    out.proc2_fired = two.log.iter().any(|st| st.fired);
    if !out.proc2_fired && two.solution != start.solution {
        return Err("procedure 2 changed the plan with every guard false".into());
    }
    let bad = audit(s, cfg, &two.solution, opts.integerize.granularity);
    if !bad.is_empty() {
        return Err(format!("procedure 2 output infeasible: {bad:?}"));
    }
    Ok(Some(out))
}
