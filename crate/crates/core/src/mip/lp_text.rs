//! Plain-text dump of a [`StandardFormProblem`], loosely modelled on the CPLEX
//! LP format. Numbers are written in Rust's shortest round-trip notation so
//! parsing a dump reproduces the problem exactly.
//!
//! ```text
//! mintplan-lp v1
//! \ layout quarters=1 denominations=1 blanking_levels=1 striking_levels=1 objective=weighted
//! minimize
//!  obj: +5 c_t0_i1 +7 h_t0 +11 a_t0_j1 -1 K
//! subject to
//!  anneal_cap_t0: +1 f_t0_d0 -30 h_t0 <= 60
//!  ...
//! bounds
//!  0 <= f_t0_d0 <= 100
//!  ...
//! binary
//!  c_t0_i1
//!  ...
//! end
//! ```

use std::fmt::Write as _;

use super::{Column, Layout, ObjectiveMode, Row, RowLabel, StandardFormProblem, VariableKind};
use crate::error::{MintError, Result};
use crate::lpsolve::Relation;

pub const LP_TEXT_HEADER: &str = "mintplan-lp v1";

fn terms(out: &mut String, p: &StandardFormProblem, coeffs: impl Iterator<Item = (usize, f64)>) {
    for (j, a) in coeffs {
        let _ = write!(out, " {a:+} {}", p.column_name(j));
    }
}

pub fn export_lp_text(p: &StandardFormProblem) -> String {
    let l = &p.layout;
    let mode = match p.mode {
        ObjectiveMode::Weighted => "weighted",
        ObjectiveMode::Lexicographic => "lexicographic",
    };
    let mut out = String::new();
    let _ = writeln!(out, "{LP_TEXT_HEADER}");
    let _ = writeln!(
        out,
        "\\ layout quarters={} denominations={} blanking_levels={} striking_levels={} objective={mode}",
        l.quarters, l.denominations, l.blanking_levels, l.striking_levels
    );
    out.push_str("minimize\n obj:");
    terms(&mut out, p, p.objective.iter().copied().enumerate().filter(|&(_, c)| c != 0.0));
    out.push_str("\nsubject to\n");
    for row in &p.rows {
        let _ = write!(out, " {}:", row.label);
        terms(&mut out, p, row.coeffs.iter().copied());
        let _ = writeln!(out, " {} {}", row.relation.symbol(), row.rhs);
    }
    out.push_str("bounds\n");
    for (j, c) in p.columns.iter().enumerate() {
        let _ = writeln!(out, " {} <= {} <= {}", c.lower, p.column_name(j), c.upper);
    }
    out.push_str("binary\n");
    for j in p.binary_columns() {
        let _ = writeln!(out, " {}", p.column_name(j));
    }
    out.push_str("end\n");
    out
}

struct Parser<'a> {
    lines: std::iter::Enumerate<std::str::Lines<'a>>,
}

fn err(line: usize, msg: impl std::fmt::Display) -> MintError {
    MintError::Parse(format!("line {}: {msg}", line + 1))
}

impl<'a> Parser<'a> {
    fn next(&mut self) -> Result<(usize, &'a str)> {
        self.lines.next().ok_or_else(|| MintError::Parse("unexpected end of LP text".into()))
    }

    fn expect(&mut self, want: &str) -> Result<()> {
        let (n, line) = self.next()?;
        if line.trim_end() == want {
            Ok(())
        } else {
            Err(err(n, format!("expected `{want}`, found `{line}`")))
        }
    }
}

fn number(n: usize, tok: &str) -> Result<f64> {
    tok.parse::<f64>().map_err(|_| err(n, format!("bad number `{tok}`")))
}

fn column(n: usize, layout: &Layout, name: &str) -> Result<usize> {
    VariableKind::parse(name)
        .and_then(|k| layout.position(k))
        .ok_or_else(|| err(n, format!("unknown column `{name}`")))
}

fn parse_terms(n: usize, layout: &Layout, toks: &[&str]) -> Result<Vec<(usize, f64)>> {
    if !toks.len().is_multiple_of(2) {
        return Err(err(n, "terms must be coefficient/column pairs"));
    }
    toks.chunks(2)
        .map(|pair| Ok((column(n, layout, pair[1])?, number(n, pair[0])?)))
        .collect()
}

pub fn parse_lp_text(text: &str) -> Result<StandardFormProblem> {
    let mut p = Parser { lines: text.lines().enumerate() };
    p.expect(LP_TEXT_HEADER)?;

    let (n, line) = p.next()?;
    let fields = line
        .strip_prefix("\\ layout ")
        .ok_or_else(|| err(n, "expected layout comment"))?;
    let mut dims = [None; 4];
    let mut mode = None;
    for field in fields.split_whitespace() {
        let (key, value) = field.split_once('=').ok_or_else(|| err(n, format!("bad field `{field}`")))?;
        let slot = match key {
            "quarters" => 0,
            "denominations" => 1,
            "blanking_levels" => 2,
            "striking_levels" => 3,
            "objective" => {
                mode = Some(match value {
                    "weighted" => ObjectiveMode::Weighted,
                    "lexicographic" => ObjectiveMode::Lexicographic,
                    _ => return Err(err(n, format!("unknown objective mode `{value}`"))),
                });
                continue;
            }
            _ => return Err(err(n, format!("unknown layout key `{key}`"))),
        };
        dims[slot] = Some(value.parse::<usize>().map_err(|_| err(n, format!("bad count `{value}`")))?);
    }
    let [Some(quarters), Some(denominations), Some(blanking_levels), Some(striking_levels)] = dims else {
        return Err(err(n, "layout is missing a dimension"));
    };
    let mode = mode.ok_or_else(|| err(n, "layout is missing the objective mode"))?;
    let layout = Layout {
        quarters,
        denominations,
        blanking_levels,
        striking_levels,
    };

    p.expect("minimize")?;
    let (n, line) = p.next()?;
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks.first() != Some(&"obj:") {
        return Err(err(n, "expected objective line `obj:`"));
    }
    let mut objective = vec![0.0; layout.columns()];
    for (j, c) in parse_terms(n, &layout, &toks[1..])? {
        objective[j] = c;
    }

    p.expect("subject to")?;
    let mut rows = Vec::new();
    let mut line = p.next()?;
    while line.1.trim_end() != "bounds" {
        let (n, text) = line;
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() < 3 {
            return Err(err(n, "truncated row"));
        }
        let name = toks[0].strip_suffix(':').ok_or_else(|| err(n, "row name must end with `:`"))?;
        let label = RowLabel::parse(name).ok_or_else(|| err(n, format!("unknown row label `{name}`")))?;
        let relation = match toks[toks.len() - 2] {
            "<=" => Relation::Le,
            "=" => Relation::Eq,
            ">=" => Relation::Ge,
            other => return Err(err(n, format!("bad relation `{other}`"))),
        };
        rows.push(Row {
            label,
            coeffs: parse_terms(n, &layout, &toks[1..toks.len() - 2])?,
            relation,
            rhs: number(n, toks[toks.len() - 1])?,
        });
        line = p.next()?;
    }

    let mut columns = Vec::with_capacity(layout.columns());
    for j in 0..layout.columns() {
        let (n, text) = p.next()?;
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 5 || toks[1] != "<=" || toks[3] != "<=" {
            return Err(err(n, "expected `lower <= name <= upper`"));
        }
        if column(n, &layout, toks[2])? != j {
            return Err(err(n, format!("bounds out of column order at `{}`", toks[2])));
        }
        columns.push(Column {
            lower: number(n, toks[0])?,
            upper: number(n, toks[4])?,
        });
    }

    p.expect("binary")?;
    let problem = StandardFormProblem {
        layout,
        mode,
        objective,
        columns,
        rows,
    };
    let mut binaries = Vec::new();
    loop {
        let (n, text) = p.next()?;
        let name = text.trim();
        if name == "end" {
            break;
        }
        binaries.push(column(n, &layout, name)?);
    }
    if binaries != problem.binary_columns() {
        return Err(MintError::Parse("binary section does not match the level columns".into()));
    }
    Ok(problem)
}
