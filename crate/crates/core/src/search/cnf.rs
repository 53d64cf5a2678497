//! DIMACS encoding of the avoidance question.
//!
//! Variable `v(e, c) = e * r + c + 1` means "element `e` may take color `c`".
//! Each element gets an at-least-one clause; each deduplicated candidate set
//! and color gets the clause forbidding that color on all of its members.
//! There are no at-most-one clauses: any true color per element yields an
//! avoiding coloring, since a monochromatic candidate in color `c` would make
//! every literal of its `c` clause false.

use std::fmt::Write as _;
use std::sync::Arc;

use thiserror::Error;

use super::Problem;
use crate::coloring::{Color, Coloring};
use crate::detector::CandidateTable;
use crate::pattern::{resolve_family, Family, FamilyOptions};
use crate::window::Window;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("element {element} has no true color in the assignment")]
    NoColor { element: usize },
    #[error("literal {0} names no variable of the instance")]
    UnknownVariable(i64),
    #[error("malformed DIMACS: {0}")]
    Syntax(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CnfInstance {
    pub family: Family,
    pub window: Arc<Window>,
    pub r: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl CnfInstance {
    pub fn num_elements(&self) -> usize {
        self.window.len()
    }

    pub fn num_vars(&self) -> usize {
        self.window.len() * self.r
    }

    pub fn var(&self, element: usize, color: usize) -> i64 {
        (element * self.r + color + 1) as i64
    }

    /// `(element, color)` of a positive variable.
    pub fn decode(&self, var: i64) -> Option<(usize, usize)> {
        let v = usize::try_from(var).ok()?.checked_sub(1)?;
        (v < self.num_vars()).then(|| (v / self.r, v % self.r))
    }

    /// DIMACS text with `c family`, `c window` and `c colors` metadata lines.
    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        let opts = serde_json::to_string(&self.family.options()).expect("options serialize");
        writeln!(out, "c family {}", self.family).unwrap();
        writeln!(out, "c options {opts}").unwrap();
        writeln!(out, "c window {}", self.window).unwrap();
        writeln!(out, "c colors {}", self.r).unwrap();
        writeln!(out, "p cnf {} {}", self.num_vars(), self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn from_dimacs(text: &str) -> Result<Self, CnfError> {
        let bad = |m: &str| CnfError::Syntax(m.to_string());
        let mut family = None;
        let mut options = FamilyOptions::default();
        let mut window = None;
        let mut r = None;
        let mut header = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if let Some(meta) = line.strip_prefix('c') {
                let meta = meta.trim();
                if let Some(v) = meta.strip_prefix("family ") {
                    family = Some(v.to_string());
                } else if let Some(v) = meta.strip_prefix("options ") {
                    options = serde_json::from_str(v).map_err(|e| bad(&e.to_string()))?;
                } else if let Some(v) = meta.strip_prefix("window ") {
                    window = Some(v.parse::<Window>().map_err(|e| bad(&e.to_string()))?);
                } else if let Some(v) = meta.strip_prefix("colors ") {
                    r = Some(v.trim().parse::<usize>().map_err(|_| bad("colors"))?);
                }
                continue;
            }
            if let Some(h) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> = h
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|_| bad("header")))
                    .collect::<Result<_, _>>()?;
                let [v, c] = nums[..] else { return Err(bad("header")) };
                header = Some((v, c));
                continue;
            }
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|_| bad(tok))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(lit);
                }
            }
        }
        if !current.is_empty() {
            return Err(bad("unterminated clause"));
        }
        let family = family.ok_or_else(|| bad("missing `c family` line"))?;
        let family = resolve_family(&family, options).map_err(|e| bad(&e.to_string()))?;
        let window = Arc::new(window.ok_or_else(|| bad("missing `c window` line"))?);
        let r = r.ok_or_else(|| bad("missing `c colors` line"))?;
        let (vars, count) = header.ok_or_else(|| bad("missing header"))?;
        if vars != window.len() * r || count != clauses.len() {
            return Err(bad("header counts disagree with the body"));
        }
        Ok(CnfInstance {
            family,
            window,
            r,
            clauses,
        })
    }
}

pub fn export_cnf(table: &CandidateTable, r: usize) -> CnfInstance {
    let n = table.window().len();
    let var = |e: usize, c: usize| (e * r + c + 1) as i64;
    let mut clauses: Vec<Vec<i64>> = (0..n).map(|e| (0..r).map(|c| var(e, c)).collect()).collect();
    let problem = Problem::from_table(table, r);
    for set in problem.constraints() {
        for c in 0..r {
            clauses.push(set.iter().map(|&e| -var(e as usize, c)).collect());
        }
    }
    CnfInstance {
        family: table.family().clone(),
        window: table.window().clone(),
        r,
        clauses,
    }
}

/// Reads solver output: `v`-prefixed or bare signed integers; `s`/`c` lines
/// and the terminating `0` are skipped.
pub fn parse_assignment(text: &str) -> Result<Vec<i64>, CnfError> {
    let mut lits = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('s') || line.starts_with('c') {
            continue;
        }
        let body = line.strip_prefix('v').unwrap_or(line);
        for tok in body.split_whitespace() {
            let lit: i64 = tok.parse().map_err(|_| CnfError::Syntax(tok.to_string()))?;
            if lit != 0 {
                lits.push(lit);
            }
        }
    }
    Ok(lits)
}

/// Colors each element with its least true color. Variables absent from the
/// assignment count as false.
pub fn import_assignment(cnf: &CnfInstance, assignment: &[i64]) -> Result<Coloring, CnfError> {
    let mut truth = vec![false; cnf.num_vars()];
    for &lit in assignment {
        let (e, c) = cnf.decode(lit.abs()).ok_or(CnfError::UnknownVariable(lit))?;
        truth[e * cnf.r + c] = lit > 0;
    }
    let colors = (0..cnf.num_elements())
        .map(|e| {
            (0..cnf.r)
                .find(|&c| truth[e * cnf.r + c])
                .map(|c| c as Color)
                .ok_or(CnfError::NoColor { element: e })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Coloring::new(cnf.window.clone(), cnf.r, colors).expect("colors below r"))
}
