//! Rado's columns condition for homogeneous linear systems `A·x = 0`, and a
//! consistency check of its verdict against avoidance search.
//!
//! The decision uses a greedy closure: starting from the zero span, add any
//! nonempty set of unused columns whose sum lies in the span of the used
//! ones. If some ordered partition witnesses the condition, then for any
//! used set `U` the first block not inside `U` has its unused part summing
//! into `span(U)`, so the greedy never gets stuck; and every greedy run is
//! itself such a partition.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{PolynomialQ, Rational};
use crate::detector::CandidateTable;
use crate::pattern::{Family, FamilyOptions, PatternTerm};
use crate::search::{search_avoiding, Outcome, SearchConfig};
use crate::window::Window;

/// Largest column count accepted; the closure enumerates column subsets.
pub const MAX_COLUMNS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RadoError {
    #[error("system has no equations")]
    Empty,
    #[error("row {0} is all zero")]
    ZeroRow(usize),
    #[error("rows have different lengths")]
    Ragged,
    #[error("{0} columns exceed the limit of {MAX_COLUMNS}")]
    TooManyColumns(usize),
    #[error("malformed equation at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("system shape not expressible as a two-variable family: {0}")]
    Unsupported(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearSystem {
    rows: Vec<Vec<Rational>>,
    variables: Vec<String>,
}

impl LinearSystem {
    pub fn new(rows: Vec<Vec<Rational>>) -> Result<Self, RadoError> {
        let cols = rows.first().map_or(0, Vec::len);
        let variables = (1..=cols).map(|i| format!("x{i}")).collect();
        Self::with_variables(rows, variables)
    }

    fn with_variables(rows: Vec<Vec<Rational>>, variables: Vec<String>) -> Result<Self, RadoError> {
        if rows.is_empty() || variables.is_empty() {
            return Err(RadoError::Empty);
        }
        if rows.iter().any(|r| r.len() != variables.len()) {
            return Err(RadoError::Ragged);
        }
        if variables.len() > MAX_COLUMNS {
            return Err(RadoError::TooManyColumns(variables.len()));
        }
        if let Some(i) = rows.iter().position(|r| r.iter().all(Rational::is_zero)) {
            return Err(RadoError::ZeroRow(i));
        }
        Ok(LinearSystem { rows, variables })
    }

    /// One equation `c1*x1 + ... + cn*xn = 0`.
    pub fn single(coeffs: &[Rational]) -> Result<Self, RadoError> {
        Self::new(vec![coeffs.to_vec()])
    }

    pub fn from_integers(coeffs: &[i64]) -> Result<Self, RadoError> {
        Self::single(&coeffs.iter().map(|&c| Rational::from(c)).collect::<Vec<_>>())
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_columns(&self) -> usize {
        self.variables.len()
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn is_single_equation(&self) -> bool {
        self.rows.len() == 1
    }

    pub fn permute_columns(&self, perm: &[usize]) -> Self {
        LinearSystem {
            rows: self.rows.iter().map(|r| perm.iter().map(|&j| r[j].clone()).collect()).collect(),
            variables: perm.iter().map(|&j| self.variables[j].clone()).collect(),
        }
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        LinearSystem {
            rows: self.rows.iter().map(|r| r.iter().map(|c| c * factor).collect()).collect(),
            variables: self.variables.clone(),
        }
    }
}

impl fmt::Display for LinearSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            let mut first = true;
            for (c, v) in row.iter().zip(&self.variables) {
                if c.is_zero() {
                    continue;
                }
                let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
                match (first, sign) {
                    (true, "-") => f.write_str("-")?,
                    (true, _) => {}
                    (false, s) => write!(f, " {s} ")?,
                }
                first = false;
                if mag.is_one() {
                    f.write_str(v)?;
                } else {
                    write!(f, "{mag}*{v}")?;
                }
            }
            f.write_str(" = 0")?;
        }
        Ok(())
    }
}

/// Parses `c1*x1 + c2*x2 - x3 = 0`; several equations may be joined with
/// `;`. Either side may hold terms; variables are identifiers and columns
/// follow their first appearance.
pub fn parse_system(text: &str) -> Result<LinearSystem, RadoError> {
    let mut order: Vec<String> = Vec::new();
    let mut rows: Vec<BTreeMap<usize, Rational>> = Vec::new();
    let mut offset = 0;
    for eq in text.split(';') {
        let (lhs, rhs) = eq.split_once('=').ok_or_else(|| RadoError::Syntax {
            position: offset,
            message: "expected `=`".into(),
        })?;
        let mut row = BTreeMap::new();
        parse_side(lhs, offset, Rational::one(), &mut order, &mut row)?;
        parse_side(rhs, offset + lhs.len() + 1, -Rational::one(), &mut order, &mut row)?;
        rows.push(row);
        offset += eq.len() + 1;
    }
    let rows = rows
        .into_iter()
        .map(|r| (0..order.len()).map(|j| r.get(&j).cloned().unwrap_or_else(Rational::zero)).collect())
        .collect();
    LinearSystem::with_variables(rows, order)
}

pub fn parse_equation(text: &str) -> Result<LinearSystem, RadoError> {
    parse_system(text)
}

fn parse_side(
    text: &str,
    offset: usize,
    sign: Rational,
    order: &mut Vec<String>,
    row: &mut BTreeMap<usize, Rational>,
) -> Result<(), RadoError> {
    let err = |pos: usize, m: &str| RadoError::Syntax {
        position: offset + pos,
        message: m.to_string(),
    };
    let bytes = text.as_bytes();
    let mut i = 0;
    let mut expect_term = true;
    let mut pending_op = false;
    let mut term_sign = Rational::one();
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && bytes[*i].is_ascii_whitespace() {
            *i += 1;
        }
    };
    loop {
        skip_ws(&mut i);
        if i >= bytes.len() {
            break;
        }
        match bytes[i] {
            b'+' | b'-' => {
                if bytes[i] == b'-' {
                    term_sign = -term_sign;
                }
                i += 1;
                expect_term = true;
                pending_op = true;
                continue;
            }
            _ if !expect_term => return Err(err(i, "expected `+` or `-`")),
            _ => {}
        }
        // coefficient: digits with optional `/digits`
        let start = i;
        while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'/') {
            i += 1;
        }
        let coef = if i > start {
            let c: Rational = text[start..i].parse().map_err(|_| err(start, "bad coefficient"))?;
            skip_ws(&mut i);
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
                skip_ws(&mut i);
            } else {
                // a bare constant is only allowed when it is zero
                if !c.is_zero() {
                    return Err(err(start, "nonzero constant term"));
                }
                term_sign = Rational::one();
                expect_term = false;
                pending_op = false;
                continue;
            }
            c
        } else {
            Rational::one()
        };
        let vstart = i;
        while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
            i += 1;
        }
        let name = &text[vstart..i];
        if name.is_empty() || !name.as_bytes()[0].is_ascii_alphabetic() {
            return Err(err(vstart, "expected a variable"));
        }
        let j = match order.iter().position(|v| v == name) {
            Some(j) => j,
            None => {
                order.push(name.to_string());
                order.len() - 1
            }
        };
        let add = &sign * &(&term_sign * &coef);
        let entry = row.entry(j).or_insert_with(Rational::zero);
        *entry = &*entry + &add;
        term_sign = Rational::one();
        expect_term = false;
        pending_op = false;
    }
    if pending_op {
        return Err(err(text.len(), "dangling operator"));
    }
    Ok(())
}

/// Row-echelon basis over ℚ for span membership.
#[derive(Clone, Debug, Default)]
struct Basis {
    rows: Vec<(usize, Vec<Rational>)>,
}

impl Basis {
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (a, b) in v.iter_mut().zip(row) {
                    *a = &*a - &(&f * b);
                }
            }
        }
        v
    }

    fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Rational::is_zero)
    }

    fn insert(&mut self, v: &[Rational]) {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else { return };
        let inv = v[p].recip().expect("nonzero pivot");
        let v: Vec<Rational> = v.iter().map(|x| x * &inv).collect();
        for (_, row) in &mut self.rows {
            if !row[p].is_zero() {
                let f = row[p].clone();
                for (a, b) in row.iter_mut().zip(&v) {
                    *a = &*a - &(&f * b);
                }
            }
        }
        self.rows.push((p, v));
    }
}

fn column_sum(sys: &LinearSystem, cols: impl Iterator<Item = usize>) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); sys.rows.len()];
    for j in cols {
        for (a, row) in acc.iter_mut().zip(&sys.rows) {
            *a = &*a + &row[j];
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColumnsVerdict {
    pub holds: bool,
    /// Ordered blocks of zero-based column indices when the condition holds.
    pub partition: Option<Vec<Vec<usize>>>,
    pub note: String,
}

/// Decides the columns condition, returning an ordered partition witness.
pub fn columns_condition(sys: &LinearSystem) -> ColumnsVerdict {
    let n = sys.num_columns();
    let mut used = vec![false; n];
    let mut basis = Basis::default();
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    while used.iter().any(|u| !u) {
        let remaining: Vec<usize> = (0..n).filter(|&j| !used[j]).collect();
        // smallest subsets first, so the witness blocks are minimal in size
        let block = (1..=remaining.len()).find_map(|size| {
            remaining
                .iter()
                .copied()
                .combinations(size)
                .find(|cand| basis.contains(&column_sum(sys, cand.iter().copied())))
        });
        let Some(block) = block else {
            let names: Vec<&str> = remaining.iter().map(|&j| sys.variables[j].as_str()).collect();
            return ColumnsVerdict {
                holds: false,
                partition: None,
                note: if blocks.is_empty() {
                    "no nonempty set of columns sums to zero".into()
                } else {
                    format!("no nonempty subset of columns {{{}}} sums into the span of the others", names.join(", "))
                },
            };
        };
        for &j in &block {
            used[j] = true;
            basis.insert(&sys.column(j));
        }
        blocks.push(block);
    }
    ColumnsVerdict {
        holds: true,
        note: format!("{} block(s)", blocks.len()),
        partition: Some(blocks),
    }
}

/// For one equation: a set of coefficients summing to zero that contains a
/// nonzero one, if any. Such a set spans every later column.
pub fn zero_subset(coeffs: &[Rational]) -> Option<Vec<usize>> {
    assert!(coeffs.len() <= MAX_COLUMNS);
    (1u32..1 << coeffs.len())
        .filter(|mask| coeffs.iter().enumerate().any(|(b, c)| mask >> b & 1 == 1 && !c.is_zero()))
        .filter(|mask| {
            coeffs
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, c)| c.clone())
                .sum::<Rational>()
                .is_zero()
        })
        .min_by_key(|mask| (mask.count_ones(), *mask))
        .map(|mask| (0..coeffs.len()).filter(|b| mask >> b & 1 == 1).collect())
}

/// Checks an ordered partition against the condition directly.
pub fn check_partition(sys: &LinearSystem, blocks: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; sys.num_columns()];
    for b in blocks {
        if b.is_empty() {
            return false;
        }
        for &j in b {
            if j >= seen.len() || seen[j] {
                return false;
            }
            seen[j] = true;
        }
    }
    if seen.iter().any(|s| !s) {
        return false;
    }
    let mut basis = Basis::default();
    for b in blocks {
        if !basis.contains(&column_sum(sys, b.iter().copied())) {
            return false;
        }
        for &j in b {
            basis.insert(&sys.column(j));
        }
    }
    true
}

/// Expresses a single equation as a family whose instances are solutions:
/// two variables give `{x, c*x}`, three give `{x, y, a*x + b*y}`.
pub fn to_family(sys: &LinearSystem) -> Result<Family, RadoError> {
    if !sys.is_single_equation() {
        return Err(RadoError::Unsupported("more than one equation".into()));
    }
    let row = &sys.rows[0];
    if row.iter().any(Rational::is_zero) {
        return Err(RadoError::Unsupported("zero coefficient".into()));
    }
    let unsupported = |e: crate::pattern::PatternError| RadoError::Unsupported(e.to_string());
    let opts = FamilyOptions::default();
    match row.as_slice() {
        [a, b] => {
            let c = -(a / b);
            let term = PatternTerm::Affine {
                x_coeff: c,
                poly: PolynomialQ::zero(),
                y_scale: Rational::one(),
            };
            Family::dedup(vec![PatternTerm::X, term], opts).map_err(unsupported)
        }
        [a, b, c] => {
            let term = PatternTerm::Affine {
                x_coeff: -(a / c),
                poly: PolynomialQ::monomial(-(b / c), 1),
                y_scale: Rational::one(),
            };
            Family::dedup(vec![PatternTerm::X, PatternTerm::Y, term], opts).map_err(unsupported)
        }
        _ => Err(RadoError::Unsupported(format!("{} variables", row.len()))),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Consistency {
    Confirmed,
    Inconclusive,
    Contradiction,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub r: usize,
    pub n: u64,
    pub outcome: String,
    pub nodes: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConsistencyReport {
    pub system: String,
    pub family: Family,
    pub verdict: ColumnsVerdict,
    pub probes: Vec<ProbeRow>,
    pub status: Consistency,
    pub note: String,
}

/// Compares the columns condition with search on `int:1..N`.
///
/// A regular system is confirmed by an exhaustion at some `N <= n_max` with
/// `r` colors. A non-regular one is confirmed when some `r' <= r` admits an
/// avoiding coloring of `int:1..n_max`; its restriction to every smaller `N`
/// is re-checked by the detector, and a failing restriction is reported as a
/// contradiction.
pub fn cross_validate(
    sys: &LinearSystem,
    r: usize,
    n_max: u64,
    config: &SearchConfig,
) -> Result<ConsistencyReport, RadoError> {
    let family = to_family(sys)?;
    let verdict = columns_condition(sys);
    let mut probes = Vec::new();
    let search = |n: u64, colors: usize| {
        let hi = i64::try_from(n).map_err(|_| RadoError::Unsupported("N too large".into()))?;
        let window = Arc::new(Window::integers(1, hi).map_err(|e| RadoError::Unsupported(e.to_string()))?);
        let table = CandidateTable::build(&family, window).map_err(|e| RadoError::Unsupported(e.to_string()))?;
        Ok::<_, RadoError>(search_avoiding(&table, colors, config))
    };
    let (status, note) = if verdict.holds {
        let mut found = None;
        let mut budget_hit = false;
        for n in 1..=n_max {
            let res = search(n, r)?;
            probes.push(ProbeRow {
                r,
                n,
                outcome: res.outcome.label().into(),
                nodes: res.nodes,
            });
            match res.outcome {
                Outcome::Exhausted { .. } => {
                    found = Some(n);
                    break;
                }
                Outcome::BudgetExceeded => budget_hit = true,
                Outcome::Avoiding(_) => {}
            }
        }
        match found {
            Some(n) => (Consistency::Confirmed, format!("regular; every {r}-coloring of 1..{n} has a solution")),
            None if budget_hit => (Consistency::Inconclusive, "regular; search budget exceeded".into()),
            None => (Consistency::Inconclusive, format!("regular; avoiding {r}-colorings exist up to {n_max}")),
        }
    } else {
        let mut result = (
            Consistency::Inconclusive,
            format!("not regular; no avoiding coloring of 1..{n_max} with at most {r} colors found"),
        );
        for colors in 1..=r {
            let res = search(n_max, colors)?;
            probes.push(ProbeRow {
                r: colors,
                n: n_max,
                outcome: res.outcome.label().into(),
                nodes: res.nodes,
            });
            if let Outcome::Avoiding(c) = &res.outcome {
                let restrictions_ok = (1..=n_max).all(|n| {
                    let window = Arc::new(Window::integers(1, n as i64).expect("n >= 1"));
                    let sub = crate::coloring::Coloring::new(window.clone(), colors, c.colors()[..n as usize].to_vec())
                        .expect("restriction");
                    CandidateTable::build(&family, window).is_ok_and(|t| t.find_witness(&sub).is_none())
                });
                result = if restrictions_ok {
                    (
                        Consistency::Confirmed,
                        format!("not regular; a {colors}-coloring of 1..{n_max} avoids every solution"),
                    )
                } else {
                    (Consistency::Contradiction, "restriction of an avoiding coloring has a solution".into())
                };
                break;
            }
        }
        result
    };
    Ok(ConsistencyReport {
        system: sys.to_string(),
        family,
        verdict,
        probes,
        status,
        note,
    })
}
