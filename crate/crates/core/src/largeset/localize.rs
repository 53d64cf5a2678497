//! Localizing color classes on a multiplicative grid.
//!
//! Given a coloring `C_0..C_{r-1}` of a grid, look for color sets
//! `Y_1..Y_M` and a shape `F` such that
//! (a) each `∪_{m∈Y_l} C_m` is `T`-thick in the grid, and
//! (b) every `x` of the core grid (exponent bound one less) has some `l`
//!     with `x ∈ F·C_m` for all `m ∈ Y_l`.
//! `F` is drawn from the unit ball of the grid (exponents in `{-1, 0, 1}`,
//! with either sign on signed grids), so `x / f` stays in the grid for
//! every core `x`. Reports are re-verified before they are returned.

use itertools::Itertools;
use num_bigint::BigInt;
use serde::Serialize;

use super::{is_thick_for, GroupMode, ShapeF, WindowSet};
use crate::arith::Rational;
use crate::coloring::Coloring;
use crate::window::{Window, WindowKind};

/// Color-subset enumeration is exponential in `r`.
const MAX_LOCALIZE_COLORS: usize = 16;
/// Exhaustive fallback for `F` stops at this size.
const EXHAUSTIVE_F: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalizationReport {
    pub window: String,
    pub core: String,
    pub shape_t: ShapeF,
    pub max_f: usize,
    pub f: Vec<Rational>,
    /// Color index sets `Y_l`.
    pub ys: Vec<Vec<usize>>,
    /// `x_l` with `T·x_l ⊆ ∪_{m∈Y_l} C_m`.
    pub thickness_witnesses: Vec<Rational>,
    /// Each core element with the index `l` that covers it.
    pub coverage: Vec<(Rational, usize)>,
}

fn class_union(coloring: &Coloring, mask: u64) -> WindowSet {
    WindowSet::from_indices(
        coloring.window().clone(),
        (0..coloring.window().len()).filter(|&i| mask >> coloring.color_at(i) & 1 == 1),
    )
}

fn core_window(window: &Window) -> Option<Window> {
    let WindowKind::MultiplicativeGrid {
        primes,
        exponent_bound,
        include_sign,
    } = window.kind()
    else {
        return None;
    };
    let e = exponent_bound.checked_sub(1)?;
    Window::grid(primes, e, *include_sign).ok()
}

fn unit_ball(window: &Window) -> Vec<Rational> {
    let WindowKind::MultiplicativeGrid { primes, include_sign, .. } = window.kind() else {
        return Vec::new();
    };
    let mut out: Vec<Rational> = (0..primes.len())
        .map(|_| -1i32..=1)
        .multi_cartesian_product()
        .map(|exps| {
            exps.iter()
                .zip(primes)
                .map(|(&e, &p)| Rational::from(BigInt::from(p)).pow(e).expect("p > 0"))
                .product()
        })
        .collect();
    if *include_sign {
        let neg: Vec<Rational> = out.iter().map(|q| -q).collect();
        out.extend(neg);
    }
    // identity first so the greedy starts from it
    out.sort_by_key(|q| (!q.is_one(), q.clone()));
    out
}

/// Bit `m` is set when `x / f` has color `m` for some `f ∈ F`.
fn reach_mask(coloring: &Coloring, x: &Rational, f: &[Rational]) -> u64 {
    f.iter()
        .filter_map(|g| x.checked_div(g))
        .filter_map(|q| coloring.color_of(&q))
        .fold(0u64, |acc, c| acc | 1 << c)
}

fn covers(y: u64, reach: u64) -> bool {
    y & !reach == 0
}

pub fn localize_colors(coloring: &Coloring, t: &ShapeF, max_f: usize) -> Option<LocalizationReport> {
    let window = coloring.window();
    if t.mode() != GroupMode::Mul || max_f == 0 || coloring.r() > MAX_LOCALIZE_COLORS {
        return None;
    }
    let core = core_window(window)?;
    let pool = unit_ball(window);

    let thick: Vec<(u64, Rational)> = (1u64..1 << coloring.r())
        .filter_map(|mask| is_thick_for(&class_union(coloring, mask), t).map(|x| (mask, x)))
        .collect();
    if thick.is_empty() {
        return None;
    }
    let core_elems = core.elements();
    let reaches = |f: &[Rational]| -> Vec<u64> { core_elems.iter().map(|x| reach_mask(coloring, x, f)).collect() };
    let covered_count = |r: &[u64]| r.iter().filter(|&&m| thick.iter().any(|(y, _)| covers(*y, m))).count();

    let mut f: Vec<Rational> = vec![pool[0].clone()];
    let mut reach = reaches(&f);
    while covered_count(&reach) < core_elems.len() && f.len() < max_f {
        let best = pool
            .iter()
            .filter(|g| !f.contains(g))
            .map(|g| {
                let mut trial = f.clone();
                trial.push(g.clone());
                let r = reaches(&trial);
                (covered_count(&r), trial, r)
            })
            .max_by_key(|(n, ..)| *n);
        let Some((_, trial, r)) = best else { break };
        f = trial;
        reach = r;
    }
    if covered_count(&reach) < core_elems.len() {
        let found = (1..=max_f.min(EXHAUSTIVE_F)).find_map(|size| {
            pool.iter().cloned().combinations(size).find_map(|cand| {
                let r = reaches(&cand);
                (covered_count(&r) == core_elems.len()).then_some((cand, r))
            })
        });
        let (cand, r) = found?;
        f = cand;
        reach = r;
    }

    // greedy set cover of the core by thick color sets
    let mut uncovered: Vec<usize> = (0..core_elems.len()).collect();
    let mut chosen: Vec<(u64, Rational)> = Vec::new();
    while !uncovered.is_empty() {
        let (y, x) = thick
            .iter()
            .max_by_key(|(y, _)| {
                let n = uncovered.iter().filter(|&&i| covers(*y, reach[i])).count();
                (n, std::cmp::Reverse(y.count_ones()), std::cmp::Reverse(*y))
            })
            .cloned()
            .expect("thick sets exist");
        uncovered.retain(|&i| !covers(y, reach[i]));
        chosen.push((y, x));
    }
    let coverage = core_elems
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let l = chosen.iter().position(|(y, _)| covers(*y, reach[i])).expect("covered");
            (x.clone(), l)
        })
        .collect();
    let report = LocalizationReport {
        window: window.to_string(),
        core: core.to_string(),
        shape_t: t.clone(),
        max_f,
        f,
        ys: chosen
            .iter()
            .map(|(y, _)| (0..coloring.r()).filter(|m| y >> m & 1 == 1).collect())
            .collect(),
        thickness_witnesses: chosen.into_iter().map(|(_, x)| x).collect(),
        coverage,
    };
    report.verify(coloring).then_some(report)
}

impl LocalizationReport {
    /// Re-checks (a) and (b) from the coloring alone.
    pub fn verify(&self, coloring: &Coloring) -> bool {
        let window = coloring.window();
        if window.to_string() != self.window
            || self.f.is_empty()
            || self.f.len() > self.max_f
            || self.ys.is_empty()
            || self.ys.len() != self.thickness_witnesses.len()
            || self.shape_t.mode() != GroupMode::Mul
        {
            return false;
        }
        let Some(core) = core_window(window) else { return false };
        if core.to_string() != self.core {
            return false;
        }
        let mut masks = Vec::new();
        for y in &self.ys {
            if y.is_empty() || y.iter().any(|&m| m >= coloring.r()) {
                return false;
            }
            masks.push(y.iter().fold(0u64, |acc, &m| acc | 1 << m));
        }
        // (a): the recorded translate lands inside the union
        for (mask, x) in masks.iter().zip(&self.thickness_witnesses) {
            let union = class_union(coloring, *mask);
            if x.is_zero() || !window.contains(x) || !self.shape_t.translate(x).iter().all(|v| union.contains(v)) {
                return false;
            }
        }
        // (b): every core element, recomputed directly
        let f: Vec<Rational> = self.f.clone();
        core.elements().iter().all(|x| {
            masks.iter().any(|&mask| {
                (0..coloring.r())
                    .filter(|m| mask >> m & 1 == 1)
                    .all(|m| f.iter().any(|g| x.checked_div(g).and_then(|q| coloring.color_of(&q)) == Some(m as u8)))
            })
        })
    }
}
