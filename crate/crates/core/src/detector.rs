//! Monochromatic instance detection over a precomputed candidate table.
//!
//! A candidate is a pair `(x, y)` of window elements whose every term value
//! lies in the window (and meets the family's constraints); it is stored as
//! window indices so that colorings can be checked without arithmetic.

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::coloring::{Color, Coloring};
use crate::pattern::{Family, Witness};
use crate::window::{Window, WindowError, DEFAULT_CAP};

/// Largest number of `(x, y)` pairs a table build will scan.
pub const DEFAULT_PAIR_CAP: u128 = 400_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DetectorError {
    #[error("{pairs} (x, y) pairs exceed the cap of {cap}")]
    PairCapExceeded { pairs: u128, cap: u128 },
    #[error(transparent)]
    Window(#[from] WindowError),
}

/// Coloring-independent instance geometry of a family on a window.
///
/// When no term depends on `y`, every admissible `y` gives the same values,
/// so the table keeps one representative `y` (the first nonzero element).
#[derive(Clone, Debug)]
pub struct CandidateTable {
    family: Family,
    window: Arc<Window>,
    arity: usize,
    /// `(x-index, y-index)` per candidate.
    pairs: Vec<(u32, u32)>,
    /// `arity` value indices per candidate, in term order.
    values: Vec<u32>,
}

impl CandidateTable {
    pub fn build(family: &Family, window: Arc<Window>) -> Result<Self, DetectorError> {
        Self::build_with_caps(family, window, DEFAULT_CAP, DEFAULT_PAIR_CAP)
    }

    pub fn build_with_caps(
        family: &Family,
        window: Arc<Window>,
        window_cap: usize,
        pair_cap: u128,
    ) -> Result<Self, DetectorError> {
        let elements = window.enumerate(window_cap)?;
        let arity = family.len();
        let ys: Vec<usize> = if family.depends_on_y() {
            (0..elements.len()).filter(|&j| !elements[j].is_zero()).collect()
        } else {
            elements.iter().position(|q| !q.is_zero()).into_iter().collect()
        };
        let pairs_total = elements.len() as u128 * ys.len() as u128;
        if pairs_total > pair_cap {
            return Err(DetectorError::PairCapExceeded {
                pairs: pairs_total,
                cap: pair_cap,
            });
        }
        let nonzero_x = family.requires_nonzero_x();
        let distinct = family.options().distinct;
        type Row = (Vec<(u32, u32)>, Vec<u32>);
        let rows: Vec<Row> = (0..elements.len())
            .into_par_iter()
            .map(|i| {
                let x = &elements[i];
                let mut pairs = Vec::new();
                let mut values = Vec::new();
                if nonzero_x && x.is_zero() {
                    return (pairs, values);
                }
                let mut row = Vec::with_capacity(arity);
                'y: for &j in &ys {
                    let y = &elements[j];
                    row.clear();
                    for term in family.terms() {
                        let Some(v) = term.eval(x, y) else { continue 'y };
                        let Some(k) = window.index_of(&v) else { continue 'y };
                        row.push(k as u32);
                    }
                    if distinct && row.iter().enumerate().any(|(a, k)| row[..a].contains(k)) {
                        continue;
                    }
                    pairs.push((i as u32, j as u32));
                    values.extend_from_slice(&row);
                }
                (pairs, values)
            })
            .collect();
        let mut pairs = Vec::new();
        let mut values = Vec::new();
        for (p, v) in rows {
            pairs.extend(p);
            values.extend(v);
        }
        Ok(CandidateTable {
            family: family.clone(),
            window,
            arity,
            pairs,
            values,
        })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    /// Number of terms per candidate.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `(x-index, y-index)` of candidate `i`.
    pub fn pair(&self, i: usize) -> (usize, usize) {
        let (x, y) = self.pairs[i];
        (x as usize, y as usize)
    }

    /// Value indices of candidate `i`, in term order.
    pub fn values(&self, i: usize) -> &[u32] {
        &self.values[i * self.arity..(i + 1) * self.arity]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[u32]> + '_ {
        self.values.chunks_exact(self.arity.max(1)).take(self.pairs.len())
    }

    /// Whether candidate `i` is monochromatic under a raw color array.
    pub fn is_monochromatic(&self, i: usize, colors: &[Color]) -> bool {
        let vals = self.values(i);
        let c = colors[vals[0] as usize];
        vals[1..].iter().all(|&k| colors[k as usize] == c)
    }

    /// Index of the first monochromatic candidate under a raw color array.
    pub fn first_monochromatic(&self, colors: &[Color]) -> Option<usize> {
        (0..self.len()).find(|&i| self.is_monochromatic(i, colors))
    }

    /// Indices of every monochromatic candidate, ascending.
    pub fn monochromatic_candidates(&self, coloring: &Coloring) -> Vec<usize> {
        self.check_window(coloring);
        (0..self.len())
            .filter(|&i| self.is_monochromatic(i, coloring.colors()))
            .collect()
    }

    pub fn witness(&self, i: usize, colors: &[Color]) -> Witness {
        let (x, y) = self.pair(i);
        let vals = self.values(i);
        Witness {
            x: self.window.element(x).clone(),
            y: self.window.element(y).clone(),
            color: colors[vals[0] as usize],
            values: self
                .family
                .terms()
                .iter()
                .zip(vals)
                .map(|(t, &k)| (t.clone(), self.window.element(k as usize).clone()))
                .collect(),
        }
    }

    pub fn find_witness(&self, coloring: &Coloring) -> Option<Witness> {
        self.check_window(coloring);
        self.first_monochromatic(coloring.colors())
            .map(|i| self.witness(i, coloring.colors()))
    }

    /// Up to `limit` witnesses in candidate order.
    pub fn all_witnesses(&self, coloring: &Coloring, limit: usize) -> Vec<Witness> {
        self.check_window(coloring);
        let colors = coloring.colors();
        (0..self.len())
            .filter(|&i| self.is_monochromatic(i, colors))
            .take(limit)
            .map(|i| self.witness(i, colors))
            .collect()
    }

    fn check_window(&self, coloring: &Coloring) {
        assert!(
            **coloring.window() == *self.window,
            "coloring window {} does not match candidate window {}",
            coloring.window(),
            self.window
        );
    }
}

pub fn build_candidates(family: &Family, window: Arc<Window>) -> Result<CandidateTable, DetectorError> {
    CandidateTable::build(family, window)
}

/// One-shot detection; builds the table for the coloring's window.
pub fn find_witness(family: &Family, coloring: &Coloring) -> Result<Option<Witness>, DetectorError> {
    Ok(build_candidates(family, coloring.window().clone())?.find_witness(coloring))
}

pub fn all_witnesses(family: &Family, coloring: &Coloring, limit: usize) -> Result<Vec<Witness>, DetectorError> {
    Ok(build_candidates(family, coloring.window().clone())?.all_witnesses(coloring, limit))
}

/// Re-checks a witness from scratch: the point instantiates to the recorded
/// values, all in the window and all colored `witness.color`.
pub fn validate_witness(family: &Family, coloring: &Coloring, witness: &Witness) -> bool {
    let Ok(values) = family.instantiate(&witness.x, &witness.y) else {
        return false;
    };
    values.len() == witness.values.len()
        && values.iter().zip(&witness.values).all(|(v, (t, w))| {
            v == w && family.terms().contains(t) && coloring.color_of(v) == Some(witness.color)
        })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::parse_coloring;
    use crate::pattern::builtin_family;
    use crate::Rational;

    fn win(s: &str) -> Arc<Window> {
        Arc::new(s.parse().unwrap())
    }

    fn values_of(t: &CandidateTable, x: i64, y: i64) -> Option<Vec<String>> {
        let w = t.window();
        (0..t.len())
            .find(|&i| {
                let (a, b) = t.pair(i);
                w.element(a) == &Rational::from(x) && w.element(b) == &Rational::from(y)
            })
            .map(|i| t.values(i).iter().map(|&k| w.element(k as usize).to_string()).collect())
    }

    #[test]
    fn build_examples() {
        let schur = builtin_family("schur").unwrap();
        let t = build_candidates(&schur, win("int:1..5")).unwrap();
        assert_eq!(values_of(&t, 1, 2).unwrap(), ["1", "2", "3"]);
        assert!(values_of(&t, 3, 4).is_none());

        let quot: Family = "x; x/y; x+y".parse().unwrap();
        let t = build_candidates(&quot, win("int:1..9")).unwrap();
        assert_eq!(values_of(&t, 6, 2).unwrap(), ["6", "3", "8"]);
        assert!(values_of(&t, 5, 2).is_none());
    }

    #[test]
    fn zero_is_never_a_y_value() {
        let schur = builtin_family("schur").unwrap();
        let t = build_candidates(&schur, win("farey:2:+neg")).unwrap();
        for i in 0..t.len() {
            let (_, y) = t.pair(i);
            assert!(!t.window().element(y).is_zero());
        }
        let q = builtin_family("thm1-quotient(1,[t])").unwrap();
        let t = build_candidates(&q, win("farey:3")).unwrap();
        assert!(!t.is_empty());
        for i in 0..t.len() {
            assert!(!t.window().element(t.pair(i).0).is_zero());
        }
    }

    #[test]
    fn schur_constant_coloring_has_witness() {
        let schur = builtin_family("schur").unwrap();
        let c = Coloring::constant(win("int:1..3"), 2, 0).unwrap();
        let w = find_witness(&schur, &c).unwrap().unwrap();
        assert_eq!((w.x.clone(), w.y.clone()), (Rational::from(1), Rational::from(1)));
        assert!(validate_witness(&schur, &c, &w));
    }

    #[test]
    fn shifted_blocks_avoid_offset_family() {
        let f = crate::pattern::parse_family(
            "x; x + 3",
            crate::FamilyOptions {
                allow_offset: true,
                ..Default::default()
            },
        )
        .unwrap();
        let w = win("int:1..100");
        let c = Coloring::from_fn(w.clone(), 2, |_, q| (((q.to_i64().unwrap() - 1) / 3) % 2) as u8).unwrap();
        let t = build_candidates(&f, w).unwrap();
        // one representative y per x that has x + 3 inside
        assert_eq!(t.len(), 97);
        assert!(t.find_witness(&c).is_none());
        // exhaustive: x and x + 3 always differ in color
        for x in 1..=97i64 {
            assert_ne!(c.color_at((x - 1) as usize), c.color_at((x + 2) as usize));
        }
    }

    #[test]
    fn vdw_alternating_matches_ap_oracle() {
        let f = builtin_family("vdw(2)").unwrap();
        let c = parse_coloring("int:1..8 r=2 [0,1,0,1,0,1,0,1]").unwrap();
        let mut oracle = 0;
        for a in 1..=8usize {
            for d in 1..=8usize {
                if a + 2 * d <= 8 {
                    let cs = [a, a + d, a + 2 * d].map(|v| c.color_at(v - 1));
                    if cs[0] == cs[1] && cs[1] == cs[2] {
                        oracle += 1;
                    }
                }
            }
        }
        let found = all_witnesses(&f, &c, usize::MAX).unwrap();
        assert_eq!(found.len(), oracle);
        assert_eq!(found.is_empty(), find_witness(&f, &c).unwrap().is_none());
    }

    #[test]
    fn all_witnesses_counts_and_prefix() {
        let schur = builtin_family("schur").unwrap();
        let w = win("int:1..5");
        let c = Coloring::constant(w, 2, 1).unwrap();
        // brute force: (x, y) with x + y <= 5
        let oracle = (1..=5).flat_map(|x| (1..=5).map(move |y| (x, y))).filter(|(x, y)| x + y <= 5).count();
        let all = all_witnesses(&schur, &c, usize::MAX).unwrap();
        assert_eq!(all.len(), oracle);
        assert!(oracle > 1);
        assert_eq!(all_witnesses(&schur, &c, 1).unwrap(), all[..1]);
        for wit in &all {
            assert!(validate_witness(&schur, &c, wit));
        }
        let avoiding = parse_coloring("int:1..4 r=2 [0,1,1,0]").unwrap();
        assert!(all_witnesses(&schur, &avoiding, 10).unwrap().is_empty());
    }

    #[test]
    fn distinctness_filters_degenerate_pairs() {
        let mut schur = builtin_family("schur").unwrap();
        let t = build_candidates(&schur, win("int:1..5")).unwrap();
        assert!(values_of(&t, 1, 1).is_some());
        schur = schur
            .with_options(crate::FamilyOptions {
                distinct: true,
                ..Default::default()
            })
            .unwrap();
        let t = build_candidates(&schur, win("int:1..5")).unwrap();
        assert!(values_of(&t, 1, 1).is_none());
        assert!(values_of(&t, 1, 2).is_some());
    }

    #[test]
    fn pair_cap_is_enforced() {
        let schur = builtin_family("schur").unwrap();
        assert!(matches!(
            CandidateTable::build_with_caps(&schur, win("int:1..100"), DEFAULT_CAP, 100),
            Err(DetectorError::PairCapExceeded { .. })
        ));
    }
}
