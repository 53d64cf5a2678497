//! Finite, parametric versions of the large-set notions on a window.
//!
//! Each notion is checked for explicit parameters (a shape `F`, a target
//! shape `T`, a core sub-window) rather than quantified over all finite
//! shapes, so a positive answer here is a statement about those parameters
//! on this window only. The group is `(ℚ, +)` or `(ℚ \ {0}, ·)` per
//! [`GroupMode`].

mod ip;
mod localize;
mod polymap;

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Rational;
use crate::window::Window;

pub use ip::{finite_sums, find_ip_r, find_ip_r_randomized, is_ip_r_star, IpSetSpec, MAX_EXHAUSTIVE_R, MAX_FS_GENERATORS};
pub use localize::{localize_colors, LocalizationReport};
pub use polymap::{Monomial, PolynomialMapping};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LargeSetError {
    #[error("{what} = {value} exceeds the cap of {cap}")]
    CapExceeded { what: &'static str, value: usize, cap: usize },
    #[error("shape is empty")]
    EmptyShape,
    #[error("zero is not an element of the multiplicative group")]
    ZeroInMultiplicative,
    #[error("core element {0} has a translate outside the window")]
    CoreNotInterior(Rational),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupMode {
    Add,
    Mul,
}

impl GroupMode {
    pub fn identity(self) -> Rational {
        match self {
            GroupMode::Add => Rational::zero(),
            GroupMode::Mul => Rational::one(),
        }
    }

    pub fn op(self, a: &Rational, b: &Rational) -> Rational {
        match self {
            GroupMode::Add => a + b,
            GroupMode::Mul => a * b,
        }
    }

    /// `a ∘ b⁻¹`; `None` when dividing by zero.
    pub fn op_inv(self, a: &Rational, b: &Rational) -> Option<Rational> {
        match self {
            GroupMode::Add => Some(a - b),
            GroupMode::Mul => a.checked_div(b),
        }
    }

    pub fn is_member(self, a: &Rational) -> bool {
        self == GroupMode::Add || !a.is_zero()
    }

    fn check(self, elements: &[Rational]) -> Result<(), LargeSetError> {
        if elements.iter().all(|e| self.is_member(e)) {
            Ok(())
        } else {
            Err(LargeSetError::ZeroInMultiplicative)
        }
    }
}

/// A finite nonempty set of group elements, sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShapeF {
    mode: GroupMode,
    elements: Vec<Rational>,
}

impl ShapeF {
    pub fn new(mode: GroupMode, elements: impl IntoIterator<Item = Rational>) -> Result<Self, LargeSetError> {
        let elements: Vec<Rational> = elements.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        if elements.is_empty() {
            return Err(LargeSetError::EmptyShape);
        }
        mode.check(&elements)?;
        Ok(ShapeF { mode, elements })
    }

    pub fn from_integers(mode: GroupMode, elements: &[i64]) -> Result<Self, LargeSetError> {
        Self::new(mode, elements.iter().map(|&e| Rational::from(e)))
    }

    pub fn identity(mode: GroupMode) -> Self {
        ShapeF {
            mode,
            elements: vec![mode.identity()],
        }
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn elements(&self) -> &[Rational] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// `F ∘ x`.
    pub fn translate(&self, x: &Rational) -> Vec<Rational> {
        self.elements.iter().map(|f| self.mode.op(f, x)).collect()
    }
}

/// A subset of a window, as a membership vector over window indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowSet {
    window: Arc<Window>,
    members: Vec<bool>,
}

impl WindowSet {
    pub fn empty(window: Arc<Window>) -> Self {
        let n = window.len();
        WindowSet {
            window,
            members: vec![false; n],
        }
    }

    pub fn full(window: Arc<Window>) -> Self {
        let n = window.len();
        WindowSet {
            window,
            members: vec![true; n],
        }
    }

    pub fn from_indices(window: Arc<Window>, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut s = Self::empty(window);
        for i in indices {
            s.members[i] = true;
        }
        s
    }

    pub fn from_predicate(window: Arc<Window>, mut pred: impl FnMut(&Rational) -> bool) -> Self {
        let members = window.elements().iter().map(&mut pred).collect();
        WindowSet { window, members }
    }

    /// Elements outside the window are dropped.
    pub fn from_elements<'a>(window: Arc<Window>, elements: impl IntoIterator<Item = &'a Rational>) -> Self {
        let idx: Vec<usize> = elements.into_iter().filter_map(|q| window.index_of(q)).collect();
        Self::from_indices(window, idx)
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.window.index_of(q).is_some_and(|i| self.members[i])
    }

    pub fn contains_index(&self, i: usize) -> bool {
        self.members[i]
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().enumerate().filter(|(_, &m)| m).map(|(i, _)| i)
    }

    pub fn elements(&self) -> impl Iterator<Item = &Rational> + '_ {
        self.indices().map(|i| self.window.element(i))
    }

    pub fn len(&self) -> usize {
        self.members.iter().filter(|&&m| m).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.members.iter().any(|&m| m)
    }

    pub fn complement(&self) -> Self {
        WindowSet {
            window: self.window.clone(),
            members: self.members.iter().map(|m| !m).collect(),
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a || b)
    }

    pub fn difference(&self, other: &Self) -> Self {
        self.zip(other, |a, b| a && !b)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.iter().zip(&other.members).all(|(&a, &b)| !a || b)
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Self {
        assert_eq!(*self.window, *other.window, "sets over different windows");
        WindowSet {
            window: self.window.clone(),
            members: self.members.iter().zip(&other.members).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

/// Window indices `x` with `F ∘ x ⊆ A` (and `x` a group element).
pub fn thick_translates(a: &WindowSet, f: &ShapeF) -> Vec<usize> {
    let w = a.window();
    (0..w.len())
        .filter(|&i| {
            let x = w.element(i);
            f.mode().is_member(x) && f.translate(x).iter().all(|v| a.contains(v))
        })
        .collect()
}

/// Some `x` in the window with `F ∘ x ⊆ A`, the first in window order.
pub fn is_thick_for(a: &WindowSet, f: &ShapeF) -> Option<Rational> {
    let w = a.window();
    (0..w.len())
        .map(|i| w.element(i))
        .find(|x| f.mode().is_member(x) && f.translate(x).iter().all(|v| a.contains(v)))
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SyndeticReport {
    pub holds: bool,
    /// Core elements outside `F ∘ A`, in core order.
    pub uncovered: Vec<Rational>,
}

/// Whether `F ∘ A` covers `core`. Every `f⁻¹ ∘ c` (`c` in the core) must lie
/// in `A`'s window.
pub fn is_syndetic_for(a: &WindowSet, f: &ShapeF, core: &Window) -> Result<SyndeticReport, LargeSetError> {
    let mode = f.mode();
    let mut uncovered = Vec::new();
    for c in core.elements() {
        if !mode.is_member(c) {
            return Err(LargeSetError::CoreNotInterior(c.clone()));
        }
        let mut hit = false;
        for g in f.elements() {
            let pre = mode.op_inv(c, g).expect("shape elements are group members");
            if !a.window().contains(&pre) {
                return Err(LargeSetError::CoreNotInterior(c.clone()));
            }
            hit |= a.contains(&pre);
        }
        if !hit {
            uncovered.push(c.clone());
        }
    }
    Ok(SyndeticReport {
        holds: uncovered.is_empty(),
        uncovered,
    })
}

/// `F ∘ A`, restricted to `A`'s window.
pub fn shape_image(a: &WindowSet, f: &ShapeF) -> WindowSet {
    let mut out = WindowSet::empty(a.window().clone());
    for x in a.elements() {
        for v in f.translate(x) {
            if let Some(i) = a.window().index_of(&v) {
                out.members[i] = true;
            }
        }
    }
    out
}

/// A smallest `F` with `|F| <= max_f` such that `F ∘ A` is `T`-thick in the
/// window, found by exact search.
///
/// For a translate `x` with `T ∘ x` inside the window, `F` must meet every
/// set `{p ∘ a⁻¹ : a ∈ A}` with `p ∈ T ∘ x`; iterative deepening over `|F|`
/// solves that hitting-set problem exactly.
pub fn piecewise_syndetic_witness(a: &WindowSet, max_f: usize, t: &ShapeF) -> Option<ShapeF> {
    let mode = t.mode();
    let w = a.window();
    let a_elems: Vec<&Rational> = a.elements().filter(|q| mode.is_member(q)).collect();
    if a_elems.is_empty() || max_f == 0 {
        return None;
    }
    let targets: Vec<Vec<Rational>> = w
        .elements()
        .iter()
        .filter(|x| mode.is_member(x))
        .map(|x| t.translate(x))
        .filter(|tx| tx.iter().all(|p| w.contains(p)))
        .collect();
    for size in 1..=max_f.min(t.len()) {
        for points in &targets {
            let mut chosen = Vec::new();
            if hit(points, &a_elems, mode, size, &mut chosen) {
                return Some(ShapeF::new(mode, chosen).expect("nonempty"));
            }
        }
    }
    None
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum UnionSide {
    Left,
    Right,
}

/// Given `A ∪ B` piecewise syndetic at `max_f`, a witness for `A` or for `B`
/// at `max_f·|T|` (`A` tried first). `None` when the union has no witness.
pub fn split_union_witness(a: &WindowSet, b: &WindowSet, max_f: usize, t: &ShapeF) -> Option<(UnionSide, ShapeF)> {
    piecewise_syndetic_witness(&a.union(b), max_f, t)?;
    let inflated = max_f.saturating_mul(t.len());
    if let Some(f) = piecewise_syndetic_witness(a, inflated, t) {
        return Some((UnionSide::Left, f));
    }
    piecewise_syndetic_witness(b, inflated, t).map(|f| (UnionSide::Right, f))
}

/// Chooses at most `budget` shape elements so every point is `f ∘ a`.
fn hit(points: &[Rational], a: &[&Rational], mode: GroupMode, budget: usize, chosen: &mut Vec<Rational>) -> bool {
    let covered = |p: &Rational, chosen: &[Rational]| {
        chosen
            .iter()
            .any(|f| mode.op_inv(p, f).is_some_and(|pre| a.iter().any(|&x| *x == pre)))
    };
    let Some(p) = points.iter().find(|p| !covered(p, chosen)) else {
        return true;
    };
    if chosen.len() == budget {
        return false;
    }
    for &x in a {
        let Some(f) = mode.op_inv(p, x) else { continue };
        if chosen.contains(&f) {
            continue;
        }
        chosen.push(f);
        if hit(points, a, mode, budget, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}
