//! Colorings of windows: dense color arrays indexed by window position.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::arith::Rational;
use crate::window::{Window, WindowError};

/// Color indices are small; `r <= MAX_COLORS`.
pub type Color = u8;
pub const MAX_COLORS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColoringError {
    #[error("coloring has {got} entries but the window has {expected} elements")]
    LengthMismatch { expected: usize, got: usize },
    #[error("color {color} at position {position} is not below r = {r}")]
    ColorOutOfRange { position: usize, color: usize, r: usize },
    #[error("number of colors must be between 1 and {MAX_COLORS}, got {0}")]
    BadColorCount(usize),
    #[error("{count} colorings exceed the budget of {budget}")]
    BudgetExceeded { count: u128, budget: u128 },
    #[error("malformed coloring text: {0}")]
    Syntax(String),
    #[error(transparent)]
    Window(#[from] WindowError),
}

#[derive(Clone, PartialEq, Eq)]
pub struct Coloring {
    window: Arc<Window>,
    colors: Vec<Color>,
    r: usize,
}

impl Coloring {
    pub fn new(window: Arc<Window>, r: usize, colors: Vec<Color>) -> Result<Self, ColoringError> {
        check_r(r)?;
        if colors.len() != window.len() {
            return Err(ColoringError::LengthMismatch {
                expected: window.len(),
                got: colors.len(),
            });
        }
        if let Some((position, &c)) = colors.iter().enumerate().find(|(_, &c)| c as usize >= r) {
            return Err(ColoringError::ColorOutOfRange {
                position,
                color: c as usize,
                r,
            });
        }
        Ok(Coloring { window, colors, r })
    }

    pub fn constant(window: Arc<Window>, r: usize, color: Color) -> Result<Self, ColoringError> {
        let n = window.len();
        Coloring::new(window, r, vec![color; n])
    }

    /// Colors each element by `f(position, element)`.
    pub fn from_fn(
        window: Arc<Window>,
        r: usize,
        mut f: impl FnMut(usize, &Rational) -> Color,
    ) -> Result<Self, ColoringError> {
        let colors = window.elements().iter().enumerate().map(|(i, q)| f(i, q)).collect();
        Coloring::new(window, r, colors)
    }

    pub fn window(&self) -> &Arc<Window> {
        &self.window
    }

    pub fn colors(&self) -> &[Color] {
        &self.colors
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn color_at(&self, index: usize) -> Color {
        self.colors[index]
    }

    /// Color of a window element, `None` outside the window.
    pub fn color_of(&self, q: &Rational) -> Option<Color> {
        self.window.index_of(q).map(|i| self.colors[i])
    }

    /// Applies a permutation of color indices (`perm[c]` is the new color of `c`).
    pub fn permuted(&self, perm: &[Color]) -> Self {
        Coloring {
            window: self.window.clone(),
            colors: self.colors.iter().map(|&c| perm[c as usize]).collect(),
            r: self.r,
        }
    }

    /// Relabels colors in order of first occurrence.
    pub fn canonical(&self) -> Self {
        Coloring {
            window: self.window.clone(),
            colors: canonical_form(&self.colors),
            r: self.r,
        }
    }

    pub fn classes(&self) -> ColorClassPartition {
        color_classes(self)
    }
}

impl fmt::Debug for Coloring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Coloring({self})")
    }
}

impl fmt::Display for Coloring {
    /// `int:1..4 r=2 [0,1,0,1]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.colors.iter().map(u8::to_string).collect();
        write!(f, "{} r={} [{}]", self.window, self.r, body.join(","))
    }
}

fn check_r(r: usize) -> Result<(), ColoringError> {
    if r == 0 || r > MAX_COLORS {
        Err(ColoringError::BadColorCount(r))
    } else {
        Ok(())
    }
}

pub fn parse_coloring(text: &str) -> Result<Coloring, ColoringError> {
    let bad = || ColoringError::Syntax(text.to_string());
    let text = text.trim();
    let open = text.find('[').ok_or_else(bad)?;
    let body = text[open + 1..].strip_suffix(']').ok_or_else(bad)?;
    let mut head = text[..open].split_whitespace();
    let window: Window = head.next().ok_or_else(bad)?.parse()?;
    let r: usize = head
        .next()
        .and_then(|t| t.strip_prefix("r="))
        .ok_or_else(bad)?
        .parse()
        .map_err(|_| bad())?;
    if head.next().is_some() {
        return Err(bad());
    }
    check_r(r)?;
    let mut colors = Vec::new();
    if !body.trim().is_empty() {
        for (position, tok) in body.split(',').enumerate() {
            let c: usize = tok.trim().parse().map_err(|_| bad())?;
            if c >= r {
                return Err(ColoringError::ColorOutOfRange { position, color: c, r });
            }
            colors.push(c as Color);
        }
    }
    Coloring::new(Arc::new(window), r, colors)
}

pub fn serialize_coloring(c: &Coloring) -> String {
    c.to_string()
}

/// Color classes as lists of window positions, one list per color.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ColorClassPartition {
    pub classes: Vec<Vec<usize>>,
}

impl ColorClassPartition {
    pub fn elements<'w>(&self, window: &'w Window, color: usize) -> Vec<&'w Rational> {
        self.classes[color].iter().map(|&i| window.element(i)).collect()
    }

    pub fn total(&self) -> usize {
        self.classes.iter().map(Vec::len).sum()
    }
}

pub fn color_classes(c: &Coloring) -> ColorClassPartition {
    let mut classes = vec![Vec::new(); c.r];
    for (i, &col) in c.colors.iter().enumerate() {
        classes[col as usize].push(i);
    }
    ColorClassPartition { classes }
}

/// Relabels so that colors first occur in increasing order.
pub fn canonical_form(colors: &[Color]) -> Vec<Color> {
    let mut map = [Color::MAX; 256];
    let mut next: Color = 0;
    colors
        .iter()
        .map(|&c| {
            if map[c as usize] == Color::MAX {
                map[c as usize] = next;
                next += 1;
            }
            map[c as usize]
        })
        .collect()
}

/// Number of colorings `enumerate_colorings` yields: `r^n` without symmetry,
/// `sum_{j<=r} S(n, j)` with it. `None` on overflow.
pub fn coloring_count(n: usize, r: usize, symmetry: bool) -> Option<u128> {
    if !symmetry {
        return (r as u128).checked_pow(n as u32);
    }
    // Stirling numbers of the second kind, row by row.
    let mut row = vec![0u128; r + 1];
    row[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u128; r + 1];
        for j in 1..=r {
            next[j] = (j as u128).checked_mul(row[j])?.checked_add(row[j - 1])?;
        }
        row = next;
    }
    Some(if n == 0 { 1 } else { row[1..].iter().sum() })
}

/// Streams colorings in lexicographic order of their color arrays.
///
/// With `symmetry` only canonical representatives are produced: the first
/// occurrences of colors appear in increasing order. A fixed prefix restricts
/// the stream to colorings that start with it, so disjoint prefixes can be
/// consumed concurrently.
pub struct ColoringStream {
    window: Arc<Window>,
    r: usize,
    symmetry: bool,
    prefix_len: usize,
    current: Vec<Color>,
    /// `used_before[i]` = one more than the largest color among positions `< i`.
    used_before: Vec<usize>,
    done: bool,
}

impl ColoringStream {
    pub fn new(window: Arc<Window>, r: usize, symmetry: bool) -> Result<Self, ColoringError> {
        Self::with_prefix(window, r, symmetry, &[])
    }

    pub fn with_prefix(
        window: Arc<Window>,
        r: usize,
        symmetry: bool,
        prefix: &[Color],
    ) -> Result<Self, ColoringError> {
        check_r(r)?;
        let n = window.len();
        if prefix.len() > n {
            return Err(ColoringError::LengthMismatch {
                expected: n,
                got: prefix.len(),
            });
        }
        let mut current = prefix.to_vec();
        current.resize(n, 0);
        let mut used_before = vec![0usize; n + 1];
        let mut done = false;
        for i in 0..n {
            let c = current[i] as usize;
            if c >= r || (symmetry && c > used_before[i]) {
                done = true;
            }
            used_before[i + 1] = used_before[i].max(c + 1);
        }
        Ok(ColoringStream {
            window,
            r,
            symmetry,
            prefix_len: prefix.len(),
            current,
            used_before,
            done,
        })
    }

    fn advance(&mut self) {
        let n = self.current.len();
        let mut i = n;
        loop {
            if i <= self.prefix_len {
                self.done = true;
                return;
            }
            i -= 1;
            let limit = if self.symmetry {
                (self.used_before[i] + 1).min(self.r)
            } else {
                self.r
            };
            if (self.current[i] as usize) + 1 < limit {
                self.current[i] += 1;
                let c = self.current[i] as usize;
                self.used_before[i + 1] = self.used_before[i].max(c + 1);
                for j in i + 1..n {
                    self.current[j] = 0;
                    self.used_before[j + 1] = self.used_before[j].max(1);
                }
                return;
            }
        }
    }
}

impl Iterator for ColoringStream {
    type Item = Coloring;

    fn next(&mut self) -> Option<Coloring> {
        if self.done {
            return None;
        }
        let out = Coloring {
            window: self.window.clone(),
            colors: self.current.clone(),
            r: self.r,
        };
        self.advance();
        Some(out)
    }
}

pub fn enumerate_colorings(window: Arc<Window>, r: usize, symmetry: bool) -> Result<ColoringStream, ColoringError> {
    ColoringStream::new(window, r, symmetry)
}

/// Collects the whole stream, refusing when there would be more than
/// `budget` colorings.
pub fn collect_colorings(
    window: Arc<Window>,
    r: usize,
    symmetry: bool,
    budget: u128,
) -> Result<Vec<Coloring>, ColoringError> {
    let count = coloring_count(window.len(), r, symmetry).unwrap_or(u128::MAX);
    if count > budget {
        return Err(ColoringError::BudgetExceeded { count, budget });
    }
    Ok(enumerate_colorings(window, r, symmetry)?.collect())
}
