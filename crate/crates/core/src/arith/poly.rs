use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::parse::{parse_sum, syntax, Monomial};
use super::{ArithError, Rational};

/// Dense univariate polynomial over the rationals; `coeffs[i]` multiplies
/// `t^i`. Trailing zeros are never stored, so the zero polynomial has no
/// coefficients at all.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Rational::is_zero) {
            coeffs.pop();
        }
        PolynomialQ { coeffs }
    }

    pub fn zero() -> Self {
        PolynomialQ { coeffs: Vec::new() }
    }

    /// The identity polynomial `t`.
    pub fn t() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    /// `c * t^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn has_zero_constant(&self) -> bool {
        self.coeff(0).is_zero()
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// `p(c * t)`.
    pub fn compose_scaled(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow = pow * c;
        }
        Self::new(out)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Self::new(out)
    }

    /// Parses a sum of `c*v^k` monomials in the single variable `var`.
    pub fn parse_in(text: &str, var: char, offset: usize) -> Result<Self, ArithError> {
        let monos = parse_sum(text, offset)?;
        Self::from_monomials(&monos, var)
    }

    pub(crate) fn from_monomials(monos: &[Monomial], var: char) -> Result<Self, ArithError> {
        let mut out = Self::zero();
        for m in monos {
            if m.applied.is_some() {
                return Err(syntax(m.pos, "nested application inside a polynomial"));
            }
            let mut k = 0usize;
            for (&v, &e) in &m.powers {
                if v != var {
                    return Err(syntax(m.pos, format!("unexpected variable `{v}`, expected `{var}`")));
                }
                if e < 0 {
                    return Err(syntax(m.pos, "negative power in a polynomial"));
                }
                k = e as usize;
            }
            out = out.add(&Self::monomial(m.coef.clone(), k));
        }
        Ok(out)
    }

    /// Renders with `var` as the indeterminate, highest degree first.
    pub fn display_in(&self, var: char) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut s = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if s.is_empty() {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{k}"),
            };
            if k == 0 {
                s.push_str(&mag.to_string());
            } else if mag.is_one() {
                s.push_str(&power);
            } else {
                s.push_str(&format!("{mag}*{power}"));
            }
        }
        s
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in('t'))
    }
}

impl fmt::Debug for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PolynomialQ({self})")
    }
}

impl FromStr for PolynomialQ {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse_in(s, 't', 0)
    }
}

impl Serialize for PolynomialQ {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PolynomialQ {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Iterated additive difference `(δ_{g1} ⋯ δ_{gm} p)(x)` where
/// `(δ_g p)(x) = p(x + g) - p(x)`, expanded by inclusion–exclusion.
pub fn iterated_difference(p: &PolynomialQ, shifts: &[&Rational], x: &Rational) -> Rational {
    let m = shifts.len();
    let mut total = Rational::zero();
    for mask in 0u64..(1u64 << m) {
        let mut point = x.clone();
        for (i, g) in shifts.iter().enumerate() {
            if mask >> i & 1 == 1 {
                point = point + *g;
            }
        }
        let v = p.eval(&point);
        if (m as u32 - mask.count_ones()).is_multiple_of(2) {
            total = total + v;
        } else {
            total = total - v;
        }
    }
    total
}

/// Checks that every choice of `d + 1` difference operators drawn (with
/// repetition) from the sampled shifts annihilates `p` at every sampled point.
/// A polynomial of degree at most `d` always passes.
pub fn difference_degree_check(
    p: &PolynomialQ,
    d: usize,
    samples: &[(Rational, Rational)],
) -> Result<bool, ArithError> {
    if samples.is_empty() {
        return Err(ArithError::EmptySamples);
    }
    if samples.iter().any(|(g, _)| g.is_zero()) {
        return Err(ArithError::ZeroShift);
    }
    let shifts: Vec<&Rational> = samples.iter().map(|(g, _)| g).unique().collect();
    let points: Vec<&Rational> = samples.iter().map(|(_, x)| x).unique().collect();
    for combo in shifts.iter().copied().combinations_with_replacement(d + 1) {
        for x in &points {
            if !iterated_difference(p, &combo, x).is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
