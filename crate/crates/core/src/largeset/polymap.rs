//! Polynomial mappings from finite subsets of an index set into a group.
//!
//! A monomial of degree `d` is a value table `u` on `S^d`; it sends `α ⊆ S`
//! to the group combination of `u(s)` over all `s ∈ α^d`. A polynomial
//! mapping combines several monomials. Degrees are at least one, so the
//! empty set always maps to the identity.

use itertools::Itertools;
use serde::Serialize;

use super::{GroupMode, LargeSetError};
use crate::arith::{PolynomialQ, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Monomial {
    degree: usize,
    /// `u(s_1, .., s_d)` at position `s_1·|S|^(d-1) + .. + s_d`.
    table: Vec<Rational>,
}

impl Monomial {
    pub fn new(index_count: usize, degree: usize, table: Vec<Rational>) -> Result<Self, LargeSetError> {
        if degree == 0 {
            return Err(LargeSetError::Invalid("monomial degree must be at least 1".into()));
        }
        let expected = index_count
            .checked_pow(degree as u32)
            .ok_or_else(|| LargeSetError::Invalid("value table too large".into()))?;
        if table.len() != expected {
            return Err(LargeSetError::Invalid(format!(
                "value table has {} entries, S^{degree} has {expected}",
                table.len()
            )));
        }
        Ok(Monomial { degree, table })
    }

    /// The table filled from `u(tuple)`.
    pub fn from_fn(index_count: usize, degree: usize, u: impl Fn(&[usize]) -> Rational) -> Result<Self, LargeSetError> {
        let table = (0..degree)
            .map(|_| 0..index_count)
            .multi_cartesian_product()
            .map(|tuple| u(&tuple))
            .collect();
        Self::new(index_count, degree, table)
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    fn value(&self, index_count: usize, tuple: &[usize]) -> &Rational {
        let pos = tuple.iter().fold(0usize, |acc, &s| acc * index_count + s);
        &self.table[pos]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolynomialMapping {
    index_count: usize,
    mode: GroupMode,
    monomials: Vec<Monomial>,
}

impl PolynomialMapping {
    pub fn new(index_count: usize, mode: GroupMode, monomials: Vec<Monomial>) -> Result<Self, LargeSetError> {
        if index_count == 0 {
            return Err(LargeSetError::Invalid("index set must be nonempty".into()));
        }
        for m in &monomials {
            if m.table.len() != index_count.pow(m.degree as u32) {
                return Err(LargeSetError::Invalid("monomial table does not match the index set".into()));
            }
            mode.check(&m.table)?;
        }
        Ok(PolynomialMapping {
            index_count,
            mode,
            monomials,
        })
    }

    /// The additive mapping `α ↦ p(∑_{i∈α} g_i)` for `p` with `p(0) = 0`:
    /// the degree-`k` coefficient `c_k` becomes the monomial
    /// `u(i_1..i_k) = c_k·g_{i_1}···g_{i_k}`.
    pub fn from_polynomial(p: &PolynomialQ, generators: &[Rational]) -> Result<Self, LargeSetError> {
        if !p.has_zero_constant() {
            return Err(LargeSetError::Invalid("polynomial must vanish at zero".into()));
        }
        let n = generators.len();
        let mut monomials = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            monomials.push(Monomial::from_fn(n, k, |tuple| {
                tuple.iter().fold(c.clone(), |acc, &i| acc * &generators[i])
            })?);
        }
        Self::new(n, GroupMode::Add, monomials)
    }

    pub fn index_count(&self) -> usize {
        self.index_count
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Largest monomial degree of this representation (zero without
    /// monomials); the true degree is a minimum over representations.
    pub fn degree_upper_bound(&self) -> usize {
        self.monomials.iter().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Value at `α`, given as index positions (duplicates ignored).
    pub fn eval(&self, alpha: &[usize]) -> Rational {
        let alpha: Vec<usize> = alpha.iter().copied().sorted().dedup().collect();
        assert!(alpha.iter().all(|&i| i < self.index_count), "index outside S");
        let mut acc = self.mode.identity();
        if alpha.is_empty() {
            return acc;
        }
        for m in &self.monomials {
            for tuple in (0..m.degree).map(|_| alpha.iter().copied()).multi_cartesian_product() {
                acc = self.mode.op(&acc, m.value(self.index_count, &tuple));
            }
        }
        acc
    }
}
