//! Independent oracles for the integration tests and the acceptance
//! harness. Term values are recomputed here with plain `BigRational`
//! arithmetic and window membership is a hash lookup, so nothing below
//! shares code with the detector or the solver.

#![allow(dead_code)]

use std::collections::HashMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qramsey::{Coloring, Family, PatternTerm, Rational, Window};
use rand::Rng;

pub fn big(q: &Rational) -> BigRational {
    BigRational::new(q.numer().clone(), q.denom().clone())
}

fn power(base: &BigRational, exponent: i32) -> Option<BigRational> {
    if exponent < 0 && base.is_zero() {
        return None;
    }
    let mut acc = BigRational::one();
    for _ in 0..exponent.unsigned_abs() {
        acc *= base;
    }
    Some(if exponent < 0 { acc.recip() } else { acc })
}

pub fn eval_term(term: &PatternTerm, x: &BigRational, y: &BigRational) -> Option<BigRational> {
    Some(match term {
        PatternTerm::X => x.clone(),
        PatternTerm::Y => y.clone(),
        PatternTerm::Affine { x_coeff, poly, y_scale } => {
            let t = big(y_scale) * y;
            let mut sum = big(x_coeff) * x;
            for (k, c) in poly.coeffs().iter().enumerate() {
                sum += big(c) * power(&t, k as i32)?;
            }
            sum
        }
        PatternTerm::MulPow { exponent } => x * power(y, *exponent)?,
        PatternTerm::Offset { constant } => x + big(constant),
    })
}

/// Every instance of `family` inside `window`, as sorted deduplicated
/// window positions, from a plain double loop over `(x, y)`.
pub fn oracle_instances(family: &Family, window: &Window) -> Vec<Vec<usize>> {
    let elems: Vec<BigRational> = window.elements().iter().map(big).collect();
    let index: HashMap<&BigRational, usize> = elems.iter().enumerate().map(|(i, q)| (q, i)).collect();
    let has_mul = family.terms().iter().any(|t| matches!(t, PatternTerm::MulPow { .. }));
    let nonzero_x = has_mul || family.options().strict_nonzero_x;
    let mut out = Vec::new();
    for x in &elems {
        if nonzero_x && x.is_zero() {
            continue;
        }
        'y: for y in &elems {
            if y.is_zero() {
                continue;
            }
            let mut set = Vec::new();
            for term in family.terms() {
                let Some(v) = eval_term(term, x, y) else { continue 'y };
                let Some(&i) = index.get(&v) else { continue 'y };
                set.push(i);
            }
            if family.options().distinct {
                let mut s = set.clone();
                s.sort_unstable();
                s.dedup();
                if s.len() != set.len() {
                    continue;
                }
            }
            set.sort_unstable();
            set.dedup();
            out.push(set);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Whether some instance is monochromatic; stops at the first.
pub fn oracle_has_witness(instances: &[Vec<usize>], colors: &[u8]) -> bool {
    instances.iter().any(|s| s.iter().all(|&i| colors[i] == colors[s[0]]))
}

/// Whether any of the `r^n` colorings avoids every instance.
pub fn brute_force_avoidable(instances: &[Vec<usize>], n: usize, r: usize) -> bool {
    let mut colors = vec![0u8; n];
    loop {
        if !oracle_has_witness(instances, &colors) {
            return true;
        }
        let mut k = 0;
        loop {
            if k == n {
                return false;
            }
            colors[k] += 1;
            if (colors[k] as usize) < r {
                break;
            }
            colors[k] = 0;
            k += 1;
        }
    }
}

pub fn random_coloring(window: &Arc<Window>, r: usize, rng: &mut impl Rng) -> Coloring {
    let colors = (0..window.len()).map(|_| rng.gen_range(0..r) as u8).collect();
    Coloring::new(window.clone(), r, colors).expect("valid coloring")
}

pub fn int_of(q: &BigRational) -> Option<BigInt> {
    q.is_integer().then(|| q.to_integer())
}

/// Windows of at most 16 elements used for exhaustive cross-checks.
pub const SMALL_WINDOWS: &[&str] = &["int:1..8", "int:1..12", "int:1..16", "int:-4..4", "farey:3", "farey:4", "mgrid:2,3:1", "mgrid:2:3"];

/// Windows of at most 40 elements used for detector cross-checks.
pub const MEDIUM_WINDOWS: &[&str] = &["int:1..40", "farey:5", "mgrid:2,3:2", "int:-10..10"];
