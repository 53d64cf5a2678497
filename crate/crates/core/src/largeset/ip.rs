//! Finite sums/products and bounded searches for IP_r structures.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{GroupMode, LargeSetError, WindowSet};
use crate::arith::Rational;

/// `finite_sums` refuses more generators than this (`2^r - 1` sums).
pub const MAX_FS_GENERATORS: usize = 24;
/// `find_ip_r` is exhaustive up to this `r`.
pub const MAX_EXHAUSTIVE_R: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IpSetSpec {
    generators: Vec<Rational>,
    mode: GroupMode,
}

impl IpSetSpec {
    pub fn new(mode: GroupMode, generators: Vec<Rational>) -> Result<Self, LargeSetError> {
        if generators.is_empty() {
            return Err(LargeSetError::Invalid("an IP set needs at least one generator".into()));
        }
        mode.check(&generators)?;
        Ok(IpSetSpec { generators, mode })
    }

    pub fn from_integers(mode: GroupMode, generators: &[i64]) -> Result<Self, LargeSetError> {
        Self::new(mode, generators.iter().map(|&g| Rational::from(g)).collect())
    }

    pub fn generators(&self) -> &[Rational] {
        &self.generators
    }

    pub fn mode(&self) -> GroupMode {
        self.mode
    }

    pub fn r(&self) -> usize {
        self.generators.len()
    }
}

/// `{ ∘_{i∈α} s_i : α ≠ ∅ }`, sorted, duplicates collapsed.
pub fn finite_sums(spec: &IpSetSpec) -> Result<Vec<Rational>, LargeSetError> {
    if spec.r() > MAX_FS_GENERATORS {
        return Err(LargeSetError::CapExceeded {
            what: "generator count",
            value: spec.r(),
            cap: MAX_FS_GENERATORS,
        });
    }
    let mut sums: HashSet<Rational> = HashSet::new();
    for s in &spec.generators {
        let shifted: Vec<Rational> = sums.iter().map(|x| spec.mode.op(x, s)).collect();
        sums.insert(s.clone());
        sums.extend(shifted);
    }
    let mut out: Vec<Rational> = sums.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Depth-first generator search over `A`'s elements in increasing order.
/// `strict` demands strictly increasing generators with distinct subset sums.
#[allow(clippy::too_many_arguments)]
fn extend(
    pool: &[Rational],
    a: &WindowSet,
    mode: GroupMode,
    r: usize,
    start: usize,
    strict: bool,
    gens: &mut Vec<Rational>,
    sums: &mut Vec<Rational>,
) -> bool {
    if gens.len() == r {
        return true;
    }
    for (k, s) in pool.iter().enumerate().skip(start) {
        let mut new: Vec<Rational> = sums.iter().map(|x| mode.op(x, s)).collect();
        new.push(s.clone());
        if !new.iter().all(|v| a.contains(v)) {
            continue;
        }
        if strict {
            let seen: HashSet<&Rational> = sums.iter().collect();
            let fresh: HashSet<&Rational> = new.iter().collect();
            if fresh.len() != new.len() || new.iter().any(|v| seen.contains(v)) {
                continue;
            }
        }
        let before = sums.len();
        sums.extend(new);
        gens.push(s.clone());
        let next = if strict { k + 1 } else { k };
        if extend(pool, a, mode, r, next, strict, gens, sums) {
            return true;
        }
        gens.pop();
        sums.truncate(before);
    }
    false
}

/// Generators `s_1..s_r` whose finite sums (products) all lie in `A`.
///
/// Strictly increasing generators with distinct subset sums are tried
/// first, then non-decreasing ones with repeats allowed. Exhaustive, so
/// `None` means no such generators exist in the window.
pub fn find_ip_r(a: &WindowSet, r: usize, mode: GroupMode) -> Result<Option<Vec<Rational>>, LargeSetError> {
    if r == 0 || r > MAX_EXHAUSTIVE_R {
        return Err(LargeSetError::CapExceeded {
            what: "r for exhaustive IP search",
            value: r,
            cap: MAX_EXHAUSTIVE_R,
        });
    }
    let mut pool: Vec<Rational> = a.elements().filter(|q| mode.is_member(q)).cloned().collect();
    pool.sort();
    for strict in [true, false] {
        let mut gens = Vec::new();
        if extend(&pool, a, mode, r, 0, strict, &mut gens, &mut Vec::new()) {
            return Ok(Some(gens));
        }
    }
    Ok(None)
}

/// Randomized generator search for larger `r`: each attempt picks generators
/// greedily in a shuffled order. `None` is not a proof of absence.
pub fn find_ip_r_randomized(a: &WindowSet, r: usize, mode: GroupMode, seed: u64, attempts: usize) -> Option<Vec<Rational>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<Rational> = a.elements().filter(|q| mode.is_member(q)).cloned().collect();
    for _ in 0..attempts {
        pool.shuffle(&mut rng);
        let mut gens = Vec::new();
        let mut sums: Vec<Rational> = Vec::new();
        for s in &pool {
            let mut new: Vec<Rational> = sums.iter().map(|x| mode.op(x, s)).collect();
            new.push(s.clone());
            if new.iter().all(|v| a.contains(v)) {
                sums.extend(new);
                gens.push(s.clone());
                if gens.len() == r {
                    return Some(gens);
                }
            }
        }
    }
    None
}

/// Whether `A` meets every IP_r structure inside its window, i.e. the
/// complement contains none.
pub fn is_ip_r_star(a: &WindowSet, r: usize, mode: GroupMode) -> Result<bool, LargeSetError> {
    Ok(find_ip_r(&a.complement(), r, mode)?.is_none())
}
