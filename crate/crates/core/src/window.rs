//! Finite ground sets standing in for ℤ, ℚ and (ℚ\{0}, ·).
//!
//! Canonical orders:
//! * `int:lo..hi` ascending;
//! * `farey:N` zero first, then by denominator, then by numerator;
//! * `mgrid:p1,..,pk:E` by exponent vector (lexicographic, last prime
//!   varying fastest), all positive elements before the negative ones.
//!
//! Farey windows carry a hash index built on first lookup; the other two
//! kinds compute positions arithmetically.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::Rational;

pub const DEFAULT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WindowError {
    #[error("window has {size} elements, above the cap of {cap}")]
    CapExceeded { size: u128, cap: usize },
    #[error("empty integer interval {lo}..{hi}")]
    EmptyInterval { lo: i64, hi: i64 },
    #[error("invalid window parameter: {0}")]
    Invalid(String),
    #[error("malformed window spec `{0}`")]
    Syntax(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum WindowKind {
    IntegerInterval {
        lo: i64,
        hi: i64,
    },
    Farey {
        n: u64,
        include_zero: bool,
        include_negatives: bool,
    },
    MultiplicativeGrid {
        primes: Vec<u64>,
        exponent_bound: u32,
        include_sign: bool,
    },
}

/// An immutable finite window with a total enumeration order.
pub struct Window {
    kind: WindowKind,
    len: usize,
    elements: OnceLock<Vec<Rational>>,
    index: OnceLock<HashMap<Rational, usize>>,
}

impl Window {
    pub fn new(kind: WindowKind) -> Result<Self, WindowError> {
        Self::with_cap(kind, DEFAULT_CAP)
    }

    pub fn with_cap(kind: WindowKind, cap: usize) -> Result<Self, WindowError> {
        let size = cardinality(&kind)?;
        if size > cap as u128 {
            return Err(WindowError::CapExceeded { size, cap });
        }
        Ok(Window {
            kind,
            len: size as usize,
            elements: OnceLock::new(),
            index: OnceLock::new(),
        })
    }

    pub fn integers(lo: i64, hi: i64) -> Result<Self, WindowError> {
        Self::new(WindowKind::IntegerInterval { lo, hi })
    }

    /// Farey window with zero and without negatives.
    pub fn farey(n: u64) -> Result<Self, WindowError> {
        Self::new(WindowKind::Farey {
            n,
            include_zero: true,
            include_negatives: false,
        })
    }

    pub fn grid(primes: &[u64], exponent_bound: u32, include_sign: bool) -> Result<Self, WindowError> {
        Self::new(WindowKind::MultiplicativeGrid {
            primes: primes.to_vec(),
            exponent_bound,
            include_sign,
        })
    }

    pub fn kind(&self) -> &WindowKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// The elements in canonical order.
    pub fn elements(&self) -> &[Rational] {
        self.elements.get_or_init(|| build_elements(&self.kind))
    }

    /// Like [`Window::elements`], refusing windows larger than `cap`.
    pub fn enumerate(&self, cap: usize) -> Result<&[Rational], WindowError> {
        if self.len > cap {
            return Err(WindowError::CapExceeded {
                size: self.len as u128,
                cap,
            });
        }
        Ok(self.elements())
    }

    pub fn element(&self, index: usize) -> &Rational {
        &self.elements()[index]
    }

    pub fn contains(&self, q: &Rational) -> bool {
        match &self.kind {
            WindowKind::IntegerInterval { lo, hi } => {
                q.is_integer() && q.numer() >= &BigInt::from(*lo) && q.numer() <= &BigInt::from(*hi)
            }
            WindowKind::Farey {
                n,
                include_zero,
                include_negatives,
            } => {
                if q.is_zero() {
                    return *include_zero;
                }
                if q.is_negative() && !include_negatives {
                    return false;
                }
                let n = BigInt::from(*n);
                *q.denom() <= n && q.numer().abs() <= n
            }
            WindowKind::MultiplicativeGrid { .. } => self.grid_position(q).is_some(),
        }
    }

    /// Zero-based position in canonical order.
    pub fn index_of(&self, q: &Rational) -> Option<usize> {
        match &self.kind {
            WindowKind::IntegerInterval { lo, hi } => {
                let v = q.to_i64()?;
                (*lo..=*hi).contains(&v).then(|| (v - lo) as usize)
            }
            WindowKind::Farey { .. } => {
                if !self.contains(q) {
                    return None;
                }
                self.index
                    .get_or_init(|| {
                        self.elements()
                            .iter()
                            .enumerate()
                            .map(|(i, e)| (e.clone(), i))
                            .collect()
                    })
                    .get(q)
                    .copied()
            }
            WindowKind::MultiplicativeGrid { .. } => self.grid_position(q),
        }
    }

    fn grid_position(&self, q: &Rational) -> Option<usize> {
        let WindowKind::MultiplicativeGrid {
            primes,
            exponent_bound,
            include_sign,
        } = &self.kind
        else {
            return None;
        };
        if q.is_zero() || (q.is_negative() && !include_sign) {
            return None;
        }
        let mut num = q.numer().abs();
        let mut den = q.denom().clone();
        let side = (2 * *exponent_bound as usize) + 1;
        let mut pos = 0usize;
        for &p in primes {
            let p = BigInt::from(p);
            let mut e: i64 = 0;
            while (&num % &p).is_zero() {
                num /= &p;
                e += 1;
                if e > *exponent_bound as i64 {
                    return None;
                }
            }
            while (&den % &p).is_zero() {
                den /= &p;
                e -= 1;
                if -e > *exponent_bound as i64 {
                    return None;
                }
            }
            pos = pos * side + (e + *exponent_bound as i64) as usize;
        }
        if !num.is_one() || !den.is_one() {
            return None;
        }
        if q.is_negative() {
            pos += self.len / 2;
        }
        Some(pos)
    }

    /// The window spec string this window parses from.
    pub fn spec(&self) -> String {
        self.to_string()
    }
}

impl Clone for Window {
    fn clone(&self) -> Self {
        Window {
            kind: self.kind.clone(),
            len: self.len,
            elements: self.elements.clone(),
            index: OnceLock::new(),
        }
    }
}

impl PartialEq for Window {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Window {}

impl fmt::Debug for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Window({self})")
    }
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn coprime_count(n: u64, b: u64) -> u64 {
    (1..=n).filter(|a| a.gcd(&b) == 1).count() as u64
}

fn cardinality(kind: &WindowKind) -> Result<u128, WindowError> {
    match kind {
        WindowKind::IntegerInterval { lo, hi } => {
            if lo > hi {
                return Err(WindowError::EmptyInterval { lo: *lo, hi: *hi });
            }
            Ok((*hi as i128 - *lo as i128 + 1) as u128)
        }
        WindowKind::Farey {
            n,
            include_zero,
            include_negatives,
        } => {
            if *n == 0 {
                return Err(WindowError::Invalid("Farey bound must be at least 1".into()));
            }
            if *n > 100_000 {
                return Err(WindowError::CapExceeded {
                    size: u128::MAX,
                    cap: DEFAULT_CAP,
                });
            }
            let positives: u128 = (1..=*n).map(|b| coprime_count(*n, b) as u128).sum();
            let signs = if *include_negatives { 2 } else { 1 };
            Ok(positives * signs + u128::from(*include_zero))
        }
        WindowKind::MultiplicativeGrid {
            primes,
            exponent_bound,
            include_sign,
        } => {
            if primes.is_empty() {
                return Err(WindowError::Invalid("grid needs at least one prime".into()));
            }
            for (i, p) in primes.iter().enumerate() {
                if !is_prime(*p) {
                    return Err(WindowError::Invalid(format!("{p} is not prime")));
                }
                if primes[..i].contains(p) {
                    return Err(WindowError::Invalid(format!("prime {p} repeated")));
                }
            }
            let side = 2 * *exponent_bound as u128 + 1;
            let mut size: u128 = if *include_sign { 2 } else { 1 };
            for _ in primes {
                size = size.checked_mul(side).ok_or(WindowError::CapExceeded {
                    size: u128::MAX,
                    cap: DEFAULT_CAP,
                })?;
            }
            Ok(size)
        }
    }
}

fn build_elements(kind: &WindowKind) -> Vec<Rational> {
    match kind {
        WindowKind::IntegerInterval { lo, hi } => (*lo..=*hi).map(Rational::from).collect(),
        WindowKind::Farey {
            n,
            include_zero,
            include_negatives,
        } => {
            let n = *n as i64;
            let mut out = Vec::new();
            if *include_zero {
                out.push(Rational::zero());
            }
            for b in 1..=n {
                let lo = if *include_negatives { -n } else { 1 };
                for a in lo..=n {
                    if a != 0 && a.gcd(&b) == 1 {
                        out.push(Rational::new(a, b).expect("b >= 1"));
                    }
                }
            }
            out
        }
        WindowKind::MultiplicativeGrid {
            primes,
            exponent_bound,
            include_sign,
        } => {
            let e = *exponent_bound as i32;
            let k = primes.len();
            let mut exps = vec![-e; k];
            let mut out = Vec::new();
            loop {
                let mut v = Rational::one();
                for (p, x) in primes.iter().zip(&exps) {
                    v = v * Rational::from(*p as i64).pow(*x).expect("prime is nonzero");
                }
                out.push(v);
                // odometer, last coordinate fastest
                let mut i = k;
                loop {
                    if i == 0 {
                        if *include_sign {
                            let neg: Vec<Rational> = out.iter().map(|x| -x).collect();
                            out.extend(neg);
                        }
                        return out;
                    }
                    i -= 1;
                    if exps[i] < e {
                        exps[i] += 1;
                        break;
                    }
                    exps[i] = -e;
                }
            }
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            WindowKind::IntegerInterval { lo, hi } => write!(f, "int:{lo}..{hi}"),
            WindowKind::Farey {
                n,
                include_zero,
                include_negatives,
            } => {
                write!(f, "farey:{n}")?;
                if !include_zero {
                    f.write_str(":-zero")?;
                }
                if *include_negatives {
                    f.write_str(":+neg")?;
                }
                Ok(())
            }
            WindowKind::MultiplicativeGrid {
                primes,
                exponent_bound,
                include_sign,
            } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "mgrid:{}:{exponent_bound}", ps.join(","))?;
                if *include_sign {
                    f.write_str(":+sign")?;
                }
                Ok(())
            }
        }
    }
}

fn parse_flags<'a>(
    flags: impl Iterator<Item = &'a str>,
    known: &[&str],
    spec: &str,
) -> Result<Vec<&'a str>, WindowError> {
    let mut out = Vec::new();
    for f in flags {
        let f = f.trim();
        if !known.contains(&f) {
            return Err(WindowError::Syntax(spec.to_string()));
        }
        out.push(f);
    }
    Ok(out)
}

impl FromStr for Window {
    type Err = WindowError;

    /// `int:lo..hi`, `farey:N[:+zero|:-zero][:+neg]`, `mgrid:p1,p2,...:E[:+sign]`.
    /// Farey windows contain 0 unless `-zero` is given.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WindowError::Syntax(s.to_string());
        let s = s.trim();
        let mut parts = s.split(':');
        let head = parts.next().ok_or_else(bad)?;
        match head {
            "int" => {
                let range = parts.next().ok_or_else(bad)?;
                if parts.next().is_some() {
                    return Err(bad());
                }
                let (lo, hi) = parse_range(range).ok_or_else(bad)?;
                Window::integers(lo, hi)
            }
            "farey" => {
                let n: u64 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
                let flags = parse_flags(parts, &["+zero", "-zero", "+neg"], s)?;
                Window::new(WindowKind::Farey {
                    n,
                    include_zero: !flags.contains(&"-zero"),
                    include_negatives: flags.contains(&"+neg"),
                })
            }
            "mgrid" => {
                let primes = parts
                    .next()
                    .ok_or_else(bad)?
                    .split(',')
                    .map(|p| p.trim().parse::<u64>())
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(|_| bad())?;
                let e: u32 = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
                let flags = parse_flags(parts, &["+sign"], s)?;
                Window::grid(&primes, e, flags.contains(&"+sign"))
            }
            _ => Err(bad()),
        }
    }
}

pub(crate) fn parse_range(text: &str) -> Option<(i64, i64)> {
    let (a, b) = text.split_once("..")?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl Serialize for Window {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Window {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A parameterized run of windows for threshold sweeps: `int:A..B` means the
/// windows `int:1..N` for `N` in `A..=B`; `farey:A..B[:flags]` and
/// `mgrid:primes:A..B[:+sign]` sweep the Farey bound or exponent bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WindowFamily {
    template: WindowKind,
    pub lo: u64,
    pub hi: u64,
}

impl WindowFamily {
    pub fn window(&self, n: u64) -> Result<Window, WindowError> {
        let kind = match &self.template {
            WindowKind::IntegerInterval { lo, .. } => WindowKind::IntegerInterval {
                lo: *lo,
                hi: i64::try_from(n).map_err(|_| WindowError::Invalid("bound too large".into()))?,
            },
            WindowKind::Farey {
                include_zero,
                include_negatives,
                ..
            } => WindowKind::Farey {
                n,
                include_zero: *include_zero,
                include_negatives: *include_negatives,
            },
            WindowKind::MultiplicativeGrid {
                primes,
                include_sign,
                ..
            } => WindowKind::MultiplicativeGrid {
                primes: primes.clone(),
                exponent_bound: u32::try_from(n).map_err(|_| WindowError::Invalid("bound too large".into()))?,
                include_sign: *include_sign,
            },
        };
        Window::new(kind)
    }

    pub fn parameters(&self) -> impl Iterator<Item = u64> {
        self.lo..=self.hi
    }
}

impl FromStr for WindowFamily {
    type Err = WindowError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || WindowError::Syntax(s.to_string());
        let parts: Vec<&str> = s.trim().split(':').collect();
        let range_at = match parts.first().copied() {
            Some("int") | Some("farey") => 1,
            Some("mgrid") => 2,
            _ => return Err(bad()),
        };
        let (lo, hi) = parts.get(range_at).and_then(|r| parse_range(r)).ok_or_else(bad)?;
        if lo > hi || lo < 0 {
            return Err(bad());
        }
        // Parse a representative member to validate the flags.
        let mut probe = parts.clone();
        let probe_bound = if parts[0] == "int" { format!("1..{}", hi.max(1)) } else { hi.max(1).to_string() };
        probe[range_at] = &probe_bound;
        let template = probe.join(":").parse::<Window>()?.kind;
        Ok(WindowFamily {
            template,
            lo: lo as u64,
            hi: hi as u64,
        })
    }
}

impl fmt::Display for WindowFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.template {
            WindowKind::IntegerInterval { .. } => write!(f, "int:{}..{}", self.lo, self.hi),
            WindowKind::Farey {
                include_zero,
                include_negatives,
                ..
            } => {
                write!(f, "farey:{}..{}", self.lo, self.hi)?;
                if !include_zero {
                    f.write_str(":-zero")?;
                }
                if *include_negatives {
                    f.write_str(":+neg")?;
                }
                Ok(())
            }
            WindowKind::MultiplicativeGrid {
                primes,
                include_sign,
                ..
            } => {
                let ps: Vec<String> = primes.iter().map(u64::to_string).collect();
                write!(f, "mgrid:{}:{}..{}", ps.join(","), self.lo, self.hi)?;
                if *include_sign {
                    f.write_str(":+sign")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn w(s: &str) -> Window {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(w("int:1..5").elements(), &[q(1, 1), q(2, 1), q(3, 1), q(4, 1), q(5, 1)]);

        let f = w("farey:2:+neg");
        assert_eq!(f.len(), 7);
        assert_eq!(
            f.elements(),
            &[q(0, 1), q(-2, 1), q(-1, 1), q(1, 1), q(2, 1), q(-1, 2), q(1, 2)]
        );

        let g = w("mgrid:2,3:1");
        assert_eq!(g.len(), 9);
        let mut vals = g.elements().to_vec();
        vals.sort();
        assert_eq!(
            vals,
            vec![q(1, 6), q(1, 3), q(1, 2), q(2, 3), q(1, 1), q(3, 2), q(2, 1), q(3, 1), q(6, 1)]
        );
        // exponent-vector order: (-1,-1), (-1,0), (-1,1), (0,-1), ...
        assert_eq!(&g.elements()[..4], &[q(1, 6), q(1, 2), q(3, 2), q(1, 3)]);
    }

    #[test]
    fn membership_examples() {
        assert!(w("farey:3").contains(&q(2, 3)));
        assert!(!w("farey:3").contains(&q(1, 4)));
        assert!(!w("mgrid:2,3:2").contains(&Rational::zero()));
        assert_eq!(w("int:1..5").index_of(&q(3, 1)), Some(2));
        assert_eq!(w("int:1..5").index_of(&q(7, 1)), None);
        assert_eq!(w("int:1..5").index_of(&q(5, 2)), None);
        assert_eq!(w("farey:1:+neg").index_of(&q(-1, 1)), Some(1));
        assert_eq!(w("farey:1:+neg").elements(), &[q(0, 1), q(-1, 1), q(1, 1)]);
    }

    #[test]
    fn signed_grid_puts_negatives_last() {
        let g = w("mgrid:2:1:+sign");
        assert_eq!(g.elements(), &[q(1, 2), q(1, 1), q(2, 1), q(-1, 2), q(-1, 1), q(-2, 1)]);
        for (i, e) in g.elements().iter().enumerate() {
            assert_eq!(g.index_of(e), Some(i));
        }
        assert_eq!(g.index_of(&q(4, 1)), None);
        assert_eq!(g.index_of(&q(2, 3)), None);
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["int:-3..7", "farey:5", "farey:4:-zero:+neg", "mgrid:2,3,5:2:+sign"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("farey:4:+zero").to_string(), "farey:4");
        for bad in ["int:5..1", "farey:0", "mgrid:4:1", "mgrid:2,2:1", "farey:3:+sgn", "rat:1"] {
            assert!(bad.parse::<Window>().is_err(), "{bad}");
        }
    }

    #[test]
    fn cap_is_enforced() {
        let err = Window::with_cap(WindowKind::IntegerInterval { lo: 0, hi: 99 }, 10).unwrap_err();
        assert_eq!(err, WindowError::CapExceeded { size: 100, cap: 10 });
        assert!(w("int:1..100").enumerate(50).is_err());
        assert!("int:0..20000000".parse::<Window>().is_err());
    }

    #[test]
    fn window_families() {
        let fam: WindowFamily = "farey:1..8".parse().unwrap();
        assert_eq!(fam.parameters().count(), 8);
        assert_eq!(fam.window(3).unwrap().to_string(), "farey:3");
        let fam: WindowFamily = "int:1..14".parse().unwrap();
        assert_eq!(fam.window(13).unwrap().to_string(), "int:1..13");
        let fam: WindowFamily = "mgrid:2,3:1..3:+sign".parse().unwrap();
        assert_eq!(fam.window(2).unwrap().to_string(), "mgrid:2,3:2:+sign");
        assert_eq!(fam.to_string(), "mgrid:2,3:1..3:+sign");
    }

    #[test]
    fn concurrent_first_lookup() {
        let win = std::sync::Arc::new(w("farey:12:+neg"));
        let handles: Vec<_> = (0..8)
            .map(|_| {
                let win = win.clone();
                std::thread::spawn(move || win.index_of(&q(-5, 7)))
            })
            .collect();
        let got: Vec<_> = handles.into_iter().map(|h| h.join().unwrap()).collect();
        assert!(got.iter().all(|g| g.is_some() && *g == got[0]));
    }
}
