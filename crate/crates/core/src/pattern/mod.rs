//! Two-variable pattern families and their instantiation.
//!
//! A family is a finite list of terms in `x` and `y`. The grammar covers
//! `x`, `y`, `x*y^a`, `x/y^a`, and the scaled additive form
//! `c1*x + P(c2*y)` where `P` has zero constant term. A separate offset
//! form `x + c` (nonzero `c`) is only accepted when explicitly enabled.

mod catalog;

pub use catalog::{builtin_family, catalog_keys, CATALOG_SAMPLE};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::parse::{lex, Cursor, Monomial};
use crate::arith::{ArithError, PolynomialQ, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("constant term must be zero (found {constant} at {position})")]
    NonzeroConstant { position: usize, constant: Rational },
    #[error("duplicate term `{0}`")]
    DuplicateTerm(String),
    #[error("a family needs at least one term")]
    EmptyFamily,
    #[error("invalid instantiation point: {0}")]
    InvalidPoint(String),
    #[error("unknown family `{0}`")]
    UnknownFamily(String),
    #[error("invalid term: {0}")]
    InvalidTerm(String),
}

impl From<ArithError> for PatternError {
    fn from(e: ArithError) -> Self {
        match e {
            ArithError::Syntax { position, message } => PatternError::Syntax { position, message },
            other => PatternError::InvalidTerm(other.to_string()),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum PatternTerm {
    X,
    Y,
    /// `x_coeff * x + poly(y_scale * y)`, `poly(0) = 0`.
    Affine {
        x_coeff: Rational,
        poly: PolynomialQ,
        y_scale: Rational,
    },
    /// `x * y^exponent`; a negative exponent divides by `y^|exponent|`.
    MulPow { exponent: i32 },
    /// `x + constant`, admitted only with [`FamilyOptions::allow_offset`].
    Offset { constant: Rational },
}

impl PatternTerm {
    /// `x + p(y)`.
    pub fn shift(poly: PolynomialQ) -> Self {
        PatternTerm::Affine {
            x_coeff: Rational::one(),
            poly,
            y_scale: Rational::one(),
        }
    }

    /// `None` only when `y = 0` meets a negative power.
    pub fn eval(&self, x: &Rational, y: &Rational) -> Option<Rational> {
        match self {
            PatternTerm::X => Some(x.clone()),
            PatternTerm::Y => Some(y.clone()),
            PatternTerm::Affine {
                x_coeff,
                poly,
                y_scale,
            } => Some(x_coeff * x + poly.eval(&(y_scale * y))),
            PatternTerm::MulPow { exponent } => Some(x * &y.pow(*exponent)?),
            PatternTerm::Offset { constant } => Some(x + constant),
        }
    }

    /// A normal form: equal normal forms denote the same map.
    pub fn canonical(&self) -> PatternTerm {
        match self {
            PatternTerm::Affine {
                x_coeff,
                poly,
                y_scale,
            } => {
                let poly = poly.compose_scaled(y_scale);
                if x_coeff.is_one() && poly.is_zero() {
                    PatternTerm::X
                } else if x_coeff.is_zero() && poly == PolynomialQ::t() {
                    PatternTerm::Y
                } else {
                    PatternTerm::Affine {
                        x_coeff: x_coeff.clone(),
                        poly,
                        y_scale: Rational::one(),
                    }
                }
            }
            PatternTerm::Offset { constant } if constant.is_zero() => PatternTerm::X,
            other => other.clone(),
        }
    }

    pub fn uses_y(&self) -> bool {
        match self {
            PatternTerm::X | PatternTerm::Offset { .. } => false,
            PatternTerm::Y | PatternTerm::MulPow { .. } => true,
            PatternTerm::Affine { poly, y_scale, .. } => !poly.compose_scaled(y_scale).is_zero(),
        }
    }

    fn validate(&self) -> Result<(), PatternError> {
        match self {
            PatternTerm::Affine { x_coeff, poly, .. } => {
                if x_coeff.is_zero() {
                    return Err(PatternError::InvalidTerm("coefficient of x must be nonzero".into()));
                }
                if !poly.has_zero_constant() {
                    return Err(PatternError::NonzeroConstant {
                        position: 0,
                        constant: poly.coeff(0),
                    });
                }
                Ok(())
            }
            PatternTerm::MulPow { exponent: 0 } => {
                Err(PatternError::InvalidTerm("exponent of y must be nonzero".into()))
            }
            _ => Ok(()),
        }
    }

    /// Parses one term. `offset` is the term's byte position in the
    /// surrounding text, used for error positions.
    pub fn parse(text: &str, offset: usize, allow_offset: bool) -> Result<Self, PatternError> {
        let toks = lex(text, offset)?;
        if toks.is_empty() {
            return Err(PatternError::Syntax {
                position: offset,
                message: "empty term".into(),
            });
        }
        let mut cur = Cursor::new(&toks, offset + text.len());
        let monos = cur.sum()?;
        if !cur.at_end() {
            return Err(PatternError::Syntax {
                position: cur.pos(),
                message: "unexpected trailing input".into(),
            });
        }
        classify(&monos, offset, allow_offset)
    }
}

fn syntax(position: usize, message: impl Into<String>) -> PatternError {
    PatternError::Syntax {
        position,
        message: message.into(),
    }
}

/// Turns a monomial sum over `x`, `y` (`t` is read as `y`) into a term.
fn classify(monos: &[Monomial], offset: usize, allow_offset: bool) -> Result<PatternTerm, PatternError> {
    let norm = |m: &Monomial| -> (i32, i32) {
        let x = m.powers.get(&'x').copied().unwrap_or(0);
        let y = m.powers.get(&'y').copied().unwrap_or(0) + m.powers.get(&'t').copied().unwrap_or(0);
        (x, y)
    };
    for m in monos {
        if let Some(v) = m.powers.keys().find(|v| !matches!(v, 'x' | 'y' | 't')) {
            return Err(syntax(m.pos, format!("unknown variable `{v}`")));
        }
    }

    if let [m] = monos {
        if m.applied.is_none() {
            match norm(m) {
                (1, 0) if m.coef.is_one() => return Ok(PatternTerm::X),
                (0, 1) if m.coef.is_one() => return Ok(PatternTerm::Y),
                (1, a) if a != 0 => {
                    if !m.coef.is_one() {
                        return Err(syntax(m.pos, "x*y^a terms take no coefficient"));
                    }
                    return Ok(PatternTerm::MulPow { exponent: a });
                }
                _ => {}
            }
        }
    }

    let mut x_coeff = Rational::zero();
    let mut ypoly = PolynomialQ::zero();
    let mut applied: Option<(PolynomialQ, Rational)> = None;
    for m in monos {
        if let Some(app) = &m.applied {
            if !m.powers.is_empty() {
                return Err(syntax(m.pos, "an applied polynomial cannot be multiplied by a variable"));
            }
            if applied.is_some() {
                return Err(syntax(m.pos, "at most one applied polynomial per term"));
            }
            let inner = PolynomialQ::from_monomials(&app.inner, 't')?.scale(&m.coef);
            let scale = match app.arg.as_slice() {
                [a] if a.applied.is_none() && norm(a) == (0, 1) && a.powers.len() == 1 => a.coef.clone(),
                _ => return Err(syntax(m.pos, "argument must have the form `c*y`")),
            };
            if scale.is_zero() {
                return Err(syntax(m.pos, "argument scale must be nonzero"));
            }
            applied = Some((inner, scale));
            continue;
        }
        match norm(m) {
            (1, 0) => x_coeff = x_coeff + &m.coef,
            (0, k) if k >= 0 => {
                ypoly = ypoly.add(&PolynomialQ::monomial(m.coef.clone(), k as usize));
            }
            (0, _) => return Err(syntax(m.pos, "negative powers of y only appear as x/y^a")),
            _ => return Err(syntax(m.pos, "x may only appear linearly or as x*y^a")),
        }
    }

    let constant = ypoly.coeff(0) + applied.as_ref().map_or(Rational::zero(), |(p, _)| p.coeff(0));
    if x_coeff.is_zero() {
        return Err(syntax(offset, "every term except `y` must involve x"));
    }
    if !constant.is_zero() {
        let pure_offset = applied.is_none() && ypoly.degree() == Some(0) && x_coeff.is_one();
        if allow_offset && pure_offset {
            return Ok(PatternTerm::Offset { constant });
        }
        return Err(PatternError::NonzeroConstant {
            position: offset,
            constant,
        });
    }
    let term = match applied {
        Some((poly, y_scale)) => {
            if !ypoly.is_zero() {
                return Err(syntax(offset, "mixing an applied polynomial with plain powers of y"));
            }
            PatternTerm::Affine {
                x_coeff,
                poly,
                y_scale,
            }
        }
        None => PatternTerm::Affine {
            x_coeff,
            poly: ypoly,
            y_scale: Rational::one(),
        },
    };
    Ok(match term.canonical() {
        PatternTerm::X => PatternTerm::X,
        _ => term,
    })
}

impl fmt::Display for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternTerm::X => f.write_str("x"),
            PatternTerm::Y => f.write_str("y"),
            PatternTerm::MulPow { exponent } => match *exponent {
                1 => f.write_str("x*y"),
                -1 => f.write_str("x/y"),
                a if a > 0 => write!(f, "x*y^{a}"),
                a => write!(f, "x/y^{}", -(a as i64)),
            },
            PatternTerm::Offset { constant } => {
                if constant.is_negative() {
                    write!(f, "x - {}", constant.abs())
                } else {
                    write!(f, "x + {constant}")
                }
            }
            PatternTerm::Affine {
                x_coeff,
                poly,
                y_scale,
            } => {
                if x_coeff.is_one() {
                    f.write_str("x")?;
                } else if (-x_coeff).is_one() {
                    f.write_str("-x")?;
                } else {
                    write!(f, "{x_coeff}*x")?;
                }
                if poly.is_zero() {
                    return Ok(());
                }
                if y_scale.is_one() {
                    let body = poly.display_in('y');
                    match body.strip_prefix('-') {
                        Some(rest) => write!(f, " - {rest}"),
                        None => write!(f, " + {body}"),
                    }
                } else {
                    write!(f, " + ({poly})({y_scale}*y)")
                }
            }
        }
    }
}

impl fmt::Debug for PatternTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "`{self}`")
    }
}

impl Serialize for PatternTerm {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(default)]
pub struct FamilyOptions {
    /// Require all term values of an instance to be pairwise distinct.
    pub distinct: bool,
    /// Require `x != 0` even without multiplicative terms.
    pub strict_nonzero_x: bool,
    /// Admit `x + c` terms with `c != 0`.
    pub allow_offset: bool,
}

/// A nonempty, duplicate-free, ordered list of pattern terms with
/// instantiation constraints. `y != 0` is always required.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Family {
    terms: Vec<PatternTerm>,
    options: FamilyOptions,
}

/// The `k`, `a`, `p_1..p_k` shape of a family of the form
/// `{x, x*y^a, x + p_1(y), ..., x + p_k(y)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyShape {
    pub additive: Vec<PolynomialQ>,
    pub exponent: Option<i32>,
    pub has_x: bool,
    pub has_y: bool,
}

impl Family {
    pub fn new(terms: Vec<PatternTerm>, options: FamilyOptions) -> Result<Self, PatternError> {
        if terms.is_empty() {
            return Err(PatternError::EmptyFamily);
        }
        let mut seen: Vec<PatternTerm> = Vec::with_capacity(terms.len());
        for t in &terms {
            t.validate()?;
            if let PatternTerm::Offset { constant } = t {
                if !options.allow_offset && !constant.is_zero() {
                    return Err(PatternError::NonzeroConstant {
                        position: 0,
                        constant: constant.clone(),
                    });
                }
            }
            let c = t.canonical();
            if seen.contains(&c) {
                return Err(PatternError::DuplicateTerm(t.to_string()));
            }
            seen.push(c);
        }
        Ok(Family { terms, options })
    }

    /// Like [`Family::new`] but silently drops terms equal to earlier ones.
    pub fn dedup(terms: Vec<PatternTerm>, options: FamilyOptions) -> Result<Self, PatternError> {
        let mut kept: Vec<PatternTerm> = Vec::new();
        for t in terms {
            let c = t.canonical();
            if !kept.iter().any(|k| k.canonical() == c) {
                kept.push(t);
            }
        }
        Family::new(kept, options)
    }

    pub fn terms(&self) -> &[PatternTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn options(&self) -> FamilyOptions {
        self.options
    }

    pub fn with_options(mut self, options: FamilyOptions) -> Result<Self, PatternError> {
        if !options.allow_offset && self.terms.iter().any(|t| matches!(t, PatternTerm::Offset { .. })) {
            return Err(PatternError::InvalidTerm("family has offset terms".into()));
        }
        self.options = options;
        Ok(self)
    }

    pub fn requires_nonzero_x(&self) -> bool {
        self.options.strict_nonzero_x || self.terms.iter().any(|t| matches!(t, PatternTerm::MulPow { .. }))
    }

    pub fn depends_on_y(&self) -> bool {
        self.terms.iter().any(PatternTerm::uses_y)
    }

    /// Whether `(x, y)` meets the family's constraints (term distinctness is
    /// checked on the values, see [`Family::instantiate`]).
    pub fn admits(&self, x: &Rational, y: &Rational) -> bool {
        !y.is_zero() && !(x.is_zero() && self.requires_nonzero_x())
    }

    /// Exact value of every term at `(x, y)`, in term order.
    pub fn instantiate(&self, x: &Rational, y: &Rational) -> Result<Vec<Rational>, PatternError> {
        if y.is_zero() {
            return Err(PatternError::InvalidPoint("y must be nonzero".into()));
        }
        if x.is_zero() && self.requires_nonzero_x() {
            return Err(PatternError::InvalidPoint("x must be nonzero".into()));
        }
        let values: Vec<Rational> = self
            .terms
            .iter()
            .map(|t| t.eval(x, y).expect("y is nonzero"))
            .collect();
        if self.options.distinct && !all_distinct(&values) {
            return Err(PatternError::InvalidPoint("term values are not distinct".into()));
        }
        Ok(values)
    }

    pub fn shape(&self) -> FamilyShape {
        let mut shape = FamilyShape {
            additive: Vec::new(),
            exponent: None,
            has_x: false,
            has_y: false,
        };
        for t in &self.terms {
            match t.canonical() {
                PatternTerm::X => shape.has_x = true,
                PatternTerm::Y => shape.has_y = true,
                PatternTerm::MulPow { exponent } => shape.exponent = Some(exponent),
                PatternTerm::Affine { x_coeff, poly, .. } if x_coeff.is_one() => shape.additive.push(poly),
                _ => {}
            }
        }
        shape
    }
}

pub(crate) fn all_distinct(values: &[Rational]) -> bool {
    values
        .iter()
        .enumerate()
        .all(|(i, v)| values[..i].iter().all(|w| w != v))
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.terms.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("; "))
    }
}

impl fmt::Debug for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Family{{{self}}}")
    }
}

/// Parses `term; term; ...`.
pub fn parse_family(text: &str, options: FamilyOptions) -> Result<Family, PatternError> {
    let mut terms = Vec::new();
    let mut offset = 0;
    for piece in text.split(';') {
        let lead = piece.len() - piece.trim_start().len();
        let trimmed = piece.trim();
        if trimmed.is_empty() {
            return Err(syntax(offset, "empty term"));
        }
        terms.push(PatternTerm::parse(trimmed, offset + lead, options.allow_offset)?);
        offset += piece.len() + 1;
    }
    Family::new(terms, options)
}

impl FromStr for Family {
    type Err = PatternError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_family(s, FamilyOptions::default())
    }
}

/// Resolves either a catalog key or DSL text.
pub fn resolve_family(text: &str, options: FamilyOptions) -> Result<Family, PatternError> {
    match builtin_family(text) {
        Ok(f) => f.with_options(FamilyOptions {
            allow_offset: options.allow_offset,
            ..options
        }),
        Err(PatternError::UnknownFamily(_)) => parse_family(text, options),
        Err(e) => Err(e),
    }
}

/// A monochromatic instance: every term value at `(x, y)` has `color`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub x: Rational,
    pub y: Rational,
    pub color: u8,
    pub values: Vec<(PatternTerm, Rational)>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|(t, v)| format!("{t} = {v}")).collect();
        write!(f, "x = {}, y = {}, color {}: {}", self.x, self.y, self.color, vals.join(", "))
    }
}

#[derive(Serialize, Deserialize)]
struct FamilyRepr {
    text: String,
    #[serde(default)]
    options: FamilyOptions,
}

impl Serialize for Family {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        FamilyRepr {
            text: self.to_string(),
            options: self.options,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Family {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let repr = FamilyRepr::deserialize(deserializer)?;
        parse_family(&repr.text, repr.options).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn fam(s: &str) -> Family {
        s.parse().unwrap()
    }

    #[test]
    fn parse_schur() {
        let f = fam("x; y; x+y");
        assert_eq!(f.len(), 3);
        assert_eq!(f.terms()[0], PatternTerm::X);
        assert_eq!(f.terms()[1], PatternTerm::Y);
        assert_eq!(f.terms()[2], PatternTerm::shift(PolynomialQ::t()));
        assert_eq!(f.to_string(), "x; y; x + y");
    }

    #[test]
    fn parse_quotient_family() {
        let f = fam("x; x/y^1; x+t");
        let shape = f.shape();
        assert_eq!(shape.exponent, Some(-1));
        assert_eq!(shape.additive, vec![PolynomialQ::t()]);
        assert!(f.requires_nonzero_x());
    }

    #[test]
    fn offset_needs_flag() {
        let err = "x; x+3".parse::<Family>().unwrap_err();
        assert_eq!(
            err,
            PatternError::NonzeroConstant {
                position: 3,
                constant: q(3, 1)
            }
        );
        let opts = FamilyOptions {
            allow_offset: true,
            ..Default::default()
        };
        let f = parse_family("x; x+3", opts).unwrap();
        assert_eq!(f.terms()[1], PatternTerm::Offset { constant: q(3, 1) });
        assert!(!f.depends_on_y());
        // offsets stay confined to the pure `x + c` form
        assert!(parse_family("x; x + y + 3", opts).is_err());
    }

    #[test]
    fn instantiate_examples() {
        assert_eq!(fam("x; y; x+y").instantiate(&q(2, 1), &q(3, 1)).unwrap(), vec![q(2, 1), q(3, 1), q(5, 1)]);
        assert_eq!(
            fam("x; x/y; x+y").instantiate(&q(6, 1), &q(2, 1)).unwrap(),
            vec![q(6, 1), q(3, 1), q(8, 1)]
        );
        assert_eq!(
            fam("x; x*y^2; x+t^2").instantiate(&q(4, 1), &q(1, 2)).unwrap(),
            vec![q(4, 1), q(1, 1), q(17, 4)]
        );
    }

    #[test]
    fn instantiate_rejects_invalid_points() {
        assert!(matches!(
            fam("x; y; x+y").instantiate(&q(1, 1), &Rational::zero()),
            Err(PatternError::InvalidPoint(_))
        ));
        assert!(fam("x; y; x+y").instantiate(&Rational::zero(), &q(1, 1)).is_ok());
        assert!(fam("x; x*y").instantiate(&Rational::zero(), &q(1, 1)).is_err());
        let strict = parse_family(
            "x; y; x+y",
            FamilyOptions {
                strict_nonzero_x: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(strict.instantiate(&Rational::zero(), &q(1, 1)).is_err());
        let distinct = parse_family(
            "x; y; x+y",
            FamilyOptions {
                distinct: true,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(distinct.instantiate(&q(1, 1), &q(2, 1)).is_ok());
        assert!(distinct.instantiate(&q(2, 1), &q(2, 1)).is_err());
    }

    #[test]
    fn scaled_affine_form() {
        let f = fam("x; 2*x + (t^2 - t)(3*y)");
        let v = f.instantiate(&q(1, 1), &q(1, 3)).unwrap();
        // 2 + (1 - 1) = 2
        assert_eq!(v[1], q(2, 1));
        assert_eq!(f.to_string(), "x; 2*x + (t^2 - t)(3*y)");
        assert_eq!(f.to_string().parse::<Family>().unwrap(), f);
        let g = fam("1/3*x + 1/3*y; x; y");
        assert_eq!(g.instantiate(&q(2, 1), &q(4, 1)).unwrap()[0], q(2, 1));
        assert_eq!(g.to_string().parse::<Family>().unwrap(), g);
    }

    #[test]
    fn duplicates_are_detected_in_normal_form() {
        assert!(matches!("x; x + 0*y".parse::<Family>(), Err(PatternError::DuplicateTerm(_))));
        assert!(matches!(
            "x + 2*y; x + (t)(2*y)".parse::<Family>(),
            Err(PatternError::DuplicateTerm(_))
        ));
        assert!(matches!("x; x".parse::<Family>(), Err(PatternError::DuplicateTerm(_))));
        assert_eq!(
            Family::dedup(vec![PatternTerm::X, PatternTerm::X], FamilyOptions::default())
                .unwrap()
                .len(),
            1
        );
    }

    #[test]
    fn syntax_errors_carry_positions() {
        match "x; y; x + * y".parse::<Family>() {
            Err(PatternError::Syntax { position, .. }) => assert_eq!(position, 10),
            other => panic!("{other:?}"),
        }
        assert!(matches!("x;; y".parse::<Family>(), Err(PatternError::Syntax { position: 2, .. })));
        assert!(matches!("x; z".parse::<Family>(), Err(PatternError::Syntax { .. })));
        assert!(matches!("y^2".parse::<Family>(), Err(PatternError::Syntax { .. })));
        assert!(matches!("x^2".parse::<Family>(), Err(PatternError::Syntax { .. })));
        assert!(matches!("2*x*y".parse::<Family>(), Err(PatternError::Syntax { .. })));
        assert!(matches!("".parse::<Family>(), Err(PatternError::Syntax { .. })));
    }

    #[test]
    fn display_round_trips_terms() {
        for text in [
            "x", "y", "x*y", "x/y", "x*y^3", "x/y^2", "x + y^2 - 3/2*y", "x - y", "-x + 2*y",
            "1/2*x", "x + (t^2)(-1/3*y)",
        ] {
            let t = PatternTerm::parse(text, 0, false).unwrap();
            assert_eq!(t.to_string(), text);
            assert_eq!(PatternTerm::parse(&t.to_string(), 0, false).unwrap(), t);
        }
        let off = PatternTerm::parse("x - 3", 0, true).unwrap();
        assert_eq!(off.to_string(), "x - 3");
    }

    #[test]
    fn family_json_round_trip() {
        let f = parse_family(
            "x; x + 3",
            FamilyOptions {
                allow_offset: true,
                ..Default::default()
            },
        )
        .unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let back: Family = serde_json::from_str(&json).unwrap();
        assert_eq!(back, f);
    }
}
