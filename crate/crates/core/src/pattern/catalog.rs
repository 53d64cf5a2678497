use crate::arith::{PolynomialQ, Rational};

use super::{Family, FamilyOptions, PatternError, PatternTerm};

/// The catalog keys understood by [`builtin_family`], with their argument
/// shapes.
pub fn catalog_keys() -> &'static [(&'static str, &'static str)] {
    &[
        ("schur", "{x, y, x+y}"),
        ("vdw(k)", "{x, x+y, ..., x+ky}"),
        ("moreira(k,[p1,...,pk])", "{x, x*y, x+p1(y), ..., x+pk(y)}"),
        ("bowen-sabok(k)", "{x, y, x*y, x+y, ..., x+ky}"),
        ("bowen-sabok-power(k,n)", "{x, y, x*y^n, x+y, ..., x+ky}, n may be negative"),
        ("thm1-quotient(a,[p1,...,pk])", "{x, x/y^a, x+p1(y), ..., x+pk(y)}"),
        ("thm1-product(a,[p1,...,pk])", "{x, x*y^a, x+p1(y), ..., x+pk(y)}"),
        ("question-hs", "{x, y, x*y, x+y}"),
    ]
}

/// Concrete instances of every catalog entry, small enough for exhaustive
/// cross-checks.
pub const CATALOG_SAMPLE: &[&str] = &[
    "schur",
    "vdw(2)",
    "vdw(3)",
    "moreira(1,[t])",
    "moreira(2,[t,t^2])",
    "bowen-sabok(1)",
    "bowen-sabok(2)",
    "bowen-sabok-power(1,-2)",
    "thm1-quotient(1,[t])",
    "thm1-product(1,[t])",
    "thm1-quotient(2,[t^2])",
    "question-hs",
];

fn bad(key: &str, why: &str) -> PatternError {
    PatternError::InvalidTerm(format!("{key}: {why}"))
}

/// Splits `a, [b, c], d` at top-level commas.
fn split_args(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    out
}

fn parse_int(key: &str, s: &str) -> Result<i64, PatternError> {
    s.trim().parse().map_err(|_| bad(key, &format!("expected an integer, got `{s}`")))
}

fn parse_polys(key: &str, s: &str) -> Result<Vec<PolynomialQ>, PatternError> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| bad(key, "expected a bracketed polynomial list"))?;
    let polys = split_args(inner)
        .into_iter()
        .map(|p| p.parse::<PolynomialQ>().map_err(PatternError::from))
        .collect::<Result<Vec<_>, _>>()?;
    if polys.is_empty() {
        return Err(bad(key, "polynomial list is empty"));
    }
    Ok(polys)
}

fn linear_shifts(k: i64) -> impl Iterator<Item = PatternTerm> {
    (1..=k).map(|j| PatternTerm::shift(PolynomialQ::monomial(Rational::from(j), 1)))
}

fn positive(key: &str, v: i64, what: &str) -> Result<i64, PatternError> {
    if v < 1 {
        Err(bad(key, &format!("{what} must be at least 1")))
    } else {
        Ok(v)
    }
}

/// Looks up a catalog family by key, e.g. `vdw(3)` or `thm1-quotient(1,[t])`.
pub fn builtin_family(key: &str) -> Result<Family, PatternError> {
    let key = key.trim();
    let (name, args) = match key.split_once('(') {
        Some((n, rest)) => {
            let body = rest
                .strip_suffix(')')
                .ok_or_else(|| PatternError::UnknownFamily(key.to_string()))?;
            (n.trim(), split_args(body))
        }
        None => (key, Vec::new()),
    };
    let opts = FamilyOptions::default();
    let terms: Vec<PatternTerm> = match (name, args.as_slice()) {
        ("schur", []) => vec![PatternTerm::X, PatternTerm::Y, PatternTerm::shift(PolynomialQ::t())],
        ("question-hs", []) => vec![
            PatternTerm::X,
            PatternTerm::Y,
            PatternTerm::MulPow { exponent: 1 },
            PatternTerm::shift(PolynomialQ::t()),
        ],
        ("vdw", [k]) => {
            let k = positive(key, parse_int(key, k)?, "k")?;
            std::iter::once(PatternTerm::X).chain(linear_shifts(k)).collect()
        }
        ("bowen-sabok", [k]) => {
            let k = positive(key, parse_int(key, k)?, "k")?;
            [PatternTerm::X, PatternTerm::Y, PatternTerm::MulPow { exponent: 1 }]
                .into_iter()
                .chain(linear_shifts(k))
                .collect()
        }
        ("bowen-sabok-power", [k, n]) => {
            let k = positive(key, parse_int(key, k)?, "k")?;
            let n = parse_int(key, n)?;
            let n = i32::try_from(n).map_err(|_| bad(key, "exponent out of range"))?;
            if n == 0 {
                return Err(bad(key, "exponent must be nonzero"));
            }
            [PatternTerm::X, PatternTerm::Y, PatternTerm::MulPow { exponent: n }]
                .into_iter()
                .chain(linear_shifts(k))
                .collect()
        }
        ("moreira", [list]) | ("moreira", [_, list]) => {
            let polys = parse_polys(key, list)?;
            if let [k, _] = args.as_slice() {
                if parse_int(key, k)? != polys.len() as i64 {
                    return Err(bad(key, "k does not match the number of polynomials"));
                }
            }
            [PatternTerm::X, PatternTerm::MulPow { exponent: 1 }]
                .into_iter()
                .chain(polys.into_iter().map(PatternTerm::shift))
                .collect()
        }
        ("thm1-quotient", [a, list]) | ("thm1-product", [a, list]) => {
            let a = positive(key, parse_int(key, a)?, "a")?;
            let a = i32::try_from(a).map_err(|_| bad(key, "exponent out of range"))?;
            let exponent = if name == "thm1-quotient" { -a } else { a };
            let polys = parse_polys(key, list)?;
            [PatternTerm::X, PatternTerm::MulPow { exponent }]
                .into_iter()
                .chain(polys.into_iter().map(PatternTerm::shift))
                .collect()
        }
        ("schur" | "question-hs" | "vdw" | "bowen-sabok" | "bowen-sabok-power" | "moreira" | "thm1-quotient"
        | "thm1-product", _) => return Err(bad(key, "wrong number of arguments")),
        _ => return Err(PatternError::UnknownFamily(key.to_string())),
    };
    Family::new(terms, opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_examples() {
        assert_eq!(builtin_family("vdw(2)").unwrap().to_string(), "x; x + y; x + 2*y");
        assert_eq!(builtin_family("bowen-sabok(1)").unwrap().to_string(), "x; y; x*y; x + y");
        assert_eq!(builtin_family("thm1-quotient(1,[t])").unwrap().to_string(), "x; x/y; x + y");
        assert_eq!(
            builtin_family("thm1-quotient(1,[t])").unwrap(),
            "x; x/y^1; x+t".parse().unwrap()
        );
        assert_eq!(
            builtin_family("moreira(2,[t, t^2 - t])").unwrap().to_string(),
            "x; x*y; x + y; x + y^2 - y"
        );
        assert_eq!(builtin_family("bowen-sabok-power(2,-3)").unwrap().to_string(), "x; y; x/y^3; x + y; x + 2*y");
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(builtin_family("ramsey"), Err(PatternError::UnknownFamily(_))));
        assert!(builtin_family("vdw(0)").is_err());
        assert!(builtin_family("vdw").is_err());
        assert!(builtin_family("moreira(3,[t])").is_err());
        assert!(builtin_family("thm1-product(1,[t+1])").is_err());
        assert!(builtin_family("moreira([t, t])").is_err());
    }

    #[test]
    fn serialize_then_parse_is_identity_on_catalog() {
        for key in CATALOG_SAMPLE {
            let f = builtin_family(key).unwrap();
            let back: Family = f.to_string().parse().unwrap();
            assert_eq!(back, f, "{key}");
        }
    }
}
