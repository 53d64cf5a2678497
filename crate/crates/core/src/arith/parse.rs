//! Tokenizer and monomial-sum reader shared by the polynomial and pattern
//! grammars. Positions are byte offsets into the caller's full input.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use super::{ArithError, Rational};

#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Tok {
    Num(BigInt),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

#[derive(Clone, Debug)]
pub(crate) struct Token {
    pub tok: Tok,
    pub pos: usize,
}

pub(crate) fn syntax(position: usize, message: impl Into<String>) -> ArithError {
    ArithError::Syntax {
        position,
        message: message.into(),
    }
}

pub(crate) fn lex(text: &str, offset: usize) -> Result<Vec<Token>, ArithError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let pos = offset + i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n: BigInt = text[start..i].parse().expect("digits");
            out.push(Token { tok: Tok::Num(n), pos });
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            c if c.is_ascii_alphabetic() => Tok::Var(c),
            other => return Err(syntax(pos, format!("unexpected character `{other}`"))),
        };
        out.push(Token { tok, pos });
        i += 1;
    }
    Ok(out)
}

/// One product of a coefficient, variable powers and at most one applied
/// group `(P)(E)`.
#[derive(Clone, Debug)]
pub(crate) struct Monomial {
    pub coef: Rational,
    pub powers: BTreeMap<char, i32>,
    pub applied: Option<Applied>,
    pub pos: usize,
}

#[derive(Clone, Debug)]
pub(crate) struct Applied {
    pub inner: Vec<Monomial>,
    pub arg: Vec<Monomial>,
}

pub(crate) struct Cursor<'a> {
    toks: &'a [Token],
    i: usize,
    end: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(toks: &'a [Token], end: usize) -> Self {
        Cursor { toks, i: 0, end }
    }

    pub fn peek(&self) -> Option<&'a Tok> {
        self.toks.get(self.i).map(|t| &t.tok)
    }

    pub fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |t| t.pos)
    }

    fn bump(&mut self) -> Option<&'a Token> {
        let t = self.toks.get(self.i);
        self.i += 1;
        t
    }

    pub fn at_end(&self) -> bool {
        self.i >= self.toks.len()
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<(), ArithError> {
        let pos = self.pos();
        match self.bump() {
            Some(t) if t.tok == want => Ok(()),
            _ => Err(syntax(pos, format!("expected {what}"))),
        }
    }

    /// `['+'|'-'] mono (('+'|'-') mono)*`
    pub fn sum(&mut self) -> Result<Vec<Monomial>, ArithError> {
        let mut out = Vec::new();
        let mut negate = false;
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                negate = true;
            }
            Some(Tok::Plus) => {
                self.bump();
            }
            _ => {}
        }
        loop {
            let mut m = self.monomial()?;
            if negate {
                m.coef = -m.coef;
            }
            out.push(m);
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    negate = false;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    negate = true;
                }
                _ => return Ok(out),
            }
        }
    }

    fn monomial(&mut self) -> Result<Monomial, ArithError> {
        let pos = self.pos();
        let mut m = Monomial {
            coef: Rational::one(),
            powers: BTreeMap::new(),
            applied: None,
            pos,
        };
        self.factor(&mut m, false)?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    self.factor(&mut m, false)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    self.factor(&mut m, true)?;
                }
                _ => break,
            }
        }
        m.powers.retain(|_, e| *e != 0);
        Ok(m)
    }

    fn factor(&mut self, m: &mut Monomial, divide: bool) -> Result<(), ArithError> {
        let pos = self.pos();
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Num(n)) => {
                let v = Rational::from_integer(n.clone());
                if divide {
                    m.coef = m
                        .coef
                        .checked_div(&v)
                        .ok_or_else(|| syntax(pos, "division by zero"))?;
                } else {
                    m.coef = &m.coef * &v;
                }
                Ok(())
            }
            Some(Tok::Var(v)) => {
                let mut e = 1i32;
                if let Some(Tok::Caret) = self.peek() {
                    self.bump();
                    e = self.exponent()?;
                }
                let e = if divide { -e } else { e };
                *m.powers.entry(*v).or_insert(0) += e;
                Ok(())
            }
            Some(Tok::LParen) => {
                if divide || m.applied.is_some() {
                    return Err(syntax(pos, "unsupported parenthesized factor"));
                }
                let inner = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                self.expect(Tok::LParen, "`(` opening the argument of an applied polynomial")?;
                let arg = self.sum()?;
                self.expect(Tok::RParen, "`)`")?;
                m.applied = Some(Applied { inner, arg });
                Ok(())
            }
            _ => Err(syntax(pos, "expected a number, a variable or `(`")),
        }
    }

    fn exponent(&mut self) -> Result<i32, ArithError> {
        let pos = self.pos();
        let neg = if let Some(Tok::Minus) = self.peek() {
            self.bump();
            true
        } else {
            false
        };
        match self.bump().map(|t| &t.tok) {
            Some(Tok::Num(n)) => {
                let e: i32 = i32::try_from(n.clone())
                    .map_err(|_| syntax(pos, "exponent out of range"))?;
                Ok(if neg { -e } else { e })
            }
            _ => Err(syntax(pos, "expected an integer exponent")),
        }
    }
}

/// Reads a whole input as a monomial sum, rejecting trailing tokens.
pub(crate) fn parse_sum(text: &str, offset: usize) -> Result<Vec<Monomial>, ArithError> {
    let toks = lex(text, offset)?;
    if toks.is_empty() {
        return Err(syntax(offset, "empty expression"));
    }
    let mut cur = Cursor::new(&toks, offset + text.len());
    let out = cur.sum()?;
    if !cur.at_end() {
        return Err(syntax(cur.pos(), "unexpected trailing input"));
    }
    Ok(out)
}
