//! Text syntax for maps and cyclotomic literals.
//!
//! Grammar (whitespace ignored, `*` optional between factors):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | decimal | 'X' | 'x' | 'z' integer | '(' expr ')'
//! ```
//!
//! `z12` denotes `exp(2 pi i / 12)`.

use num_bigint::BigInt;

use crate::cyclo::CycNum;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::rational::{parse_rational, Rational};
use crate::ratmap::RatMap;

const MAX_EXPONENT: i64 = 100_000;
const MAX_CONDUCTOR: u64 = 100_000;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    X,
    Zeta(u64),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' | '\r' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '/' => {
                out.push(Tok::Slash);
                i += 1
            }
            '^' => {
                out.push(Tok::Caret);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            'X' | 'x' => {
                out.push(Tok::X);
                i += 1
            }
            'z' => {
                let start = i + 1;
                let mut j = start;
                while j < chars.len() && chars[j].is_ascii_digit() {
                    j += 1;
                }
                if j == start {
                    return Err(Error::Parse(format!("expected conductor after 'z' at position {i}")));
                }
                let n: u64 = chars[start..j]
                    .iter()
                    .collect::<String>()
                    .parse()
                    .map_err(|_| Error::Parse("conductor too large".into()))?;
                if n == 0 || n > MAX_CONDUCTOR {
                    return Err(Error::Parse(format!("conductor {n} out of range")));
                }
                out.push(Tok::Zeta(n));
                i = j;
            }
            d if d.is_ascii_digit() || d == '.' => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                    i += 1;
                }
                let text: String = chars[start..i].iter().collect();
                out.push(Tok::Num(parse_rational(&text)?));
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} at position {i}"))),
        }
    }
    Ok(out)
}

/// A quotient of polynomials under construction.
#[derive(Clone, Debug)]
struct Frac {
    num: Poly,
    den: Poly,
}

impl Frac {
    fn constant(c: CycNum) -> Frac {
        Frac { num: Poly::constant(c), den: Poly::one() }
    }

    fn reduce(num: Poly, den: Poly) -> Result<Frac> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Frac { num, den: Poly::one() });
        }
        let g = num.gcd(&den);
        Ok(Frac { num: num.exact_div(&g).unwrap(), den: den.exact_div(&g).unwrap() })
    }

    fn add(&self, o: &Frac) -> Result<Frac> {
        if self.den == o.den {
            return Frac::reduce(self.num.add(&o.num), self.den.clone());
        }
        Frac::reduce(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    fn neg(&self) -> Frac {
        Frac { num: self.num.neg(), den: self.den.clone() }
    }

    fn mul(&self, o: &Frac) -> Result<Frac> {
        Frac::reduce(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    fn inv(&self) -> Result<Frac> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Frac { num: self.den.clone(), den: self.num.clone() })
    }

    fn pow(&self, k: i64) -> Result<Frac> {
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let k = k.unsigned_abs();
        Ok(Frac { num: base.num.pow_u(k), den: base.den.pow_u(k) })
    }
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg())?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?)?;
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?.inv()?)?;
                }
                Some(Tok::Num(_) | Tok::X | Tok::Zeta(_) | Tok::LParen) => {
                    acc = acc.mul(&self.power()?)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let k = match self.next() {
            Some(Tok::Num(q)) if q.is_integer() => q.to_integer(),
            _ => return Err(Error::Parse("exponent must be an integer".into())),
        };
        let k: i64 = num_traits::ToPrimitive::to_i64(&k)
            .filter(|k| *k <= MAX_EXPONENT)
            .ok_or_else(|| Error::Parse(format!("exponent {k} too large")))?;
        base.pow(if neg { -k } else { k })
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.next() {
            Some(Tok::Num(q)) => Ok(Frac::constant(CycNum::from_rational(&q))),
            Some(Tok::X) => Ok(Frac { num: Poly::x(), den: Poly::one() }),
            Some(Tok::Zeta(n)) => Ok(Frac::constant(CycNum::zeta(n))),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(e),
                    _ => Err(Error::Parse("missing ')'".into())),
                }
            }
            Some(t) => Err(Error::Parse(format!("unexpected token {t:?}"))),
            None => Err(Error::Parse("unexpected end of input".into())),
        }
    }
}

fn parse_frac(s: &str) -> Result<Frac> {
    let mut p = Parser { toks: lex(s)?, pos: 0 };
    if p.toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(f)
}

/// Parses a rational map such as `"(X^3 + 2)/(X + 1)"`.
pub fn parse_map(s: &str) -> Result<RatMap> {
    let f = parse_frac(s)?;
    RatMap::new(f.num, f.den)
}

/// Parses a polynomial; rejects genuine quotients.
pub fn parse_poly(s: &str) -> Result<Poly> {
    let h = parse_map(s)?;
    if !h.is_polynomial() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(h.num().clone())
}

/// Parses a cyclotomic literal such as `"1/2 + 3*z12^2"`.
pub fn parse_cyc(s: &str) -> Result<CycNum> {
    let f = parse_frac(s)?;
    if f.num.degree() > 0 || f.den.degree() > 0 {
        return Err(Error::Parse(format!("{s:?} depends on X")));
    }
    f.num.lc().div(&f.den.lc())
}

/// Parses a rational number literal or expression without `X` or `z`.
pub fn parse_rational_expr(s: &str) -> Result<Rational> {
    parse_cyc(s)?.to_rational().ok_or_else(|| Error::Parse(format!("{s:?} is not rational")))
}

/// Integer helper used by callers that need a plain integer.
pub fn parse_int(s: &str) -> Result<BigInt> {
    let q = parse_rational_expr(s)?;
    if !q.is_integer() {
        return Err(Error::Parse(format!("{s:?} is not an integer")));
    }
    Ok(q.to_integer())
}
