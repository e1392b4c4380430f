//! Expression parser shared by rational functions and tower elements.
//!
//! Grammar:
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' '-'? integer)?
//! atom   := integer | 'a'? '#' integer | identifier | '(' expr ')'
//! ```
//! Integers are read modulo the characteristic, `#e` is the field element
//! with integer encoding `e`.

use super::{Poly, RatFunc};
use crate::error::{Error, Result};
use crate::galois::Field;

/// Target algebra of the parser.
pub trait ExprAlgebra {
    type Value: Clone;

    fn field(&self) -> &Field;
    /// Constant with the given field encoding.
    fn constant(&self, a: u64) -> Self::Value;
    /// Resolves an identifier, or `None` if unknown.
    fn variable(&self, name: &str) -> Option<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: &Self::Value, e: i64) -> Result<Self::Value>;
}

struct RatAlgebra(Field);

impl ExprAlgebra for RatAlgebra {
    type Value = RatFunc;

    fn field(&self) -> &Field {
        &self.0
    }
    fn constant(&self, a: u64) -> RatFunc {
        RatFunc::constant(&self.0, a)
    }
    fn variable(&self, name: &str) -> Option<RatFunc> {
        (name == "x").then(|| RatFunc::x(&self.0))
    }
    fn add(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.add(b)
    }
    fn sub(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.sub(b)
    }
    fn mul(&self, a: &RatFunc, b: &RatFunc) -> RatFunc {
        a.mul(b)
    }
    fn div(&self, a: &RatFunc, b: &RatFunc) -> Result<RatFunc> {
        a.div(b)
    }
    fn pow(&self, a: &RatFunc, e: i64) -> Result<RatFunc> {
        a.pow(e)
    }
}

/// Parses a rational function in `x`.
pub fn parse_expr(text: &str, field: &Field) -> Result<RatFunc> {
    parse_with(text, &RatAlgebra(field.clone()))
}

/// Parses a polynomial in `x`; a nontrivial denominator is an error.
pub fn parse_poly(text: &str, field: &Field) -> Result<Poly> {
    let r = parse_expr(text, field)?;
    if !r.is_poly() {
        return Err(Error::Parse { pos: 0, msg: format!("'{text}' is not a polynomial") });
    }
    Ok(r.num().clone())
}

/// Parses `text` into any [`ExprAlgebra`].
pub fn parse_with<A: ExprAlgebra>(text: &str, alg: &A) -> Result<A::Value> {
    let mut p = Parser { s: text.as_bytes(), pos: 0, alg };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

struct Parser<'a, A> {
    s: &'a [u8],
    pos: usize,
    alg: &'a A,
}

impl<A: ExprAlgebra> Parser<'_, A> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<A::Value> {
        let mut v = self.term()?;
        loop {
            if self.eat(b'+') {
                let r = self.term()?;
                v = self.alg.add(&v, &r);
            } else if self.eat(b'-') {
                let r = self.term()?;
                v = self.alg.sub(&v, &r);
            } else {
                return Ok(v);
            }
        }
    }

    fn term(&mut self) -> Result<A::Value> {
        let mut v = self.unary()?;
        loop {
            if self.eat(b'*') {
                let r = self.unary()?;
                v = self.alg.mul(&v, &r);
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let r = self.unary()?;
                v = self.alg.div(&v, &r).map_err(|e| match e {
                    Error::DivisionByZero => Error::Parse { pos: at, msg: "division by zero".into() },
                    other => other,
                })?;
            } else {
                return Ok(v);
            }
        }
    }

    fn unary(&mut self) -> Result<A::Value> {
        if self.eat(b'-') {
            let v = self.unary()?;
            let zero = self.alg.constant(0);
            return Ok(self.alg.sub(&zero, &v));
        }
        self.power()
    }

    fn power(&mut self) -> Result<A::Value> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let neg = self.eat(b'-');
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?;
        let e = i64::try_from(e).map_err(|_| Error::Parse { pos: at, msg: "exponent too large".into() })?;
        self.alg
            .pow(&base, if neg { -e } else { e })
            .map_err(|_| Error::Parse { pos: at, msg: "negative power of zero".into() })
    }

    fn integer(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .unwrap()
            .parse::<u64>()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<A::Value> {
        let field = self.alg.field();
        match self.peek() {
            None => Err(self.err("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(self.alg.constant(n % field.characteristic()))
            }
            Some(b'#') => self.literal(),
            Some(b'a') if self.s.get(self.pos + 1) == Some(&b'#') => {
                self.pos += 1;
                self.literal()
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.s.len()
                    && (self.s[self.pos].is_ascii_alphanumeric() || self.s[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                self.alg
                    .variable(name)
                    .ok_or(Error::Parse { pos: start, msg: format!("unknown variable '{name}'") })
            }
            Some(_) => Err(self.err("unexpected character")),
        }
    }

    fn literal(&mut self) -> Result<A::Value> {
        self.pos += 1;
        let at = self.pos;
        let e = self.integer()?;
        if !self.alg.field().contains(e) {
            return Err(Error::Parse { pos: at, msg: format!("element encoding {e} out of range") });
        }
        Ok(self.alg.constant(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_examples() {
        let f4 = Field::new(2, 2, None).unwrap();
        let r = parse_expr("x^2/(x+1)", &f4).unwrap();
        assert_eq!(r.num(), &Poly::new(&f4, vec![0, 0, 1]));
        assert_eq!(r.den(), &Poly::new(&f4, vec![1, 1]));

        let f64 = Field::new(2, 6, None).unwrap();
        let r = parse_expr("1 + x^3/(x-1)^3", &f64).unwrap();
        // x^3 + (x+1)^3 = x^2 + x + 1 in characteristic 2
        assert_eq!(r.num(), &Poly::new(&f64, vec![1, 1, 1]));
        assert_eq!(r.den(), &Poly::new(&f64, vec![1, 1, 1, 1]));

        let f7 = Field::prime(7).unwrap();
        let r = parse_expr("(x-#2)*(x-#4)", &f7).unwrap();
        assert_eq!(r.num(), &Poly::new(&f7, vec![1, 1, 1]));
        assert_eq!(parse_expr("-3*x^-1 + a#1", &f7).unwrap(), parse_expr("(x-3)/x", &f7).unwrap());
    }

    #[test]
    fn reports_positions() {
        let f = Field::prime(5).unwrap();
        assert_eq!(parse_expr("x + ", &f).unwrap_err(), Error::Parse { pos: 4, msg: "unexpected end of input".into() });
        assert!(matches!(parse_expr("x/(x-x)", &f), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_expr("x y", &f), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_expr("z", &f), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(parse_expr("#7", &f), Err(Error::Parse { pos: 1, .. })));
        assert!(parse_poly("1/x", &f).is_err());
    }
}
