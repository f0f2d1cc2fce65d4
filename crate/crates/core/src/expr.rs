//! Parsing of field elements, polynomials, rational functions and places.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? integer)?
//! atom  := integer | 'T' | 'w' | '(' expr ')'
//! ```

use crate::error::{Error, Result};
use crate::finite_field::{FieldElement, FiniteField};
use crate::poly::Polynomial;
use crate::rational::{Place, RationalFunction};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a FiniteField,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, "integer out of range"))
    }

    fn expr(&mut self) -> Result<RationalFunction> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RationalFunction> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.peek() == Some(b'/') {
                let at = self.pos;
                self.pos += 1;
                let rhs = self.unary()?;
                acc = acc
                    .div(&rhs)
                    .map_err(|_| Error::parse(at, "division by zero"))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RationalFunction> {
        if self.eat(b'-') {
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RationalFunction> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let negative = self.eat(b'-');
        let e = self.integer()? as i64;
        base.powi(if negative { -e } else { e })
            .map_err(|_| Error::parse(at, "negative power of zero"))
    }

    fn atom(&mut self) -> Result<RationalFunction> {
        let at = match self.peek() {
            None => return Err(Error::parse(self.pos, "unexpected end of input")),
            Some(_) => self.pos,
        };
        match self.src[at] {
            b'(' => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(Error::parse(self.pos, "expected ')'"));
                }
                Ok(inner)
            }
            b'T' => {
                self.pos += 1;
                Ok(RationalFunction::t(self.field))
            }
            b'w' => {
                self.pos += 1;
                if self.field.degree() == 1 {
                    return Err(Error::parse(at, "generator w is not available in a prime field"));
                }
                Ok(RationalFunction::constant(self.field.generator()))
            }
            c if c.is_ascii_digit() => {
                let n = self.integer()?;
                let p = self.field.characteristic() as u64;
                Ok(RationalFunction::constant(self.field.from_u32((n % p) as u32)))
            }
            c => Err(Error::parse(at, format!("unexpected character '{}'", c as char))),
        }
    }
}

/// Parses a rational function such as `(T+1)/T^3` or `1/(T^2+T+1)`.
pub fn parse_rational(field: &FiniteField, s: &str) -> Result<RationalFunction> {
    let mut parser = Parser {
        src: s.as_bytes(),
        pos: 0,
        field,
    };
    let value = parser.expr()?;
    if let Some(c) = parser.peek() {
        return Err(Error::parse(parser.pos, format!("unexpected character '{}'", c as char)));
    }
    Ok(value)
}

pub fn parse_polynomial(field: &FiniteField, s: &str) -> Result<Polynomial> {
    let r = parse_rational(field, s)?;
    if !r.denominator().is_one() {
        return Err(Error::parse(0, "expected a polynomial"));
    }
    Ok(r.numerator().clone())
}

pub fn parse_element(field: &FiniteField, s: &str) -> Result<FieldElement> {
    let p = parse_polynomial(field, s)?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(Error::parse(0, "expected a field element"));
    }
    Ok(p.coeff(0))
}

/// `inf` or a monic irreducible polynomial.
pub fn parse_place(field: &FiniteField, s: &str) -> Result<Place> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") || t.eq_ignore_ascii_case("infinity") {
        return Ok(Place::infinity(field));
    }
    Place::finite(parse_polynomial(field, t)?)
}

/// Comma-separated list of rational functions.
pub fn parse_rational_list(field: &FiniteField, s: &str) -> Result<Vec<RationalFunction>> {
    let mut out = Vec::new();
    let mut offset = 0;
    for part in s.split(',') {
        if !part.trim().is_empty() {
            out.push(parse_rational(field, part).map_err(|e| match e {
                Error::Parse { pos, msg } => Error::Parse {
                    pos: pos + offset,
                    msg,
                },
                other => other,
            })?);
        }
        offset += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_field_syntax() {
        let f4 = FiniteField::new(2, 2).unwrap();
        let w = f4.generator();
        assert_eq!(parse_element(&f4, "w+1").unwrap(), &w + &f4.one());
        let p = parse_polynomial(&f4, "(w+1)*T^2+w").unwrap();
        assert_eq!(p.to_string(), "(w+1)*T^2+w");
    }

    #[test]
    fn parses_rational_functions() {
        let f2 = FiniteField::prime(2).unwrap();
        let a = parse_rational(&f2, "1/T^3").unwrap();
        let b = parse_rational(&f2, "T^-3").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.to_string(), "1/T^3");
        let c = parse_rational(&f2, "(T+1)/(T^2+T+1)").unwrap();
        assert_eq!(c.to_string(), "(T+1)/(T^2+T+1)");
    }

    #[test]
    fn reports_error_positions() {
        let f2 = FiniteField::prime(2).unwrap();
        assert!(matches!(parse_rational(&f2, "T+"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_rational(&f2, "T $"), Err(Error::Parse { pos: 2, .. })));
        assert!(matches!(parse_rational(&f2, "1/0"), Err(Error::Parse { pos: 1, .. })));
        assert!(matches!(parse_rational(&f2, "w"), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(
            parse_rational_list(&f2, "1/T,1/("),
            Err(Error::Parse { pos: 7, .. })
        ));
    }

    #[test]
    fn places() {
        let f2 = FiniteField::prime(2).unwrap();
        assert!(parse_place(&f2, "inf").unwrap().is_infinite());
        assert_eq!(parse_place(&f2, "T^2+T+1").unwrap().degree(), 2);
        assert!(matches!(parse_place(&f2, "T^2"), Err(Error::NotIrreducible(_))));
    }
}
