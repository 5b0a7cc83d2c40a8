//! Polynomial text parser: `3*x^2*y - 1/2*y^3 + (x+y)^2`.

use std::sync::Arc;

use num_bigint::BigInt;

use super::poly::{Poly, PolyRing};
use super::AlgebraError;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a Arc<PolyRing>,
}

pub fn parse_poly(ring: &Arc<PolyRing>, s: &str) -> Result<Poly, AlgebraError> {
    let mut p = Parser { src: s.as_bytes(), pos: 0, ring };
    let v = p.expr()?;
    p.ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> AlgebraError {
        AlgebraError::Parse { pos: self.pos, msg: msg.to_string() }
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg()
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, AlgebraError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let start = self.pos;
                    let d = self.integer()?;
                    let den = Poly::from_fraction_const(self.ring, &BigInt::from(1), &d)
                        .ok_or_else(|| AlgebraError::Parse { pos: start, msg: "division by zero".into() })?;
                    acc = acc.mul(&den);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<Poly, AlgebraError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.ws();
            let start = self.pos;
            let e = self.integer()?;
            let e: u32 = u32::try_from(e)
                .ok()
                .filter(|&e| e <= 4096)
                .ok_or_else(|| AlgebraError::Parse { pos: start, msg: "exponent out of range".into() })?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<BigInt, AlgebraError> {
        self.ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<Poly, AlgebraError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Poly::from_fraction_const(self.ring, &n, &BigInt::from(1)).unwrap())
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                match self.ring.var_index(name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(AlgebraError::Parse { pos: start, msg: format!("unknown variable '{name}'") }),
                }
            }
            _ => Err(self.err("expected a number, variable or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Field, MonoOrder};

    #[test]
    fn parse_and_print_round_trip() {
        let r = PolyRing::new(Field::Rational, vec![("x".into(), 1), ("y".into(), 1)], MonoOrder::GRevLex);
        let p = parse_poly(&r, "(x+y)^2 - 1/2*y^2").unwrap();
        assert_eq!(p.to_string(), "x^2 + 2*x*y + 1/2*y^2");
        assert_eq!(parse_poly(&r, &p.to_string()).unwrap(), p);
        assert!(matches!(parse_poly(&r, "x + z"), Err(AlgebraError::Parse { pos: 4, .. })));
    }

    #[test]
    fn prime_field_constants() {
        let r = PolyRing::new(Field::Prime(5), vec![("x".into(), 1)], MonoOrder::GRevLex);
        assert_eq!(parse_poly(&r, "7*x").unwrap().to_string(), "2*x");
        assert!(parse_poly(&r, "x/5").is_err());
    }
}
