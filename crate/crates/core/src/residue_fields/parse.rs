//! Text grammar for residue-field elements.
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" | "/") unary)*
//! unary  := "-" unary | power
//! power  := atom ("^" "-"? integer)?
//! atom   := integer | "u" | "U" | "t" | "z" | "(" expr ")"
//! ```
//!
//! Integers are reduced mod p; `z` is the generator of `F_{p^2}` and is
//! rejected over prime fields. Whitespace is ignored between tokens.

use super::gf::FiniteField;
use super::poly::Var;
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use alloc::string::ToString;

pub fn parse_ratfunc(src: &str, ff: FiniteField) -> Result<RatFunc> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, ff };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ff: FiniteField,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
    }

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

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = acc.div(&d).map_err(|_| Error::Parse { pos: at, msg: "division by zero".to_string() })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let negative = self.eat(b'-');
        self.skip_ws();
        let at = self.pos;
        let e = self.integer()?.ok_or_else(|| self.error("expected exponent"))?;
        let e = i64::try_from(e).map_err(|_| self.error("exponent too large"))?;
        let e = if negative { -e } else { e };
        base.pow(e).map_err(|_| Error::Parse { pos: at, msg: "negative power of zero".to_string() })
    }

    fn integer(&mut self) -> Result<Option<u64>> {
        let start = self.pos;
        let mut n: u64 = 0;
        while let Some(d) = self.src.get(self.pos).filter(|c| c.is_ascii_digit()) {
            n = n
                .checked_mul(10)
                .and_then(|n| n.checked_add((d - b'0') as u64))
                .ok_or_else(|| self.error("integer literal too large"))?;
            self.pos += 1;
        }
        Ok((self.pos > start).then_some(n))
    }

    fn atom(&mut self) -> Result<RatFunc> {
        let ff = self.ff;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?.expect("digit present");
                let p = ff.characteristic() as u64;
                Ok(RatFunc::from_int(ff, (n % p) as i64))
            }
            Some(b'z') => {
                let g = ff.generator().ok_or_else(|| self.error("`z` requires a field of order p^2"))?;
                self.pos += 1;
                Ok(RatFunc::constant(ff, g))
            }
            Some(c) => {
                let name = [c];
                let name = core::str::from_utf8(&name).unwrap_or("");
                match Var::from_name(name) {
                    Some(v) => {
                        self.pos += 1;
                        Ok(RatFunc::var(ff, v))
                    }
                    None => Err(self.error("unexpected character")),
                }
            }
            None => Err(self.error("unexpected end of input")),
        }
    }
}
