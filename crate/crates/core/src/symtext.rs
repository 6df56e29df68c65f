//! Parser for the text form of [`SymRat`].
//!
//! Grammar (whitespace ignored between tokens):
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' '-'? digits)?
//! atom  := digits | var | '(' expr ')'
//! var   := 'x0' | 'xinf' | 'x' digits
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::symfield::{SymError, SymRat};

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 64;
const MAX_INPUT: usize = 1 << 14;
/// Powers of non-monomial bases are capped lower to bound expansion cost.
const MAX_COMPOSITE_EXPONENT: u32 = 8;
/// Operands whose expansion could exceed this many terms are rejected.
const MAX_EXPANSION: u64 = 500;
const MAX_DEGREE: u32 = 1 << 20;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    n: usize,
    depth: usize,
}

pub fn parse(text: &str, n: usize) -> Result<SymRat, SymError> {
    if n < 2 {
        return Err(SymError::Parse { pos: 0, msg: "need at least two punctures".into() });
    }
    if text.len() > MAX_INPUT {
        return Err(SymError::Parse { pos: 0, msg: "input too long".into() });
    }
    let mut p = Parser { s: text.as_bytes(), pos: 0, n, depth: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn guard(&self, v: &SymRat) -> Result<(), SymError> {
        if v.expansion_bound() > MAX_EXPANSION || v.max_abs_exponent() > MAX_DEGREE {
            Err(self.err("expression too large"))
        } else {
            Ok(())
        }
    }

    fn enter(&mut self) -> Result<(), SymError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(self.err("nesting too deep"))
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<SymRat, SymError> {
        self.enter()?;
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let rhs = self.term()?;
            self.guard(&acc)?;
            self.guard(&rhs)?;
            acc = if c == b'+' { acc + rhs } else { acc - rhs };
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<SymRat, SymError> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let rhs = self.unary()?;
            self.guard(&acc)?;
            self.guard(&rhs)?;
            acc = if c == b'*' {
                acc * rhs
            } else {
                acc.div(&rhs).map_err(|_| self.err("division by zero"))?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SymRat, SymError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            self.enter()?;
            let v = self.unary()?;
            self.depth -= 1;
            return Ok(-v);
        }
        self.power()
    }

    fn digits(&mut self) -> Result<&'a str, SymError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        Ok(std::str::from_utf8(&self.s[start..self.pos]).expect("ascii digits"))
    }

    fn power(&mut self) -> Result<SymRat, SymError> {
        let (base, is_monomial) = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        self.skip_ws();
        let d = self.digits()?;
        let e: u32 = d.parse().map_err(|_| self.err("exponent too large"))?;
        let cap = if is_monomial { MAX_EXPONENT } else { MAX_COMPOSITE_EXPONENT };
        if e > cap {
            return Err(self.err("exponent too large"));
        }
        if base.max_abs_exponent().saturating_mul(e.max(1)) > MAX_DEGREE
            || base.expansion_bound().saturating_pow(e) > MAX_EXPANSION
        {
            return Err(self.err("expression too large"));
        }
        let e = if neg { -(e as i32) } else { e as i32 };
        base.pow(e).map_err(|_| self.err("division by zero"))
    }

    fn atom(&mut self) -> Result<(SymRat, bool), SymError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok((v, false))
            }
            Some(b'x') => {
                self.pos += 1;
                if self.s[self.pos..].starts_with(b"inf") {
                    self.pos += 3;
                    return Ok((SymRat::xinf(self.n), true));
                }
                let d = self.digits()?;
                let j: usize = d.parse().map_err(|_| self.err("variable index out of range"))?;
                if j == 0 {
                    Ok((SymRat::x0(self.n), true))
                } else if j <= self.n {
                    Ok((SymRat::x(self.n, j), true))
                } else {
                    Err(self.err("variable index out of range"))
                }
            }
            Some(c) if c.is_ascii_digit() => {
                let d = self.digits()?;
                let v: BigInt = d.parse().map_err(|_| self.err("bad integer"))?;
                Ok((SymRat::from_rational(self.n, BigRational::from_integer(v)), true))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_expressions() {
        let n = 3;
        let a = parse("(x1 - 1) / (x1^2 - 1)", n).unwrap();
        assert_eq!(a, parse("1/(x1 + 1)", n).unwrap());
        assert_eq!(parse("x3", n).unwrap(), parse("x1^-1 * x2^-1", n).unwrap());
        assert_eq!(parse("3/2*xinf*x0^2", n).unwrap().to_string(), "3/2*x0^2 * xinf");
        assert_eq!(parse("-x1 + x1", n).unwrap(), SymRat::zero(n));
    }

    #[test]
    fn rejects_bad_text() {
        let n = 3;
        for bad in ["", "x4", "((x1^64)^8)^8^8", "1/0", "(x1", "x1 +", "x1^99", "(1+x1)^20", "x", "1 2", "y"] {
            assert!(parse(bad, n).is_err(), "{bad}");
        }
        let deep = "(".repeat(200) + "1" + &")".repeat(200);
        assert!(parse(&deep, n).is_err());
    }
}
