//! Text form of polynomials: `z^3 - 3/4*z + 1/2*i`, `(z - i)^3`, `2z(z^2+1)`.
//!
//! Grammar (implicit multiplication between adjacent factors):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/')? unary)*
//! unary   := ('+' | '-') unary | power
//! power   := primary ('^' integer)?
//! primary := number | 'z' | 'x' | 'i' | '(' expr ')'
//! ```
//!
//! Decimal literals are read as exact rationals. Division is by constants only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::poly::{ApproxPoly, ExactPoly, Poly};
use crate::scalar::{Field, GaussRat};

/// Largest exponent accepted after `^`.
const MAX_EXPONENT: u32 = 10_000;

pub fn parse<F: Field>(text: &str) -> Result<Poly<F>> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

pub fn parse_exact(text: &str) -> Result<ExactPoly> {
    parse(text)
}

pub fn parse_approx(text: &str) -> Result<ApproxPoly> {
    parse(text)
}

/// A scalar literal such as `3/4`, `-i`, `(1/2 - 2*i)`.
pub fn parse_scalar<F: Field>(text: &str) -> Result<F> {
    let p: Poly<F> = parse(text)?;
    if p.degree().unwrap_or(0) > 0 {
        return Err(Error::Parse { pos: 0, msg: "expected a constant".into() });
    }
    Ok(p.coeff(0))
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.into() }
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

    fn expr<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term<F: Field>(&mut self) -> Result<Poly<F>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d: Poly<F> = self.unary()?;
                    if d.degree() != Some(0) {
                        return Err(Error::Parse { pos: at, msg: "division by a non-constant or zero".into() });
                    }
                    acc = acc.scale(&(F::one() / d.coeff(0)));
                }
                Some(c) if c.is_ascii_digit() || c == b'.' || c == b'(' || c == b'z' || c == b'x' || c == b'i' => {
                    acc = &acc * &self.power()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary<F: Field>(&mut self) -> Result<Poly<F>> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-&self.unary::<F>()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power<F: Field>(&mut self) -> Result<Poly<F>> {
        let base = self.primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
            let e: u32 = digits.parse().map_err(|_| Error::Parse { pos: start, msg: "expected a nonnegative integer exponent".into() })?;
            if e > MAX_EXPONENT {
                return Err(Error::Parse { pos: start, msg: format!("exponent above {MAX_EXPONENT}") });
            }
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn primary<F: Field>(&mut self) -> Result<Poly<F>> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'z') | Some(b'x') => {
                self.pos += 1;
                Ok(Poly::z())
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(Poly::constant(F::imag_unit()))
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                let r = self.number()?;
                if F::EXACT {
                    Ok(Poly::constant(F::from_gauss(&GaussRat::real(r))))
                } else {
                    // correctly rounded, so printed doubles re-parse bit for bit
                    let text = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                    let v: f64 = text.parse().map_err(|_| Error::Parse { pos: start, msg: "malformed number".into() })?;
                    Ok(Poly::constant(F::from_complex(num_complex::Complex64::new(v, 0.0))))
                }
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    /// `digits[.digits][(e|E)[+-]digits]`, read exactly.
    fn number(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let mut mantissa = String::new();
        let mut frac_digits = 0i64;
        let mut seen_dot = false;
        while let Some(&c) = self.s.get(self.pos) {
            if c.is_ascii_digit() {
                mantissa.push(c as char);
                if seen_dot {
                    frac_digits += 1;
                }
            } else if c == b'.' && !seen_dot {
                seen_dot = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if mantissa.is_empty() {
            return Err(Error::Parse { pos: start, msg: "malformed number".into() });
        }
        let mut exp = 0i64;
        if matches!(self.s.get(self.pos), Some(b'e') | Some(b'E')) {
            let save = self.pos;
            self.pos += 1;
            let mut sign = 1;
            match self.s.get(self.pos) {
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                Some(b'+') => self.pos += 1,
                _ => {}
            }
            let ds = self.pos;
            while self.s.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            if ds == self.pos {
                self.pos = save;
            } else {
                let v: i64 = std::str::from_utf8(&self.s[ds..self.pos])
                    .unwrap()
                    .parse()
                    .map_err(|_| Error::Parse { pos: ds, msg: "exponent too large".into() })?;
                if v > 400 {
                    return Err(Error::Parse { pos: ds, msg: "exponent too large".into() });
                }
                exp = sign * v;
            }
        }
        let m: BigInt = mantissa.parse().expect("digits only");
        let shift = exp - frac_digits;
        let ten = BigInt::from(10);
        let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
        let r = if shift >= 0 {
            BigRational::from_integer(m * scale)
        } else {
            BigRational::new(m, scale)
        };
        debug_assert!(!r.denom().is_zero() && r.denom() >= &BigInt::one());
        Ok(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::chebyshev;

    #[test]
    fn basic_forms() {
        let p = parse_exact("z^3 - 3/4*z + 1/2*i").unwrap();
        assert_eq!(p.coeff(3), GaussRat::one());
        assert_eq!(p.coeff(1), GaussRat::from_ratio(-3, 4));
        assert_eq!(p.coeff(0), GaussRat::new(BigRational::zero(), BigRational::new(1.into(), 2.into())));
        assert_eq!(parse_exact("4z^3-3z").unwrap(), chebyshev(3));
        assert_eq!(parse_exact("z*(z^2+1)").unwrap(), parse_exact("z^3 + z").unwrap());
        assert_eq!(parse_exact("z(z^2+1)").unwrap(), parse_exact("z^3 + z").unwrap());
        assert_eq!(parse_exact("-z^2").unwrap(), Poly::from_i64s(&[0, 0, -1]));
        assert_eq!(parse_exact("0.25 z").unwrap(), parse_exact("z/4").unwrap());
        assert_eq!(parse_exact("1e-2").unwrap(), parse_exact("1/100").unwrap());
    }

    #[test]
    fn errors_carry_position() {
        assert!(matches!(parse_exact("z^"), Err(Error::Parse { pos: 2, .. })));
        assert!(parse_exact("z/z").is_err());
        assert!(parse_exact("(z+1").is_err());
        assert!(parse_exact("z + y").is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["z^3 - 3/4*z + 1/2*i", "(1/2 - 2*i)*z^2 - i*z + 7", "-z^5 + 1", "0"] {
            let p = parse_exact(s).unwrap();
            assert_eq!(parse_exact(&p.to_string()).unwrap(), p, "{s}");
        }
        let a = parse_approx("(0.1 + 0.2*i)*z^2 - 1e-20").unwrap();
        let b = parse_approx(&a.to_string()).unwrap();
        assert_eq!(a, b);
    }
}
