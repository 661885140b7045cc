//! Text syntax for difference polynomials.
//!
//! ```text
//! poly   := [sign] term (('+'|'-') term)*
//! term   := coeff | [coeff '*'] factor ('*' factor)*
//! factor := var ['^' nat]
//! var    := ['s' nat '('] base [')']
//! base   := 'x' nat '_' nat | 'y' nat | 'idet' | 'iy' nat
//! coeff  := int ['/' posint]
//! ```
//!
//! Whitespace is insignificant and `s0(b)` is the same as `b`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::poly::{Monomial, Polynomial, Rational, VarId};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn fail<T>(&mut self, expected: &[&str]) -> Result<T> {
        self.skip_ws();
        Err(Error::Parse {
            position: self.pos,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            let s = format!("'{}'", c as char);
            self.fail(&[s.as_str()])
        }
    }

    /// Digits directly at the cursor (no whitespace skipping inside names).
    fn digits(&mut self) -> Option<&'a str> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        (self.pos > start).then(|| std::str::from_utf8(&self.src[start..self.pos]).unwrap())
    }

    fn index(&mut self) -> Result<u16> {
        let start = self.pos;
        match self.digits().map(str::parse::<u16>) {
            Some(Ok(n)) => Ok(n),
            _ => {
                self.pos = start;
                self.fail(&["index"])
            }
        }
    }

    fn nat(&mut self) -> Result<u32> {
        self.skip_ws();
        let start = self.pos;
        match self.digits().map(str::parse::<u32>) {
            Some(Ok(n)) => Ok(n),
            _ => {
                self.pos = start;
                self.fail(&["natural number"])
            }
        }
    }

    fn coeff(&mut self) -> Result<Rational> {
        self.skip_ws();
        let num: BigInt = match self.digits() {
            Some(d) => d.parse().unwrap(),
            None => return self.fail(&["integer"]),
        };
        if self.eat(b'/') {
            self.skip_ws();
            let den: BigInt = match self.digits() {
                Some(d) => d.parse().unwrap(),
                None => return self.fail(&["positive integer"]),
            };
            if den.is_zero() {
                self.pos -= 1;
                return self.fail(&["positive integer"]);
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(num))
        }
    }

    fn base(&mut self, shift: u32) -> Result<VarId> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        if rest.starts_with(b"idet") {
            self.pos += 4;
            return Ok(VarId::idet(shift));
        }
        if rest.starts_with(b"iy") {
            self.pos += 2;
            return Ok(VarId::iy(self.index()?, shift));
        }
        match rest.first() {
            Some(b'y') => {
                self.pos += 1;
                Ok(VarId::y(self.index()?, shift))
            }
            Some(b'x') => {
                self.pos += 1;
                let j = self.index()?;
                if self.src.get(self.pos) != Some(&b'_') {
                    return self.fail(&["'_'"]);
                }
                self.pos += 1;
                let k = self.index()?;
                Ok(VarId::x(j, k, shift))
            }
            _ => self.fail(&["'x'", "'y'", "'idet'", "'iy'"]),
        }
    }

    fn var(&mut self) -> Result<VarId> {
        if self.peek() == Some(b's') {
            self.pos += 1;
            let shift = self.nat()?;
            self.expect(b'(')?;
            let v = self.base(shift)?;
            self.expect(b')')?;
            Ok(v)
        } else {
            self.base(0)
        }
    }

    fn factor(&mut self) -> Result<Monomial> {
        let v = self.var()?;
        let e = if self.eat(b'^') { self.nat()? } else { 1 };
        Ok(Monomial::from_pairs([(v, e)]))
    }

    fn starts_factor(&mut self) -> bool {
        matches!(self.peek(), Some(b's' | b'x' | b'y' | b'i'))
    }

    fn term(&mut self) -> Result<(Monomial, Rational)> {
        let mut c = Rational::one();
        let mut m = Monomial::one();
        if self.peek().is_some_and(|b| b.is_ascii_digit()) {
            c = self.coeff()?;
            if !self.eat(b'*') {
                return Ok((m, c));
            }
        } else if !self.starts_factor() {
            return self.fail(&["coefficient", "variable"]);
        }
        m = m.mul(&self.factor()?);
        while self.eat(b'*') {
            m = m.mul(&self.factor()?);
        }
        Ok((m, c))
    }

    fn poly(&mut self) -> Result<Polynomial> {
        let mut p = Polynomial::zero();
        let mut negative = if self.eat(b'-') {
            true
        } else {
            self.eat(b'+');
            false
        };
        loop {
            let (m, c) = self.term()?;
            p.add_term(m, if negative { -c } else { c });
            if self.eat(b'+') {
                negative = false;
            } else if self.eat(b'-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.peek().is_some() {
            return self.fail(&["'+'", "'-'", "'*'", "end of input"]);
        }
        Ok(p)
    }
}

/// Parses polynomial text. Positions in errors are byte offsets.
pub fn parse_poly(text: &str) -> Result<Polynomial> {
    Parser {
        src: text.as_bytes(),
        pos: 0,
    }
    .poly()
}

fn print_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: terms in descending grevlex order, unit coefficients
/// omitted, the constant term last.
pub fn print_poly(p: &Polynomial) -> String {
    let terms = p.sorted_terms();
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in terms.into_iter().enumerate() {
        let negative = c.is_negative();
        let abs = c.abs();
        if k == 0 {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if m.is_one() {
            out.push_str(&print_rational(&abs));
        } else if abs.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&print_rational(&abs));
            out.push('*');
            out.push_str(&m.to_string());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat_frac;

    #[test]
    fn parses_corpus_generators() {
        let p = parse_poly("y1*s1(y1)^2 - 1").unwrap();
        let y0 = Polynomial::var(VarId::y(1, 0));
        let y1 = Polynomial::var(VarId::y(1, 1));
        assert_eq!(p, &(&y0 * &y1.pow(2)) - &Polynomial::int(1));
        let q = parse_poly("s2(y1) + y1").unwrap();
        assert_eq!(q, &Polynomial::var(VarId::y(1, 2)) + &y0);
        let u = parse_poly("x1_1*s1(x1_1) + x1_2*s1(x1_2) - 1").unwrap();
        assert_eq!(u.len(), 3);
    }

    #[test]
    fn shift_zero_is_plain() {
        assert_eq!(parse_poly("s0(y2)").unwrap(), parse_poly("y2").unwrap());
        assert_eq!(
            parse_poly(" s 1 ( iy1 ) ").unwrap(),
            Polynomial::var(VarId::iy(1, 1))
        );
    }

    #[test]
    fn fractions_and_signs() {
        let p = parse_poly("-1/2*y1 + 3").unwrap();
        assert_eq!(
            p.coefficient(&Monomial::var(VarId::y(1, 0))),
            rat_frac(-1, 2)
        );
        assert_eq!(print_poly(&p), "-1/2*y1 + 3");
    }

    #[test]
    fn prints_canonically() {
        let p = parse_poly("1 - y1 + s1(y1)^2*y1").unwrap();
        assert_eq!(print_poly(&p), "s1(y1)^2*y1 - y1 + 1");
        assert_eq!(print_poly(&Polynomial::zero()), "0");
        assert_eq!(
            print_poly(&parse_poly("2*x1_2*idet").unwrap()),
            "2*idet*x1_2"
        );
    }

    #[test]
    fn errors_carry_position() {
        match parse_poly("y1 + * y2") {
            Err(Error::Parse { position, expected }) => {
                assert_eq!(position, 5);
                assert!(expected.contains(&"variable".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_poly("y"),
            Err(Error::Parse { position: 1, .. })
        ));
        assert!(matches!(
            parse_poly("s1(y1"),
            Err(Error::Parse { position: 5, .. })
        ));
        assert!(matches!(
            parse_poly("y1 y2"),
            Err(Error::Parse { position: 3, .. })
        ));
        assert!(matches!(parse_poly("1/0"), Err(Error::Parse { .. })));
    }
}
