//! Small recursive-descent parser for integer Laurent polynomial expressions
//! such as `(t*s+1-s)*(t*s+1-t)` or `t^2 - t + 1`.
//!
//! Grammar: `expr := term (('+'|'-') term)*`, `term := power ('*' power)*`,
//! `power := unary ('^' exponent)?`, `unary := '-' unary | atom`,
//! `atom := integer | variable | '(' expr ')'`. Negative exponents are only
//! accepted on monomials.

use num_bigint::BigInt;
use num_traits::Signed;

use super::{AlgebraError, LaurentPoly};

pub fn parse_laurent(text: &str, vars: &[&str]) -> Result<LaurentPoly, AlgebraError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, pos: 0, vars, text };
    let out = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, AlgebraError> {
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Tok::Int(s.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c == '\u{2212}' {
            // unicode minus sign
            out.push(Tok::Op('-'));
            i += 1;
        } else {
            return Err(AlgebraError::Parse(format!("unexpected character {c:?} in {text:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
    text: &'a str,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> AlgebraError {
        AlgebraError::Parse(format!("{what} at token {} in {:?}", self.pos, self.text))
    }

    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, op: char) -> bool {
        if self.peek() == Some(&Tok::Op(op)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut acc = self.power()?;
        while self.eat('*') {
            acc = &acc * &self.power()?;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<LaurentPoly, AlgebraError> {
        if self.eat('-') {
            return Ok(-self.power()?);
        }
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let e = self.exponent()?;
        if e >= 0 {
            Ok(base.pow(e as u32))
        } else if base.is_unit() {
            let (ex, c) = base.leading_term().unwrap();
            let ex = ex.iter().map(|x| x * e).collect();
            // (±1)^e = ±1 for odd e
            let c = if e % 2 == 0 { c.abs() } else { c.clone() };
            Ok(LaurentPoly::monomial(base.nvars(), c, ex))
        } else {
            Err(self.error("negative exponent on a non-monomial"))
        }
    }

    fn exponent(&mut self) -> Result<i32, AlgebraError> {
        let paren = self.eat('(');
        let neg = self.eat('-');
        let v = match self.peek() {
            Some(Tok::Int(n)) => {
                let n: i32 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                self.pos += 1;
                n
            }
            _ => return Err(self.error("expected integer exponent")),
        };
        if paren && !self.eat(')') {
            return Err(self.error("expected ')'"));
        }
        Ok(if neg { -v } else { v })
    }

    fn atom(&mut self) -> Result<LaurentPoly, AlgebraError> {
        let n = self.vars.len();
        match self.peek().cloned() {
            Some(Tok::Int(c)) => {
                self.pos += 1;
                Ok(LaurentPoly::constant(n, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| AlgebraError::Parse(format!("unknown variable {name:?} in {:?}", self.text)))?;
                Ok(LaurentPoly::var(n, i))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(e)
            }
            _ => Err(self.error("expected a term")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_knot_polynomials() {
        let p = parse_laurent("t^2 - t + 1", &["t"]).unwrap();
        assert_eq!(p.to_string(), "t^2-t+1");
        let q = parse_laurent("t^(-1) - 3 + t", &["t"]).unwrap();
        assert_eq!(q.normalize().to_string(), "t^2-3*t+1");
    }

    #[test]
    fn unicode_minus_and_nesting() {
        let p = parse_laurent("(t*s+1\u{2212}s)*(t*s+1-t)", &["s", "t"]).unwrap();
        assert_eq!(p.len(), 7);
        let q = parse_laurent("-(s-1)^2", &["s", "t"]).unwrap();
        assert_eq!(q.to_string(), "-s^2+2*s-1");
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_laurent("t +* 1", &["t"]).is_err());
        assert!(parse_laurent("u + 1", &["t"]).is_err());
        assert!(parse_laurent("(t+1)^(-1)", &["t"]).is_err());
        assert!(parse_laurent("(t+1", &["t"]).is_err());
        assert!(parse_laurent("t % 2", &["t"]).is_err());
    }
}
