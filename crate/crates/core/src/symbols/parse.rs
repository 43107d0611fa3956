//! Plain-text symbol literals.
//!
//! ```text
//! trigpoly: c_{-n}, ..., c_0, ..., c_n     coefficients, odd count
//! hat(peak, width)                          tent on (-width, width)
//! step(a, b, h)                             h on [a, b)
//! const(c)
//! pl(b_1, ..., b_m; v_1, ..., v_m)          piecewise linear
//! steps(b_1, ..., b_m; v_1, ..., v_m)       piecewise constant
//! ```
//!
//! Numbers are arithmetic expressions over reals, `pi` and the imaginary
//! unit `i`, e.g. `-pi/2`, `0.5`, `1+2i`, `3i`.

use std::str::FromStr;

use super::Symbol;
use crate::error::{Error, Result};
use crate::sequence::FiniteSequence;
use crate::C64;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse(msg.into()))
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Lexer<'_> {
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

    fn expr(&mut self) -> Result<C64> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc += self.term()?;
            } else if self.eat(b'-') {
                acc -= self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<C64> {
        let mut acc = self.factor()?;
        loop {
            if self.eat(b'*') {
                acc *= self.factor()?;
            } else if self.eat(b'/') {
                acc /= self.factor()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<C64> {
        if self.eat(b'-') {
            return Ok(-self.factor()?);
        }
        if self.eat(b'+') {
            return self.factor();
        }
        let mut v = self.atom()?;
        // Implicit product: `2i`, `3pi`, `2pi i`.
        while let Some(u) = self.unit() {
            v *= u;
        }
        Ok(v)
    }

    fn unit(&mut self) -> Option<C64> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        if rest.starts_with(b"pi") && !rest.get(2).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 2;
            Some(C64::new(std::f64::consts::PI, 0.0))
        } else if rest.first() == Some(&b'i') && !rest.get(1).is_some_and(|c| c.is_ascii_alphanumeric()) {
            self.pos += 1;
            Some(C64::new(0.0, 1.0))
        } else {
            None
        }
    }

    fn atom(&mut self) -> Result<C64> {
        if self.eat(b'(') {
            let v = self.expr()?;
            if !self.eat(b')') {
                return err("missing ')'");
            }
            return Ok(v);
        }
        if let Some(u) = self.unit() {
            return Ok(u);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() {
            let c = self.s[self.pos];
            let exp_sign = (c == b'-' || c == b'+') && self.pos > start && matches!(self.s[self.pos - 1], b'e' | b'E');
            if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                self.pos += 1;
            } else {
                break;
            }
        }
        let text = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii slice");
        match text.parse::<f64>() {
            Ok(x) => Ok(C64::new(x, 0.0)),
            Err(_) => err(format!("expected a number at '{}'", String::from_utf8_lossy(&self.s[start..]))),
        }
    }
}

/// Parses one complex number expression.
pub(crate) fn parse_complex(text: &str) -> Result<C64> {
    let mut lx = Lexer { s: text.as_bytes(), pos: 0 };
    let v = lx.expr()?;
    if lx.peek().is_some() {
        return err(format!("trailing input in '{text}'"));
    }
    Ok(v)
}

pub(crate) fn parse_real(text: &str) -> Result<f64> {
    let v = parse_complex(text)?;
    if v.im != 0.0 {
        return err(format!("expected a real number, got '{text}'"));
    }
    Ok(v.re)
}

pub(crate) fn format_complex(v: C64) -> String {
    if v.im == 0.0 {
        format!("{}", v.re)
    } else if v.re == 0.0 {
        format!("{}i", v.im)
    } else if v.im < 0.0 {
        format!("{}-{}i", v.re, -v.im)
    } else {
        format!("{}+{}i", v.re, v.im)
    }
}

/// Splits on commas that are not nested in parentheses.
pub(crate) fn split_args(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(s[start..].trim());
    out
}

pub(crate) fn call<'a>(s: &'a str, name: &str) -> Option<&'a str> {
    let rest = s.strip_prefix(name)?.trim_start();
    rest.strip_prefix('(')?.strip_suffix(')')
}

fn real_args(body: &str, want: usize, name: &str) -> Result<Vec<f64>> {
    let args = split_args(body);
    if args.len() != want {
        return err(format!("{name} takes {want} arguments, got {}", args.len()));
    }
    args.into_iter().map(parse_real).collect()
}

fn breaks_and_values(body: &str) -> Result<(Vec<f64>, Vec<C64>)> {
    let (b, v) = body.split_once(';').ok_or_else(|| Error::Parse("expected 'breaks; values'".into()))?;
    let breaks = split_args(b).into_iter().map(parse_real).collect::<Result<Vec<_>>>()?;
    let values = split_args(v).into_iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
    Ok((breaks, values))
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some(body) = s.strip_prefix("trigpoly:") {
            let coeffs = split_args(body).into_iter().map(parse_complex).collect::<Result<Vec<_>>>()?;
            if coeffs.len() % 2 == 0 {
                return err("trigpoly needs an odd number of coefficients c_{-n}..c_n");
            }
            let n = (coeffs.len() / 2) as i64;
            return Ok(Symbol::trig_poly(FiniteSequence::new(-n, coeffs)));
        }
        if let Some(body) = call(s, "hat") {
            let a = real_args(body, 2, "hat")?;
            return Symbol::hat(a[0], a[1]).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Some(body) = call(s, "steps") {
            let (b, v) = breaks_and_values(body)?;
            return Symbol::step(b, v).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Some(body) = call(s, "step") {
            let a = real_args(body, 3, "step")?;
            return Symbol::indicator(a[0], a[1], a[2]).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Some(body) = call(s, "pl") {
            let (b, v) = breaks_and_values(body)?;
            return Symbol::piecewise_linear(b, v).map_err(|e| Error::Parse(e.to_string()));
        }
        if let Some(body) = call(s, "const") {
            return Ok(Symbol::constant(parse_complex(body)?));
        }
        err(format!("unrecognised symbol literal '{s}'"))
    }
}
