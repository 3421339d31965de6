//! Text formats: polynomials in t over k (generator `g`), divisors such as
//! `3*(t) + 1*(t^2-2) + 2*inf@0`, and maps such as `(t^2)/(1)`.

use crate::exactfield::{KPoly, NumberField, Scalar, Q};

use super::divisor::{Divisor, Place};
use super::map::{CurveMap, RationalMap};
use super::GeomError;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    base: usize,
    k: &'a NumberField,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> GeomError {
        GeomError::Parse { pos: self.base + self.pos, msg: msg.to_string() }
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

    fn expr(&mut self) -> Result<KPoly, GeomError> {
        let proto = self.k.zero();
        let mut acc = KPoly::zero(&proto);
        let mut sign = 1;
        if let Some(c @ (b'+' | b'-')) = self.peek() {
            sign = if c == b'-' { -1 } else { 1 };
            self.pos += 1;
        }
        loop {
            let t = self.term()?;
            acc = if sign > 0 { acc.add(&t) } else { acc.sub(&t) };
            match self.peek() {
                Some(b'+') => {
                    sign = 1;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = -1;
                    self.pos += 1;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<KPoly, GeomError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(c) if c == b'(' || c == b't' || c == b'g' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.factor()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<KPoly, GeomError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let n = self.integer()?;
            return Ok(base.pow(n as usize));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<u64, GeomError> {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().map_err(|_| self.err("integer too large"))
    }

    fn atom(&mut self) -> Result<KPoly, GeomError> {
        let proto = self.k.zero();
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(KPoly::var(&proto))
            }
            Some(b'g') => {
                self.pos += 1;
                Ok(KPoly::constant(self.k.generator()))
            }
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let mut val = Q::from_integer(n.into());
                // a fraction a/b only when a digit follows the slash
                if self.s.get(self.pos) == Some(&b'/') && self.s.get(self.pos + 1).map_or(false, |c| c.is_ascii_digit()) {
                    self.pos += 1;
                    let d = self.integer()?;
                    if d == 0 {
                        return Err(self.err("zero denominator"));
                    }
                    val /= Q::from_integer(d.into());
                }
                Ok(KPoly::constant(proto.from_q_like(&val)))
            }
            _ => Err(self.err("unexpected character")),
        }
    }

    fn finish(&mut self) -> Result<(), GeomError> {
        if self.peek().is_some() {
            return Err(self.err("trailing input"));
        }
        Ok(())
    }
}

pub fn parse_poly(k: &NumberField, s: &str) -> Result<KPoly, GeomError> {
    parse_poly_at(k, s, 0)
}

fn parse_poly_at(k: &NumberField, s: &str, base: usize) -> Result<KPoly, GeomError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, base, k };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Splits at top-level occurrences of `sep` (outside parentheses), keeping byte offsets.
fn split_top(s: &str, sep: u8) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.bytes().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push((start, &s[start..i]));
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push((start, &s[start..]));
    out
}

/// Parses `m*(poly)@c`, `(poly)`, `m*inf@c` terms joined by `+`. Empty or `0` is the zero divisor.
pub fn parse_divisor(k: &NumberField, s: &str) -> Result<Divisor, GeomError> {
    let trimmed = s.trim();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(Divisor::zero());
    }
    let mut terms = Vec::new();
    for (off, raw) in split_top(s, b'+') {
        let lead = raw.len() - raw.trim_start().len();
        let off = off + lead;
        let t = raw.trim();
        if t.is_empty() {
            return Err(GeomError::Parse { pos: off, msg: "empty term".into() });
        }
        let (body, comp) = match t.rfind('@') {
            Some(i) if !t[i + 1..].contains(')') => {
                let c = t[i + 1..].trim().parse::<usize>().map_err(|_| GeomError::Parse { pos: off + i + 1, msg: "bad component index".into() })?;
                (&t[..i], c)
            }
            _ => (t, 0),
        };
        let (mult, place_str, place_off) = match split_top(body, b'*').as_slice() {
            [(_, only)] => (1u32, only.trim(), off),
            [(_, m), (po, rest)] => {
                let m = m.trim().parse::<u32>().map_err(|_| GeomError::Parse { pos: off, msg: "bad multiplicity".into() })?;
                (m, rest.trim(), off + po)
            }
            _ => return Err(GeomError::Parse { pos: off, msg: "expected m*(place)".into() }),
        };
        let place = if place_str == "inf" {
            Place::infinity(comp)
        } else {
            let inner = place_str.strip_prefix('(').and_then(|x| x.strip_suffix(')')).ok_or(GeomError::Parse {
                pos: place_off,
                msg: "place must be parenthesized or 'inf'".into(),
            })?;
            let p = parse_poly_at(k, inner, place_off + 1)?;
            if p.deg0() == 0 {
                return Err(GeomError::Parse { pos: place_off, msg: "constant place polynomial".into() });
            }
            if !p.is_monic() {
                return Err(GeomError::Parse { pos: place_off, msg: format!("place polynomial {} is not monic", p) });
            }
            if !p.is_squarefree() {
                return Err(GeomError::Parse { pos: place_off, msg: format!("place polynomial {} is not squarefree", p) });
            }
            Place::finite(comp, p)
        };
        if mult > 0 {
            terms.push((place, mult));
        }
    }
    Divisor::from_terms(terms)
}

/// Parses `(N)/(D)` or a bare polynomial, optionally followed by `@src->dst`.
pub fn parse_map(k: &NumberField, s: &str) -> Result<RationalMap, GeomError> {
    let (body, src, dst) = match s.find('@') {
        Some(i) => {
            let spec = &s[i + 1..];
            let (a, b) = spec.split_once("->").ok_or(GeomError::Parse { pos: i, msg: "expected @src->dst".into() })?;
            let a = a.trim().parse().map_err(|_| GeomError::Parse { pos: i + 1, msg: "bad component".into() })?;
            let b = b.trim().parse().map_err(|_| GeomError::Parse { pos: i + 1, msg: "bad component".into() })?;
            (&s[..i], a, b)
        }
        None => (s, 0, 0),
    };
    let parts = split_top(body, b'/');
    let proto = k.zero();
    let (num, den) = match parts.as_slice() {
        [(o, n)] => (parse_poly_at(k, n, *o)?, KPoly::one(&proto)),
        [(o1, n), (o2, d)] => (parse_poly_at(k, n, *o1)?, parse_poly_at(k, d, *o2)?),
        _ => return Err(GeomError::Parse { pos: 0, msg: "expected (N)/(D)".into() }),
    };
    RationalMap::new(num, den, src, dst)
}

/// Maps of a union separated by `;`, one per source component in order.
pub fn parse_curve_map(k: &NumberField, s: &str, src_comps: usize, dst_comps: usize) -> Result<CurveMap, GeomError> {
    let maps: Vec<RationalMap> = s.split(';').map(|p| parse_map(k, p)).collect::<Result<_, _>>()?;
    if src_comps == 1 && dst_comps == 1 && maps.len() == 1 {
        return Ok(CurveMap::single(maps.into_iter().next().unwrap()));
    }
    CurveMap::new(src_comps, dst_comps, maps)
}
