//! Canonical text for ring descriptors and elements, plus the matching parsers.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::ring::{PolyMap, Ring, RingKind, Value};
use crate::error::{Error, Result};

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

/// Joins `(coefficient text, monomial text)` pairs into a signed sum.
/// An empty monomial means the constant term.
pub(crate) fn join_terms(parts: Vec<(String, String)>) -> String {
    let mut out = String::new();
    for (coeff, mono) in parts {
        let term = if mono.is_empty() {
            coeff
        } else if coeff == "1" {
            mono
        } else if coeff == "-1" {
            format!("-{mono}")
        } else if needs_parens(&coeff) {
            format!("({coeff})*{mono}")
        } else {
            format!("{coeff}*{mono}")
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}

fn needs_parens(s: &str) -> bool {
    let body = s.strip_prefix('-').unwrap_or(s);
    body.contains(['+', '-', ' '])
}

fn power_text(name: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => name.to_string(),
        _ => format!("{name}^{e}"),
    }
}

fn monomial_text(gens: &[String], m: &[u32]) -> String {
    m.iter()
        .zip(gens)
        .filter(|(e, _)| **e > 0)
        .map(|(e, g)| power_text(g, *e as i64))
        .collect::<Vec<_>>()
        .join("*")
}

fn format_poly(base: &Ring, gens: &[String], m: &PolyMap) -> String {
    join_terms(
        m.iter()
            .map(|(mono, c)| (base.format(c), monomial_text(gens, mono)))
            .collect(),
    )
}

impl Ring {
    /// Descriptor text, e.g. `Laurent(QQ,q,6,2)`.
    pub fn descriptor(&self) -> String {
        match self.kind() {
            RingKind::Rationals => "QQ".into(),
            RingKind::GaussianRationals => "QQ(i)".into(),
            RingKind::Integers { inverted } if inverted.is_one() => "ZZ".into(),
            RingKind::Integers { inverted } => format!("ZZ[1/{inverted}]"),
            RingKind::IntegersMod { modulus } => format!("ZZ/{modulus}"),
            RingKind::Presented(p) => {
                let rels: Vec<String> = p
                    .relations
                    .iter()
                    .map(|r| {
                        format!(
                            "{}={}",
                            power_text(&p.gens[r.gen], r.degree as i64),
                            format_poly(&p.base, &p.gens, &r.rhs)
                        )
                    })
                    .collect();
                format!("Presented({},[{}],[{}])", p.base.descriptor(), p.gens.join(","), rels.join(","))
            }
            RingKind::PowerSeries { base, var, order } => {
                format!("PowerSeries({},{var},{order})", base.descriptor())
            }
            RingKind::Laurent { base, var, order, tail } => {
                format!("Laurent({},{var},{order},{tail})", base.descriptor())
            }
        }
    }

    /// Canonical element text; `parse` reads it back to the same value.
    pub fn format(&self, v: &Value) -> String {
        match v {
            Value::Rat(r) => r.to_string(),
            Value::Res(r) => r.to_string(),
            Value::Gauss(a, b) => {
                if b.is_zero() {
                    a.to_string()
                } else {
                    let imag = if b.is_one() {
                        "i".to_string()
                    } else if (-b).is_one() {
                        "-i".to_string()
                    } else {
                        format!("{b}*i")
                    };
                    if a.is_zero() {
                        imag
                    } else if let Some(rest) = imag.strip_prefix('-') {
                        format!("{a}-{rest}")
                    } else {
                        format!("{a}+{imag}")
                    }
                }
            }
            Value::Poly(m) => {
                let p = self.presentation().expect("polynomial payload needs a presented ring");
                format_poly(&p.base, &p.gens, m)
            }
            Value::Series(s) => {
                let base = self.base().expect("series payload needs a series ring");
                let var = self.series_var().unwrap();
                let mut body = join_terms(
                    s.terms.iter().map(|(e, c)| (base.format(c), power_text(var, *e))).collect(),
                );
                if let Some(p) = s.prec {
                    let o = format!("O({})", if p == 1 { var.to_string() } else { format!("{var}^{p}") });
                    if s.terms.is_empty() {
                        body = o;
                    } else {
                        body.push_str(" + ");
                        body.push_str(&o);
                    }
                }
                body
            }
        }
    }

    /// Parses an arithmetic expression over this ring's generators.
    pub fn parse(&self, text: &str) -> Result<Value> {
        parse_expression(self, text)
    }

    /// Parses descriptor text such as `Presented(ZZ,[zeta],[zeta^2=-1-zeta])`.
    pub fn parse_descriptor(text: &str) -> Result<Ring> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        match s.as_str() {
            "QQ" => return Ok(Ring::rationals()),
            "QQ(i)" => return Ok(Ring::gaussian()),
            "ZZ" => return Ok(Ring::integers()),
            _ => {}
        }
        if let Some(n) = s.strip_prefix("ZZ[1/").and_then(|r| r.strip_suffix(']')) {
            let n: BigInt = n.parse().map_err(|_| parse_err(format!("bad localization in {text}")))?;
            return Ring::new(RingKind::Integers { inverted: n });
        }
        if let Some(m) = s.strip_prefix("ZZ/") {
            let m: BigInt = m.parse().map_err(|_| parse_err(format!("bad modulus in {text}")))?;
            return Ring::new(RingKind::IntegersMod { modulus: m });
        }
        let (head, args) = s
            .split_once('(')
            .and_then(|(h, rest)| rest.strip_suffix(')').map(|a| (h, a)))
            .ok_or_else(|| parse_err(format!("unknown ring descriptor {text}")))?;
        let args = split_top(args);
        let int = |a: &str| -> Result<i64> { a.parse().map_err(|_| parse_err(format!("expected integer, got {a}"))) };
        match (head, args.len()) {
            ("PowerSeries", 3) => {
                let base = Ring::parse_descriptor(&args[0])?;
                let order = u32::try_from(int(&args[2])?).map_err(|_| parse_err("negative order"))?;
                Ring::power_series(&base, &args[1], order)
            }
            ("Laurent", 4) => {
                let base = Ring::parse_descriptor(&args[0])?;
                let tail = u32::try_from(int(&args[3])?).map_err(|_| parse_err("negative tail"))?;
                Ring::laurent(&base, &args[1], int(&args[2])?, tail)
            }
            ("Presented", 3) => {
                let base = Ring::parse_descriptor(&args[0])?;
                let list = |a: &str| -> Result<Vec<String>> {
                    let inner = a
                        .strip_prefix('[')
                        .and_then(|x| x.strip_suffix(']'))
                        .ok_or_else(|| parse_err(format!("expected a bracketed list, got {a}")))?;
                    Ok(if inner.is_empty() { vec![] } else { split_top(inner) })
                };
                let gens = list(&args[1])?;
                let rels = list(&args[2])?;
                let mut parsed = Vec::new();
                for r in &rels {
                    let (lhs, rhs) = r.split_once('=').ok_or_else(|| parse_err(format!("relation without '=': {r}")))?;
                    let (g, d) = match lhs.split_once('^') {
                        Some((g, d)) => (g, u32::try_from(int(d)?).map_err(|_| parse_err("negative degree"))?),
                        None => (lhs, 1),
                    };
                    parsed.push((g.to_string(), d, rhs.to_string()));
                }
                let gen_refs: Vec<&str> = gens.iter().map(String::as_str).collect();
                let rel_refs: Vec<(&str, u32, &str)> =
                    parsed.iter().map(|(g, d, r)| (g.as_str(), *d, r.as_str())).collect();
                Ring::presented(&base, &gen_refs, &rel_refs)
            }
            _ => Err(parse_err(format!("unknown ring descriptor {text}"))),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Ring> {
        Ring::parse_descriptor(s)
    }
}

/// Splits on commas that are not nested inside brackets.
fn split_top(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(std::mem::take(&mut cur));
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    out.push(cur);
    out
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
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
            let digits: String = chars[start..i].iter().collect();
            out.push(Tok::Num(digits.parse().unwrap()));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(parse_err(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

/// Anything an arithmetic expression can be evaluated in.
pub(crate) trait ExprTarget {
    type V;
    fn add(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V>;
    fn pow_signed(&self, a: &Self::V, e: i64) -> Result<Self::V>;
    fn integer(&self, n: &BigInt) -> Self::V;
    fn ident(&self, name: &str) -> Result<Self::V>;
    fn big_o(&self, var: &str, p: i64) -> Result<Self::V>;
}

impl ExprTarget for Ring {
    type V = Value;
    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Ring::add(self, a, b))
    }
    fn sub(&self, a: &Value, b: &Value) -> Result<Value> {
        Ok(Ring::sub(self, a, b))
    }
    fn neg(&self, a: &Value) -> Value {
        Ring::neg(self, a)
    }
    fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        Ring::mul(self, a, b)
    }
    fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        Ring::div(self, a, b)
    }
    fn pow_signed(&self, a: &Value, e: i64) -> Result<Value> {
        Ring::pow_signed(self, a, e)
    }
    fn integer(&self, n: &BigInt) -> Value {
        self.from_bigint(n)
    }
    fn ident(&self, name: &str) -> Result<Value> {
        resolve_ident(self, name)
    }
    fn big_o(&self, var: &str, p: i64) -> Result<Value> {
        big_o_in(self, var, p)
    }
}

pub(crate) fn parse_expression<T: ExprTarget>(target: &T, text: &str) -> Result<T::V> {
    let tokens = lex(text)?;
    let mut p = ExprParser { ring: target, tokens, pos: 0 };
    let v = p.expr()?;
    if p.pos != p.tokens.len() {
        return Err(parse_err(format!("trailing input in {text:?}")));
    }
    Ok(v)
}

struct ExprParser<'a, T> {
    ring: &'a T,
    tokens: Vec<Tok>,
    pos: usize,
}

impl<T: ExprTarget> ExprParser<'_, T> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(parse_err(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<T::V> {
        let mut acc = if self.eat('-') {
            let t = self.term()?;
            self.ring.neg(&t)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.ring.add(&acc, &t)?;
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.ring.sub(&acc, &t)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<T::V> {
        let mut acc = self.power()?;
        loop {
            if self.eat('*') {
                let f = self.power()?;
                acc = self.ring.mul(&acc, &f)?;
            } else if self.eat('/') {
                let f = self.power()?;
                acc = self.ring.div(&acc, &f)?;
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_) | Tok::Sym('('))) {
                let f = self.power()?;
                acc = self.ring.mul(&acc, &f)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = self.eat('-');
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let v = n.to_i64().ok_or_else(|| parse_err("exponent too large"))?;
                Ok(if neg { -v } else { v })
            }
            _ => Err(parse_err("expected an integer exponent")),
        }
    }

    fn power(&mut self) -> Result<T::V> {
        if self.eat('-') {
            let v = self.power()?;
            return Ok(self.ring.neg(&v));
        }
        let base = self.atom()?;
        if self.eat('^') {
            let e = self.signed_int()?;
            return self.ring.pow_signed(&base, e);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<T::V> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(self.ring.integer(&n))
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if name == "O" && self.peek() == Some(&Tok::Sym('(')) {
                    self.pos += 1;
                    let var = match self.peek().cloned() {
                        Some(Tok::Ident(v)) => v,
                        _ => return Err(parse_err("expected a variable inside O(...)")),
                    };
                    self.pos += 1;
                    let p = if self.eat('^') { self.signed_int()? } else { 1 };
                    self.expect(')')?;
                    return self.ring.big_o(&var, p);
                }
                self.ring.ident(&name)
            }
            _ => Err(parse_err("unexpected end of expression")),
        }
    }
}

fn big_o_in(ring: &Ring, var: &str, p: i64) -> Result<Value> {
    if ring.series_var() == Some(var) {
        return ring.big_o(p);
    }
    Err(parse_err(format!("O({var}^{p}) does not belong to {ring}")))
}

pub(crate) fn resolve_ident(ring: &Ring, name: &str) -> Result<Value> {
    match ring.kind() {
        RingKind::GaussianRationals if name == "i" => {
            Ok(Value::Gauss(BigRational::zero(), BigRational::one()))
        }
        RingKind::Presented(p) if p.gens.iter().any(|g| g == name) => ring.gen_by_name(name),
        RingKind::PowerSeries { var, .. } | RingKind::Laurent { var, .. } if var == name => ring.series_gen(),
        _ => match ring.base() {
            Some(b) => {
                let v = resolve_ident(b, name)?;
                ring.embed_base(&v)
            }
            None => Err(parse_err(format!("unknown identifier {name} in {ring}"))),
        },
    }
}
