//! Sparse multivariate series truncated at a total degree.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coefficients::{join_terms, parse_expression, resolve_ident, ExprTarget, Monomial, Ring, Value};
use crate::error::{Error, Result};

/// Ring, ordered variable names and total-degree bound shared by a family of series.
#[derive(Clone, Debug)]
pub struct SeriesSpace {
    ring: Ring,
    vars: Arc<[String]>,
    trunc: u32,
}

impl PartialEq for SeriesSpace {
    fn eq(&self, other: &Self) -> bool {
        self.trunc == other.trunc && self.vars == other.vars && self.ring == other.ring
    }
}
impl Eq for SeriesSpace {}

impl SeriesSpace {
    pub fn new(ring: &Ring, vars: &[&str], trunc: u32) -> Result<SeriesSpace> {
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(Error::InvalidInput(format!("duplicate variable {v}")));
            }
            if ring.series_var() == Some(v) {
                return Err(Error::InvalidInput(format!("{v} is already the coefficient ring's parameter")));
            }
        }
        Ok(SeriesSpace {
            ring: ring.clone(),
            vars: vars.iter().map(|s| s.to_string()).collect(),
            trunc,
        })
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn vars(&self) -> &[String] {
        &self.vars
    }
    pub fn trunc(&self) -> u32 {
        self.trunc
    }
    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn with_trunc(&self, trunc: u32) -> SeriesSpace {
        SeriesSpace { trunc, ..self.clone() }
    }

    pub fn with_ring(&self, ring: &Ring) -> SeriesSpace {
        SeriesSpace { ring: ring.clone(), ..self.clone() }
    }

    pub fn var_index(&self, name: &str) -> Result<usize> {
        self.vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown variable {name}")))
    }

    pub fn zero(&self) -> MultiSeries {
        MultiSeries { space: self.clone(), terms: BTreeMap::new() }
    }

    pub fn one(&self) -> MultiSeries {
        self.constant(self.ring.one())
    }

    pub fn constant(&self, c: Value) -> MultiSeries {
        self.monomial(vec![0; self.nvars()], c)
    }

    pub fn int(&self, n: i64) -> MultiSeries {
        self.constant(self.ring.from_int(n))
    }

    /// `c * x^exps`; dropped if beyond the truncation.
    pub fn monomial(&self, exps: Monomial, c: Value) -> MultiSeries {
        let mut terms = BTreeMap::new();
        let deg: u32 = exps.iter().sum();
        if deg <= self.trunc && !self.ring.is_exact_zero(&c) {
            terms.insert(exps, c);
        }
        MultiSeries { space: self.clone(), terms }
    }

    pub fn var(&self, name: &str) -> Result<MultiSeries> {
        Ok(self.var_at(self.var_index(name)?))
    }

    pub fn var_at(&self, i: usize) -> MultiSeries {
        let mut e = vec![0; self.nvars()];
        e[i] = 1;
        self.monomial(e, self.ring.one())
    }

    /// Univariate series from its coefficient list `c_0, c_1, ...`.
    pub fn from_coeffs(&self, coeffs: &[Value]) -> Result<MultiSeries> {
        if self.nvars() != 1 {
            return Err(Error::ContextMismatch("coefficient lists need a univariate space".into()));
        }
        let mut terms = BTreeMap::new();
        for (i, c) in coeffs.iter().enumerate().take(self.trunc as usize + 1) {
            if !self.ring.is_exact_zero(c) {
                terms.insert(vec![i as u32], c.clone());
            }
        }
        Ok(MultiSeries { space: self.clone(), terms })
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Monomial, Value)>) -> Result<MultiSeries> {
        let mut out = self.zero();
        for (m, c) in terms {
            if m.len() != self.nvars() {
                return Err(Error::InvalidInput("exponent vector has the wrong length".into()));
            }
            let t = self.monomial(m, c);
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Parses an expression in the variables and the coefficient ring.
    pub fn parse(&self, text: &str) -> Result<MultiSeries> {
        parse_expression(self, text)
    }
}

impl ExprTarget for SeriesSpace {
    type V = MultiSeries;
    fn add(&self, a: &MultiSeries, b: &MultiSeries) -> Result<MultiSeries> {
        a.add(b)
    }
    fn sub(&self, a: &MultiSeries, b: &MultiSeries) -> Result<MultiSeries> {
        a.sub(b)
    }
    fn neg(&self, a: &MultiSeries) -> MultiSeries {
        a.neg()
    }
    fn mul(&self, a: &MultiSeries, b: &MultiSeries) -> Result<MultiSeries> {
        a.mul(b)
    }
    fn div(&self, a: &MultiSeries, b: &MultiSeries) -> Result<MultiSeries> {
        a.mul(&b.inverse()?)
    }
    fn pow_signed(&self, a: &MultiSeries, e: i64) -> Result<MultiSeries> {
        if e >= 0 {
            a.pow(e as u32)
        } else {
            a.inverse()?.pow((-e) as u32)
        }
    }
    fn integer(&self, n: &BigInt) -> MultiSeries {
        self.constant(self.ring.from_bigint(n))
    }
    fn ident(&self, name: &str) -> Result<MultiSeries> {
        match self.var_index(name) {
            Ok(i) => Ok(self.var_at(i)),
            Err(_) => Ok(self.constant(resolve_ident(&self.ring, name)?)),
        }
    }
    fn big_o(&self, var: &str, p: i64) -> Result<MultiSeries> {
        if self.ring.series_var() == Some(var) {
            Ok(self.constant(self.ring.big_o(p)?))
        } else {
            Err(Error::Parse(format!("O({var}^{p}) does not belong to {}", self.ring)))
        }
    }
}

/// A truncated multivariate series. Terms of total degree above `trunc` are
/// discarded by every operation.
#[derive(Clone, Debug)]
pub struct MultiSeries {
    space: SeriesSpace,
    terms: BTreeMap<Monomial, Value>,
}

impl PartialEq for MultiSeries {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

impl MultiSeries {
    pub fn space(&self) -> &SeriesSpace {
        &self.space
    }
    pub fn ring(&self) -> &Ring {
        &self.space.ring
    }
    pub fn trunc(&self) -> u32 {
        self.space.trunc
    }
    pub fn terms(&self) -> &BTreeMap<Monomial, Value> {
        &self.terms
    }

    /// No known nonzero coefficient.
    pub fn is_zero(&self) -> bool {
        self.terms.values().all(|c| self.ring().is_zero(c))
    }

    fn check(&self, other: &MultiSeries) -> Result<()> {
        if self.space == other.space {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "series over ({}; {}; {}) vs ({}; {}; {})",
                self.ring(),
                self.space.vars.join(","),
                self.trunc(),
                other.ring(),
                other.space.vars.join(","),
                other.trunc()
            )))
        }
    }

    fn with_terms(&self, terms: BTreeMap<Monomial, Value>) -> MultiSeries {
        MultiSeries { space: self.space.clone(), terms }
    }

    pub fn add(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.combine(other, false)
    }

    pub fn sub(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.combine(other, true)
    }

    fn combine(&self, other: &MultiSeries, subtract: bool) -> Result<MultiSeries> {
        self.check(other)?;
        let r = self.ring();
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            let c = if subtract { r.neg(c) } else { c.clone() };
            match terms.get_mut(m) {
                Some(cur) => {
                    let s = r.add(cur, &c);
                    if r.is_exact_zero(&s) {
                        terms.remove(m);
                    } else {
                        *cur = s;
                    }
                }
                None => {
                    terms.insert(m.clone(), c);
                }
            }
        }
        Ok(self.with_terms(terms))
    }

    pub fn neg(&self) -> MultiSeries {
        let r = self.ring();
        self.with_terms(self.terms.iter().map(|(m, c)| (m.clone(), r.neg(c))).collect())
    }

    pub fn scale(&self, c: &Value) -> Result<MultiSeries> {
        let r = self.ring();
        let mut terms = BTreeMap::new();
        for (m, v) in &self.terms {
            let p = r.mul(c, v)?;
            if !r.is_exact_zero(&p) {
                terms.insert(m.clone(), p);
            }
        }
        Ok(self.with_terms(terms))
    }

    pub fn mul(&self, other: &MultiSeries) -> Result<MultiSeries> {
        self.check(other)?;
        let r = self.ring();
        let trunc = self.trunc();
        let mut by_degree: Vec<Vec<(&Monomial, &Value)>> = vec![Vec::new(); trunc as usize + 1];
        for (m, c) in &other.terms {
            by_degree[degree(m) as usize].push((m, c));
        }
        let mut acc: HashMap<Monomial, Value> = HashMap::new();
        for (m1, c1) in &self.terms {
            let d1 = degree(m1);
            for bucket in &by_degree[..=(trunc - d1) as usize] {
                for (m2, c2) in bucket {
                    let m: Monomial = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                    let c = r.mul(c1, c2)?;
                    match acc.get_mut(&m) {
                        Some(cur) => *cur = r.add(cur, &c),
                        None => {
                            acc.insert(m, c);
                        }
                    }
                }
            }
        }
        Ok(self.with_terms(acc.into_iter().filter(|(_, c)| !r.is_exact_zero(c)).collect()))
    }

    pub fn pow(&self, n: u32) -> Result<MultiSeries> {
        let mut result = self.space.one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Stored coefficient, or zero; errors if the degree exceeds the truncation.
    pub fn coefficient(&self, exps: &[u32]) -> Result<Value> {
        if exps.len() != self.space.nvars() {
            return Err(Error::InvalidInput("exponent vector has the wrong length".into()));
        }
        if degree(exps) > self.trunc() {
            return Err(Error::TruncationTooSmall(format!(
                "coefficient of total degree {} requested from a series truncated at {}",
                degree(exps),
                self.trunc()
            )));
        }
        Ok(self.terms.get(exps).cloned().unwrap_or_else(|| self.ring().zero()))
    }

    pub fn constant_term(&self) -> Value {
        self.terms.get(&vec![0; self.space.nvars()]).cloned().unwrap_or_else(|| self.ring().zero())
    }

    /// Lowest total degree carrying a known nonzero coefficient.
    pub fn order(&self) -> Option<u32> {
        self.terms.iter().filter(|(_, c)| !self.ring().is_zero(c)).map(|(m, _)| degree(m)).min()
    }

    /// Univariate coefficient list of length `trunc + 1`.
    pub fn coeffs(&self) -> Vec<Value> {
        let mut out = vec![self.ring().zero(); self.trunc() as usize + 1];
        for (m, c) in &self.terms {
            out[m[0] as usize] = c.clone();
        }
        out
    }

    /// Partial derivative in variable `i`; the result keeps the same truncation.
    pub fn derivative(&self, i: usize) -> MultiSeries {
        let r = self.ring();
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if m[i] == 0 {
                continue;
            }
            let k = r.from_int(m[i] as i64);
            let v = r.mul(&k, c).expect("integer scaling");
            if r.is_exact_zero(&v) {
                continue;
            }
            let mut e = m.clone();
            e[i] -= 1;
            terms.insert(e, v);
        }
        self.with_terms(terms)
    }

    /// Antiderivative in variable `i` with zero constant of integration.
    pub fn integrate(&self, i: usize) -> Result<MultiSeries> {
        let r = self.ring();
        if !r.is_q_algebra() {
            return Err(Error::NotQAlgebra(format!("integration over {r}")));
        }
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            if degree(m) >= self.trunc() {
                continue;
            }
            let inv = r.from_rational(&BigRational::new(1.into(), (m[i] as i64 + 1).into()))?;
            let mut e = m.clone();
            e[i] += 1;
            terms.insert(e, r.mul(&inv, c)?);
        }
        Ok(self.with_terms(terms))
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<MultiSeries> {
        let r = self.ring();
        let c0 = self.constant_term();
        let c0inv = r.inverse(&c0)?;
        let u = self.space.one().sub(&self.scale(&c0inv)?)?;
        let mut s = self.space.one();
        for _ in 0..self.trunc() {
            s = self.space.one().add(&u.mul(&s)?)?;
        }
        s.scale(&c0inv)
    }

    /// Same series in a space with a lower or equal truncation.
    pub fn truncate(&self, trunc: u32) -> Result<MultiSeries> {
        if trunc > self.trunc() {
            return Err(Error::TruncationTooSmall(format!(
                "cannot raise truncation from {} to {trunc}",
                self.trunc()
            )));
        }
        let space = self.space.with_trunc(trunc);
        let terms = self.terms.iter().filter(|(m, _)| degree(m) <= trunc).map(|(m, c)| (m.clone(), c.clone())).collect();
        Ok(MultiSeries { space, terms })
    }

    /// Reinterprets an exactly known polynomial at a larger truncation.
    pub fn extend_exact(&self, trunc: u32) -> MultiSeries {
        let space = self.space.with_trunc(trunc);
        let terms = self.terms.iter().filter(|(m, _)| degree(m) <= trunc).map(|(m, c)| (m.clone(), c.clone())).collect();
        MultiSeries { space, terms }
    }

    /// Maps coefficients into another ring along the natural map.
    pub fn change_ring(&self, ring: &Ring) -> Result<MultiSeries> {
        let space = self.space.with_ring(ring);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = ring.coerce(self.ring(), c)?;
            if !ring.is_exact_zero(&v) {
                terms.insert(m.clone(), v);
            }
        }
        Ok(MultiSeries { space, terms })
    }

    /// Applies `f` to every coefficient, landing in `ring`.
    pub fn map_coeffs(&self, ring: &Ring, f: impl Fn(&Value) -> Result<Value>) -> Result<MultiSeries> {
        let space = self.space.with_ring(ring);
        let mut terms = BTreeMap::new();
        for (m, c) in &self.terms {
            let v = f(c)?;
            if !ring.is_exact_zero(&v) {
                terms.insert(m.clone(), v);
            }
        }
        Ok(MultiSeries { space, terms })
    }

    fn resolve_bindings<'a>(
        &self,
        bindings: &'a [(&str, &'a MultiSeries)],
        target: &SeriesSpace,
    ) -> Result<Vec<std::borrow::Cow<'a, MultiSeries>>> {
        for (_, b) in bindings {
            if b.space != *target {
                return Err(Error::ContextMismatch("substitution bindings live in different spaces".into()));
            }
        }
        let mut out = Vec::new();
        for v in self.space.vars.iter() {
            match bindings.iter().find(|(n, _)| n == v) {
                Some((_, b)) => out.push(std::borrow::Cow::Borrowed(*b)),
                None => out.push(std::borrow::Cow::Owned(target.var(v).map_err(|_| {
                    Error::InvalidInput(format!("variable {v} has no binding"))
                })?)),
            }
        }
        Ok(out)
    }

    /// Replaces each variable by a series with zero constant term. Unbound
    /// variables map to the variable of the same name in the target space.
    pub fn substitute(&self, bindings: &[(&str, &MultiSeries)], target: &SeriesSpace) -> Result<MultiSeries> {
        if target.trunc > self.trunc() && !self.terms.is_empty() {
            return Err(Error::TruncationTooSmall(format!(
                "series known to degree {} cannot be evaluated to degree {}",
                self.trunc(),
                target.trunc
            )));
        }
        let bound = self.resolve_bindings(bindings, target)?;
        for b in &bound {
            if !target.ring.is_zero(&b.constant_term()) {
                return Err(Error::ConstantTerm(format!(
                    "binding {} has a nonzero constant term",
                    b.as_ref()
                )));
            }
        }
        let refs: Vec<&MultiSeries> = bound.iter().map(|b| b.as_ref()).collect();
        self.horner(&refs, target)
    }

    /// Evaluates `self`, taken to be an exactly known polynomial, at arbitrary
    /// bindings (constant terms allowed).
    pub fn substitute_polynomial(
        &self,
        bindings: &[(&str, &MultiSeries)],
        target: &SeriesSpace,
    ) -> Result<MultiSeries> {
        let bound = self.resolve_bindings(bindings, target)?;
        let refs: Vec<&MultiSeries> = bound.iter().map(|b| b.as_ref()).collect();
        self.horner(&refs, target)
    }

    fn horner(&self, bindings: &[&MultiSeries], target: &SeriesSpace) -> Result<MultiSeries> {
        let entries: Vec<(&[u32], &Value)> = self.terms.iter().map(|(m, c)| (m.as_slice(), c)).collect();
        horner_rec(&entries, 0, bindings, self.ring(), target)
    }

    /// `self(g(x))` for univariate `self`.
    pub fn compose(&self, g: &MultiSeries) -> Result<MultiSeries> {
        let name = self.single_var()?;
        self.substitute(&[(name, g)], g.space())
    }

    fn single_var(&self) -> Result<&str> {
        if self.space.nvars() != 1 {
            return Err(Error::ContextMismatch("operation needs a univariate series".into()));
        }
        Ok(&self.space.vars[0])
    }

    /// Compositional inverse of a univariate series with zero constant term
    /// and unit linear coefficient, by Newton iteration.
    pub fn reversion(&self) -> Result<MultiSeries> {
        self.single_var()?;
        let r = self.ring();
        if !r.is_zero(&self.constant_term()) {
            return Err(Error::ConstantTerm("reversion needs f(0) = 0".into()));
        }
        let f1 = self.coefficient(&[1]).unwrap_or_else(|_| r.zero());
        let f1inv = r
            .inverse(&f1)
            .map_err(|_| Error::NotAUnit(format!("linear coefficient {} is not a unit", r.format(&f1))))?;
        let x = self.space.var_at(0);
        let df = self.derivative(0);
        let mut g = x.scale(&f1inv)?;
        let mut correct = 1u32;
        while correct < self.trunc() {
            let residual = self.compose(&g)?.sub(&x)?;
            let slope = df.compose(&g)?.inverse()?;
            g = g.sub(&residual.mul(&slope)?)?;
            correct *= 2;
        }
        Ok(g)
    }
}

fn horner_rec(
    entries: &[(&[u32], &Value)],
    idx: usize,
    bindings: &[&MultiSeries],
    src: &Ring,
    target: &SeriesSpace,
) -> Result<MultiSeries> {
    if idx == bindings.len() {
        let mut acc = target.zero();
        for (_, c) in entries {
            let v = target.ring.coerce(src, c)?;
            acc = acc.add(&target.constant(v))?;
        }
        return Ok(acc);
    }
    // group by the exponent of variable idx (entries are lexicographically sorted)
    let mut groups: BTreeMap<u32, Vec<(&[u32], &Value)>> = BTreeMap::new();
    for &(m, c) in entries {
        groups.entry(m[idx]).or_default().push((m, c));
    }
    let top = match groups.keys().next_back() {
        Some(&t) => t,
        None => return Ok(target.zero()),
    };
    let mut acc = target.zero();
    for e in (0..=top).rev() {
        if e != top {
            acc = acc.mul(bindings[idx])?;
        }
        if let Some(g) = groups.get(&e) {
            let inner = horner_rec(g, idx + 1, bindings, src, target)?;
            acc = acc.add(&inner)?;
        }
    }
    Ok(acc)
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.ring();
        let parts = self
            .terms
            .iter()
            .map(|(m, c)| {
                let mono = m
                    .iter()
                    .zip(self.space.vars.iter())
                    .filter(|(e, _)| **e > 0)
                    .map(|(e, v)| if *e == 1 { v.clone() } else { format!("{v}^{e}") })
                    .collect::<Vec<_>>()
                    .join("*");
                (r.format(c), mono)
            })
            .collect();
        f.write_str(&join_terms(parts))
    }
}
