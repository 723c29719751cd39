use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Monomial exponent vector over the generators of a presented algebra.
pub type Monomial = Vec<u32>;

/// Polynomial payload of a presented algebra: monomial -> base coefficient.
pub type PolyMap = BTreeMap<Monomial, Value>;

/// A rewriting rule `gen^degree = rhs` of a presented algebra.
///
/// `rhs` has degree below `degree` in `gen` and only mentions generators
/// with a smaller index, which makes normal-form reduction terminate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub gen: usize,
    pub degree: u32,
    pub rhs: PolyMap,
}

/// A finitely presented commutative algebra `base[gens]/(relations)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub base: Ring,
    pub gens: Vec<String>,
    pub relations: Vec<Relation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RingKind {
    Rationals,
    /// `Q(i)` with `i^2 = -1`.
    GaussianRationals,
    /// `Z[1/n]`; `inverted == 1` is the integers themselves.
    Integers { inverted: BigInt },
    IntegersMod { modulus: BigInt },
    Presented(Presentation),
    /// `base[[var]]` computed modulo `var^order`.
    PowerSeries { base: Ring, var: String, order: u32 },
    /// `base((var))` with exponents in `[-tail, order]`.
    Laurent { base: Ring, var: String, order: i64, tail: u32 },
}

/// Shared handle to a coefficient ring descriptor.
#[derive(Clone, Debug)]
pub struct Ring(Arc<RingKind>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}
impl Eq for Ring {}

/// Raw element payload. Its meaning depends on the ring it is used with.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    /// Rationals and (localized) integers.
    Rat(BigRational),
    Gauss(BigRational, BigRational),
    /// Residue in `[0, m)`.
    Res(BigInt),
    Poly(PolyMap),
    Series(SeriesValue),
}

/// Truncated series payload. Coefficients at exponents `>= prec` are unknown;
/// `prec == None` marks an exactly known Laurent polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesValue {
    pub terms: BTreeMap<i64, Value>,
    pub prec: Option<i64>,
}

fn min_prec(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

/// Strips from `d` every prime factor it shares with `n`; `d` divides a power of
/// `n` iff the result is one.
fn strip_factors(mut d: BigInt, n: &BigInt) -> BigInt {
    d = d.abs();
    loop {
        let g = d.gcd(n);
        if g.is_one() || g.is_zero() {
            return d;
        }
        d /= g;
    }
}

impl Ring {
    pub fn new(kind: RingKind) -> Result<Ring> {
        match &kind {
            RingKind::Integers { inverted } if !inverted.is_positive() => {
                return Err(Error::InvalidInput("localization must invert a positive integer".into()))
            }
            RingKind::IntegersMod { modulus } if modulus <= &BigInt::one() => {
                return Err(Error::InvalidInput("modulus must be at least 2".into()))
            }
            RingKind::PowerSeries { base, order, .. } => {
                if base.is_series() {
                    return Err(Error::InvalidInput("series base must not itself be a series ring".into()));
                }
                if *order == 0 {
                    return Err(Error::InvalidInput("series order must be positive".into()));
                }
            }
            RingKind::Laurent { base, order, .. } => {
                if base.is_series() {
                    return Err(Error::InvalidInput("series base must not itself be a series ring".into()));
                }
                if *order < 0 {
                    return Err(Error::InvalidInput("Laurent order must be non-negative".into()));
                }
            }
            RingKind::Presented(p) => {
                if p.base.is_series() || matches!(p.base.kind(), RingKind::Presented(_)) {
                    return Err(Error::InvalidInput("presented algebras need a scalar base ring".into()));
                }
                let mut seen = vec![false; p.gens.len()];
                for r in &p.relations {
                    if r.gen >= p.gens.len() || r.degree == 0 {
                        return Err(Error::InvalidInput("malformed relation".into()));
                    }
                    if std::mem::replace(&mut seen[r.gen], true) {
                        return Err(Error::InvalidInput(format!(
                            "generator {} has two relations",
                            p.gens[r.gen]
                        )));
                    }
                    for m in r.rhs.keys() {
                        if m.len() != p.gens.len() {
                            return Err(Error::InvalidInput("relation monomial has wrong arity".into()));
                        }
                        let ok = m.iter().enumerate().all(|(i, &e)| {
                            e == 0 || i < r.gen || (i == r.gen && e < r.degree)
                        });
                        if !ok {
                            return Err(Error::InvalidInput(format!(
                                "relation for {} must only use earlier generators",
                                p.gens[r.gen]
                            )));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(Ring(Arc::new(kind)))
    }

    pub fn rationals() -> Ring {
        Ring(Arc::new(RingKind::Rationals))
    }
    pub fn gaussian() -> Ring {
        Ring(Arc::new(RingKind::GaussianRationals))
    }
    pub fn integers() -> Ring {
        Ring(Arc::new(RingKind::Integers { inverted: BigInt::one() }))
    }
    pub fn integers_localized(n: i64) -> Result<Ring> {
        Ring::new(RingKind::Integers { inverted: BigInt::from(n) })
    }
    pub fn integers_mod(m: i64) -> Result<Ring> {
        Ring::new(RingKind::IntegersMod { modulus: BigInt::from(m) })
    }
    pub fn power_series(base: &Ring, var: &str, order: u32) -> Result<Ring> {
        Ring::new(RingKind::PowerSeries { base: base.clone(), var: var.to_string(), order })
    }
    pub fn laurent(base: &Ring, var: &str, order: i64, tail: u32) -> Result<Ring> {
        Ring::new(RingKind::Laurent { base: base.clone(), var: var.to_string(), order, tail })
    }

    /// `base[gens]/(gen^degree = rhs, ...)`; relations are given as
    /// `(generator name, degree, rhs)` with `rhs` an element of the free
    /// polynomial ring on the generators.
    pub fn presented(base: &Ring, gens: &[&str], relations: &[(&str, u32, &str)]) -> Result<Ring> {
        let free = Ring::new(RingKind::Presented(Presentation {
            base: base.clone(),
            gens: gens.iter().map(|s| s.to_string()).collect(),
            relations: vec![],
        }))?;
        let mut rels = Vec::new();
        for (g, deg, rhs) in relations {
            let gen = gens
                .iter()
                .position(|x| x == g)
                .ok_or_else(|| Error::InvalidInput(format!("unknown generator {g}")))?;
            let v = free.parse(rhs)?;
            let Value::Poly(map) = v else { unreachable!() };
            rels.push(Relation { gen, degree: *deg, rhs: map });
        }
        Ring::new(RingKind::Presented(Presentation {
            base: base.clone(),
            gens: gens.iter().map(|s| s.to_string()).collect(),
            relations: rels,
        }))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn is_series(&self) -> bool {
        matches!(*self.0, RingKind::PowerSeries { .. } | RingKind::Laurent { .. })
    }

    /// Base ring of a series ring or presented algebra.
    pub fn base(&self) -> Option<&Ring> {
        match &*self.0 {
            RingKind::PowerSeries { base, .. } | RingKind::Laurent { base, .. } => Some(base),
            RingKind::Presented(p) => Some(&p.base),
            _ => None,
        }
    }

    pub fn series_var(&self) -> Option<&str> {
        match &*self.0 {
            RingKind::PowerSeries { var, .. } | RingKind::Laurent { var, .. } => Some(var),
            _ => None,
        }
    }

    /// Exponents `>= cap` are never stored.
    pub fn series_cap(&self) -> Option<i64> {
        match &*self.0 {
            RingKind::PowerSeries { order, .. } => Some(*order as i64),
            RingKind::Laurent { order, .. } => Some(order + 1),
            _ => None,
        }
    }

    /// Lowest admissible exponent of a series ring.
    pub fn series_floor(&self) -> Option<i64> {
        match &*self.0 {
            RingKind::PowerSeries { .. } => Some(0),
            RingKind::Laurent { tail, .. } => Some(-(*tail as i64)),
            _ => None,
        }
    }

    /// Same series ring with a different order (and tail, for Laurent rings).
    pub fn with_series_bounds(&self, order: i64, tail: u32) -> Result<Ring> {
        match &*self.0 {
            RingKind::PowerSeries { base, var, .. } => Ring::power_series(base, var, order.max(1) as u32),
            RingKind::Laurent { base, var, .. } => Ring::laurent(base, var, order, tail),
            _ => Err(Error::InvalidInput("not a series ring".into())),
        }
    }

    pub fn presentation(&self) -> Option<&Presentation> {
        match &*self.0 {
            RingKind::Presented(p) => Some(p),
            _ => None,
        }
    }

    /// True when every nonzero integer is invertible.
    pub fn is_q_algebra(&self) -> bool {
        match &*self.0 {
            RingKind::Rationals | RingKind::GaussianRationals => true,
            RingKind::Integers { .. } | RingKind::IntegersMod { .. } => false,
            RingKind::Presented(p) => p.base.is_q_algebra(),
            RingKind::PowerSeries { base, .. } | RingKind::Laurent { base, .. } => base.is_q_algebra(),
        }
    }

    // ---------------------------------------------------------------- constants

    pub fn zero(&self) -> Value {
        match &*self.0 {
            RingKind::Rationals | RingKind::Integers { .. } => Value::Rat(BigRational::zero()),
            RingKind::GaussianRationals => Value::Gauss(BigRational::zero(), BigRational::zero()),
            RingKind::IntegersMod { .. } => Value::Res(BigInt::zero()),
            RingKind::Presented(_) => Value::Poly(PolyMap::new()),
            _ => Value::Series(SeriesValue { terms: BTreeMap::new(), prec: None }),
        }
    }

    pub fn one(&self) -> Value {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Value {
        self.from_bigint(&BigInt::from(n))
    }

    pub fn from_bigint(&self, n: &BigInt) -> Value {
        match &*self.0 {
            RingKind::Rationals | RingKind::Integers { .. } => Value::Rat(BigRational::from_integer(n.clone())),
            RingKind::GaussianRationals => Value::Gauss(BigRational::from_integer(n.clone()), BigRational::zero()),
            RingKind::IntegersMod { modulus } => Value::Res(n.mod_floor(modulus)),
            RingKind::Presented(p) => {
                let c = p.base.from_bigint(n);
                self.poly_from_const(c, &p.base, p.gens.len())
            }
            _ => {
                let base = self.base().unwrap();
                let c = base.from_bigint(n);
                self.series_const(c)
            }
        }
    }

    /// The image of a rational number; fails if its denominator is not a unit.
    pub fn from_rational(&self, r: &BigRational) -> Result<Value> {
        match &*self.0 {
            RingKind::Rationals => Ok(Value::Rat(r.clone())),
            RingKind::GaussianRationals => Ok(Value::Gauss(r.clone(), BigRational::zero())),
            RingKind::Integers { inverted } => {
                if strip_factors(r.denom().clone(), inverted).is_one() {
                    Ok(Value::Rat(r.clone()))
                } else {
                    Err(Error::NotAUnit(format!("denominator of {r} in {self}")))
                }
            }
            RingKind::IntegersMod { .. } => {
                let d = self.from_bigint(r.denom());
                let dinv = self.inverse(&d)?;
                self.mul(&self.from_bigint(r.numer()), &dinv)
            }
            RingKind::Presented(p) => {
                let c = p.base.from_rational(r)?;
                Ok(self.poly_from_const(c, &p.base, p.gens.len()))
            }
            _ => {
                let c = self.base().unwrap().from_rational(r)?;
                Ok(self.series_const(c))
            }
        }
    }

    fn poly_from_const(&self, c: Value, base: &Ring, ngens: usize) -> Value {
        let mut m = PolyMap::new();
        if !base.is_zero(&c) {
            m.insert(vec![0; ngens], c);
        }
        Value::Poly(m)
    }

    fn series_const(&self, c: Value) -> Value {
        let base = self.base().unwrap();
        let mut terms = BTreeMap::new();
        if !base.is_zero(&c) {
            terms.insert(0, c);
        }
        Value::Series(SeriesValue { terms, prec: None })
    }

    /// Embeds an element of the base ring (series rings and presented algebras).
    pub fn embed_base(&self, c: &Value) -> Result<Value> {
        match &*self.0 {
            RingKind::Presented(p) => Ok(self.poly_from_const(c.clone(), &p.base, p.gens.len())),
            RingKind::PowerSeries { .. } | RingKind::Laurent { .. } => {
                let mut s = SeriesValue { terms: BTreeMap::new(), prec: None };
                if !self.base().unwrap().is_zero(c) {
                    s.terms.insert(0, c.clone());
                }
                Ok(Value::Series(s))
            }
            _ => Err(Error::InvalidInput(format!("{self} has no base ring"))),
        }
    }

    /// Generator `i` of a presented algebra.
    pub fn gen(&self, i: usize) -> Result<Value> {
        let p = self
            .presentation()
            .ok_or_else(|| Error::InvalidInput(format!("{self} is not a presented algebra")))?;
        if i >= p.gens.len() {
            return Err(Error::InvalidInput(format!("generator index {i} out of range")));
        }
        let mut mono = vec![0; p.gens.len()];
        mono[i] = 1;
        let mut m = PolyMap::new();
        m.insert(mono, p.base.one());
        Ok(self.reduce_poly(m))
    }

    pub fn gen_by_name(&self, name: &str) -> Result<Value> {
        let p = self
            .presentation()
            .ok_or_else(|| Error::InvalidInput(format!("{self} is not a presented algebra")))?;
        let i = p
            .gens
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown generator {name}")))?;
        self.gen(i)
    }

    /// `c * var^e` in a series ring.
    pub fn monomial(&self, c: &Value, e: i64) -> Result<Value> {
        let base = self.base().filter(|_| self.is_series()).ok_or_else(|| {
            Error::InvalidInput(format!("{self} is not a series ring"))
        })?;
        let mut terms = BTreeMap::new();
        if !base.is_zero(c) {
            terms.insert(e, c.clone());
        }
        self.norm_series(terms, None)
    }

    /// The series variable itself.
    pub fn series_gen(&self) -> Result<Value> {
        let base = self.base().ok_or_else(|| Error::InvalidInput("not a series ring".into()))?;
        self.monomial(&base.one(), 1)
    }

    /// `O(var^p)`: a zero of known precision.
    pub fn big_o(&self, p: i64) -> Result<Value> {
        if !self.is_series() {
            return Err(Error::InvalidInput(format!("{self} is not a series ring")));
        }
        self.norm_series(BTreeMap::new(), Some(p))
    }

    // ---------------------------------------------------------------- predicates

    /// No known nonzero coefficient.
    pub fn is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Rat(r) => r.is_zero(),
            Value::Gauss(x, y) => x.is_zero() && y.is_zero(),
            Value::Res(r) => r.is_zero(),
            Value::Poly(m) => m.is_empty(),
            Value::Series(s) => s.terms.is_empty(),
        }
    }

    /// Zero with no precision loss.
    pub fn is_exact_zero(&self, a: &Value) -> bool {
        match a {
            Value::Series(s) => s.terms.is_empty() && s.prec.is_none(),
            _ => self.is_zero(a),
        }
    }

    pub fn is_one(&self, a: &Value) -> bool {
        self.is_zero(&self.sub(a, &self.one()))
    }

    /// Equality up to the common known precision.
    pub fn eq(&self, a: &Value, b: &Value) -> bool {
        self.is_zero(&self.sub(a, b))
    }

    // ---------------------------------------------------------------- arithmetic

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (RingKind::IntegersMod { modulus }, Value::Res(x), Value::Res(y)) => {
                Value::Res((x + y).mod_floor(modulus))
            }
            (_, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (_, Value::Gauss(a1, b1), Value::Gauss(a2, b2)) => Value::Gauss(a1 + a2, b1 + b2),
            (RingKind::Presented(p), Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(merge_maps(&p.base, x, y, false))
            }
            (_, Value::Series(x), Value::Series(y)) => {
                let base = self.base().unwrap();
                let prec = min_prec(x.prec, y.prec);
                let mut terms = merge_maps(base, &x.terms, &y.terms, false);
                if let Some(p) = prec {
                    terms.retain(|e, _| *e < p);
                }
                Value::Series(SeriesValue { terms, prec })
            }
            _ => panic!("value/ring shape mismatch in add over {self}"),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (RingKind::IntegersMod { modulus }, Value::Res(x)) => Value::Res((-x).mod_floor(modulus)),
            (_, Value::Rat(x)) => Value::Rat(-x),
            (_, Value::Gauss(x, y)) => Value::Gauss(-x, -y),
            (RingKind::Presented(p), Value::Poly(m)) => {
                Value::Poly(m.iter().map(|(k, v)| (k.clone(), p.base.neg(v))).collect())
            }
            (_, Value::Series(s)) => {
                let base = self.base().unwrap();
                Value::Series(SeriesValue {
                    terms: s.terms.iter().map(|(k, v)| (*k, base.neg(v))).collect(),
                    prec: s.prec,
                })
            }
            _ => panic!("value/ring shape mismatch in neg over {self}"),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (RingKind::Presented(p), Value::Poly(x), Value::Poly(y)) => {
                Value::Poly(merge_maps(&p.base, x, y, true))
            }
            (_, Value::Series(x), Value::Series(y)) => {
                let base = self.base().unwrap();
                let prec = min_prec(x.prec, y.prec);
                let mut terms = merge_maps(base, &x.terms, &y.terms, true);
                if let Some(p) = prec {
                    terms.retain(|e, _| *e < p);
                }
                Value::Series(SeriesValue { terms, prec })
            }
            _ => self.add(a, &self.neg(b)),
        }
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Result<Value> {
        match (&*self.0, a, b) {
            (RingKind::IntegersMod { modulus }, Value::Res(x), Value::Res(y)) => {
                Ok(Value::Res((x * y).mod_floor(modulus)))
            }
            (_, Value::Rat(x), Value::Rat(y)) => Ok(Value::Rat(x * y)),
            (_, Value::Gauss(a1, b1), Value::Gauss(a2, b2)) => {
                Ok(Value::Gauss(a1 * a2 - b1 * b2, a1 * b2 + b1 * a2))
            }
            (RingKind::Presented(p), Value::Poly(x), Value::Poly(y)) => {
                let mut out = PolyMap::new();
                for (m1, c1) in x {
                    for (m2, c2) in y {
                        let m: Monomial = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                        let c = p.base.mul(c1, c2)?;
                        accumulate(&p.base, &mut out, m, c);
                    }
                }
                Ok(self.reduce_poly(out))
            }
            (_, Value::Series(x), Value::Series(y)) => self.mul_series(x, y),
            _ => panic!("value/ring shape mismatch in mul over {self}"),
        }
    }

    /// Multiplication by a base-ring scalar.
    pub fn scale(&self, c: &Value, a: &Value) -> Result<Value> {
        match a {
            Value::Poly(m) => {
                let base = self.base().unwrap();
                let mut out = PolyMap::new();
                for (k, v) in m {
                    let p = base.mul(c, v)?;
                    if !base.is_zero(&p) {
                        out.insert(k.clone(), p);
                    }
                }
                Ok(Value::Poly(out))
            }
            Value::Series(s) => {
                let base = self.base().unwrap();
                let mut terms = BTreeMap::new();
                for (k, v) in &s.terms {
                    let p = base.mul(c, v)?;
                    if !base.is_zero(&p) {
                        terms.insert(*k, p);
                    }
                }
                Ok(Value::Series(SeriesValue { terms, prec: s.prec }))
            }
            _ => self.mul(c, a),
        }
    }

    pub fn pow(&self, a: &Value, n: u32) -> Result<Value> {
        let mut result = self.one();
        let mut base = a.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = self.mul(&result, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// `a^n` for any integer `n`; negative powers need `a` to be a unit.
    pub fn pow_signed(&self, a: &Value, n: i64) -> Result<Value> {
        if n >= 0 {
            self.pow(a, n as u32)
        } else {
            let inv = self.inverse(a)?;
            self.pow(&inv, (-n) as u32)
        }
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        self.inverse(a).is_ok()
    }

    pub fn inverse(&self, a: &Value) -> Result<Value> {
        let not_unit = || Error::NotAUnit(format!("{} in {}", self.format(a), self));
        match (&*self.0, a) {
            (RingKind::Rationals, Value::Rat(x)) => {
                if x.is_zero() {
                    Err(not_unit())
                } else {
                    Ok(Value::Rat(x.recip()))
                }
            }
            (RingKind::Integers { inverted }, Value::Rat(x)) => {
                if x.is_zero() || !strip_factors(x.numer().clone(), inverted).is_one() {
                    Err(not_unit())
                } else {
                    Ok(Value::Rat(x.recip()))
                }
            }
            (RingKind::GaussianRationals, Value::Gauss(x, y)) => {
                let n = x * x + y * y;
                if n.is_zero() {
                    Err(not_unit())
                } else {
                    Ok(Value::Gauss(x / &n, -(y / &n)))
                }
            }
            (RingKind::IntegersMod { modulus }, Value::Res(x)) => {
                let e = x.extended_gcd(modulus);
                if !e.gcd.is_one() {
                    Err(not_unit())
                } else {
                    Ok(Value::Res(e.x.mod_floor(modulus)))
                }
            }
            (RingKind::Presented(_), Value::Poly(_)) => self.inverse_presented(a).ok_or_else(not_unit),
            (_, Value::Series(s)) => self.inverse_series(s),
            _ => panic!("value/ring shape mismatch in inverse over {self}"),
        }
    }

    pub fn div(&self, a: &Value, b: &Value) -> Result<Value> {
        let inv = self.inverse(b)?;
        self.mul(a, &inv)
    }

    // ---------------------------------------------------------------- presented algebras

    fn reduce_poly(&self, mut m: PolyMap) -> Value {
        let p = self.presentation().expect("presented");
        if p.relations.is_empty() {
            return Value::Poly(m);
        }
        loop {
            let target = m.iter().find_map(|(mono, _)| {
                p.relations.iter().find(|r| mono[r.gen] >= r.degree).map(|r| (mono.clone(), r))
            });
            let Some((mono, rel)) = target else { break };
            let c = m.remove(&mono).unwrap();
            let mut rest = mono.clone();
            rest[rel.gen] -= rel.degree;
            for (rm, rc) in &rel.rhs {
                let nm: Monomial = rest.iter().zip(rm).map(|(a, b)| a + b).collect();
                let nc = p.base.mul(&c, rc).expect("scalar multiplication");
                accumulate(&p.base, &mut m, nm, nc);
            }
        }
        Value::Poly(m)
    }

    /// True if `a^k = 0` for some `k <= bound`; returns that `k`.
    pub fn nilpotency_index(&self, a: &Value, bound: u32) -> Option<u32> {
        if self.is_exact_zero(a) {
            return Some(1);
        }
        let mut pw = a.clone();
        for k in 2..=bound {
            pw = self.mul(&pw, a).ok()?;
            if self.is_exact_zero(&pw) {
                return Some(k);
            }
        }
        None
    }

    fn inverse_presented(&self, a: &Value) -> Option<Value> {
        let p = self.presentation().unwrap();
        let Value::Poly(m) = a else { return None };
        let zero_mono = vec![0u32; p.gens.len()];
        let a0 = m.get(&zero_mono).cloned().unwrap_or_else(|| p.base.zero());
        // unit + nilpotent
        if let Ok(a0inv) = p.base.inverse(&a0) {
            let c = self.embed_base(&a0inv).ok()?;
            let normalized = self.mul(a, &c).ok()?;
            let n = self.sub(&self.one(), &normalized);
            if let Some(k) = self.nilpotency_index(&n, 64) {
                let mut sum = self.one();
                let mut pw = self.one();
                for _ in 1..k {
                    pw = self.mul(&pw, &n).ok()?;
                    sum = self.add(&sum, &pw);
                }
                return self.mul(&sum, &c).ok();
            }
        }
        self.inverse_by_linear_algebra(a)
    }

    /// Monomial basis when every generator carries a relation.
    fn finite_basis(&self) -> Option<Vec<Monomial>> {
        let p = self.presentation()?;
        let mut degs = vec![0u32; p.gens.len()];
        for r in &p.relations {
            degs[r.gen] = r.degree;
        }
        if degs.iter().any(|&d| d == 0) {
            return None;
        }
        let mut basis = vec![vec![]];
        for d in degs {
            let mut next = Vec::new();
            for b in &basis {
                for e in 0..d {
                    let mut nb: Vec<u32> = b.clone();
                    nb.push(e);
                    next.push(nb);
                }
            }
            basis = next;
        }
        Some(basis)
    }

    /// Solves `a * b = 1` over the fraction field of the base, then checks that
    /// `b` has coefficients in the base.
    fn inverse_by_linear_algebra(&self, a: &Value) -> Option<Value> {
        let p = self.presentation()?;
        let basis = self.finite_basis()?;
        let field = match p.base.kind() {
            RingKind::Rationals | RingKind::Integers { .. } => Ring::rationals(),
            RingKind::GaussianRationals => Ring::gaussian(),
            RingKind::IntegersMod { modulus } => {
                if !is_prime(modulus) {
                    return None;
                }
                p.base.clone()
            }
            _ => return None,
        };
        let to_field = |v: &Value| -> Value {
            match v {
                Value::Rat(r) => field.from_rational(r).unwrap(),
                other => other.clone(),
            }
        };
        let n = basis.len();
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        // column j = a * basis_j
        let mut mat = vec![vec![field.zero(); n + 1]; n];
        for (j, bm) in basis.iter().enumerate() {
            let mut single = PolyMap::new();
            single.insert(bm.clone(), p.base.one());
            let prod = self.mul(a, &Value::Poly(single)).ok()?;
            let Value::Poly(pm) = prod else { return None };
            for (mono, c) in pm {
                let i = *index.get(&mono)?;
                mat[i][j] = to_field(&c);
            }
        }
        let one_idx = *index.get(&vec![0u32; p.gens.len()])?;
        mat[one_idx][n] = field.one();
        let sol = solve_linear(&field, mat)?;
        let mut out = PolyMap::new();
        for (i, v) in sol.into_iter().enumerate() {
            if field.is_zero(&v) {
                continue;
            }
            let bv = match (&v, p.base.kind()) {
                (Value::Rat(r), RingKind::Integers { .. }) => p.base.from_rational(r).ok()?,
                _ => v,
            };
            out.insert(basis[i].clone(), bv);
        }
        Some(Value::Poly(out))
    }

    // ---------------------------------------------------------------- series

    pub(crate) fn norm_series(&self, mut terms: BTreeMap<i64, Value>, prec: Option<i64>) -> Result<Value> {
        let base = self.base().unwrap();
        let cap = self.series_cap().unwrap();
        let floor = self.series_floor().unwrap();
        let mut prec = prec.map(|p| p.min(cap));
        if prec.is_none() && terms.keys().next_back().is_some_and(|&e| e >= cap) {
            prec = Some(cap);
        }
        terms.retain(|e, v| !base.is_zero(v) && prec.map_or(true, |p| *e < p));
        if let Some((&e, _)) = terms.iter().next() {
            if e < floor {
                return Err(Error::TailOverflow { exponent: e, tail: (-floor) as u32 });
            }
        }
        if let Some(p) = prec {
            if p < floor {
                return Err(Error::InsufficientPrecision(format!(
                    "precision O({}^{p}) lies below the ring's tail",
                    self.series_var().unwrap()
                )));
            }
        }
        Ok(Value::Series(SeriesValue { terms, prec }))
    }

    /// Lowest exponent with a known nonzero coefficient.
    pub fn valuation(&self, a: &Value) -> Option<i64> {
        match a {
            Value::Series(s) => s.terms.keys().next().copied(),
            _ => None,
        }
    }

    fn mul_series(&self, x: &SeriesValue, y: &SeriesValue) -> Result<Value> {
        let base = self.base().unwrap();
        let cap = self.series_cap().unwrap();
        if (x.terms.is_empty() && x.prec.is_none()) || (y.terms.is_empty() && y.prec.is_none()) {
            return Ok(self.zero());
        }
        let vx = x.terms.keys().next().copied().or(x.prec).unwrap();
        let vy = y.terms.keys().next().copied().or(y.prec).unwrap();
        let mut prec = min_prec(x.prec.map(|p| p + vy), y.prec.map(|p| p + vx));
        let bound = prec.map_or(cap, |p| p.min(cap));
        let mut out: BTreeMap<i64, Value> = BTreeMap::new();
        let mut overflowed = false;
        for (e1, c1) in &x.terms {
            for (e2, c2) in &y.terms {
                let e = e1 + e2;
                if e >= bound {
                    if e >= cap {
                        overflowed = true;
                    }
                    break;
                }
                let c = base.mul(c1, c2)?;
                match out.get_mut(&e) {
                    Some(v) => *v = base.add(v, &c),
                    None => {
                        out.insert(e, c);
                    }
                }
            }
        }
        if overflowed && prec.map_or(true, |p| p > cap) {
            prec = Some(cap);
        }
        self.norm_series(out, prec)
    }

    fn inverse_series(&self, s: &SeriesValue) -> Result<Value> {
        let base = self.base().unwrap();
        let cap = self.series_cap().unwrap();
        let Some((&v, c)) = s.terms.iter().next() else {
            return Err(Error::NotAUnit(format!("zero series in {self}")));
        };
        if matches!(&*self.0, RingKind::PowerSeries { .. }) && v != 0 {
            return Err(Error::NotAUnit(format!("series with zero constant term in {self}")));
        }
        let cinv = base
            .inverse(c)
            .map_err(|_| Error::NotAUnit(format!("leading coefficient {} in {self}", base.format(c))))?;
        let floor = self.series_floor().unwrap();
        if -v < floor {
            return Err(Error::TailOverflow { exponent: -v, tail: (-floor) as u32 });
        }
        if s.terms.len() == 1 && s.prec.is_none() {
            let mut t = BTreeMap::new();
            t.insert(-v, cinv);
            return self.norm_series(t, None);
        }
        // number of correct coefficients of the normalized inverse
        let rel = s.prec.map(|p| p - v);
        let n = match rel {
            Some(r) => r.min(cap + v),
            None => cap + v,
        };
        if n <= 0 {
            return self.norm_series(BTreeMap::new(), Some(-v + n.max(0)));
        }
        let n = n as usize;
        let mut u = vec![base.zero(); n];
        for (e, coef) in &s.terms {
            let i = e - v;
            if (i as usize) < n {
                u[i as usize] = base.mul(coef, &cinv)?;
            }
        }
        let mut b = vec![base.zero(); n];
        b[0] = base.one();
        for k in 1..n {
            let mut acc = base.zero();
            for i in 1..=k {
                if base.is_zero(&u[i]) {
                    continue;
                }
                acc = base.add(&acc, &base.mul(&u[i], &b[k - i])?);
            }
            b[k] = base.neg(&acc);
        }
        let mut terms = BTreeMap::new();
        for (k, bk) in b.into_iter().enumerate() {
            if !base.is_zero(&bk) {
                terms.insert(k as i64 - v, base.mul(&bk, &cinv)?);
            }
        }
        self.norm_series(terms, Some(-v + n as i64))
    }

    /// Coefficient of `var^e` of a series element; errors if beyond precision.
    pub fn series_coeff(&self, a: &Value, e: i64) -> Result<Value> {
        let base = self.base().ok_or_else(|| Error::InvalidInput("not a series ring".into()))?;
        let Value::Series(s) = a else {
            return Err(Error::InvalidInput("not a series value".into()));
        };
        if let Some(p) = s.prec {
            if e >= p {
                return Err(Error::InsufficientPrecision(format!(
                    "coefficient of {}^{e} is beyond O({}^{p})",
                    self.series_var().unwrap(),
                    self.series_var().unwrap()
                )));
            }
        }
        Ok(s.terms.get(&e).cloned().unwrap_or_else(|| base.zero()))
    }

    /// Drops every coefficient at exponent above `order` (for power series rings:
    /// at or above `order`) and lowers precision accordingly.
    pub fn truncate_series(&self, a: &Value, cap: i64) -> Result<Value> {
        let Value::Series(s) = a else {
            return Ok(a.clone());
        };
        let mut terms = s.terms.clone();
        let had_higher = terms.keys().next_back().is_some_and(|&e| e >= cap);
        terms.retain(|e, _| *e < cap);
        let prec = match s.prec {
            Some(p) => Some(p.min(cap)),
            None if had_higher => Some(cap),
            None => None,
        };
        self.norm_series(terms, prec)
    }

    /// Maps `a`, an element of `from`, into `self` where this is a natural map:
    /// identical rings, subring embeddings, and series rings that differ only in
    /// their truncation bounds.
    pub fn coerce(&self, from: &Ring, a: &Value) -> Result<Value> {
        if self == from {
            return Ok(a.clone());
        }
        match (&*self.0, &*from.0, a) {
            (RingKind::Rationals, RingKind::Integers { .. }, Value::Rat(r)) => Ok(Value::Rat(r.clone())),
            (RingKind::Integers { .. }, RingKind::Integers { .. }, Value::Rat(r)) => self.from_rational(r),
            (RingKind::GaussianRationals, RingKind::Rationals | RingKind::Integers { .. }, Value::Rat(r)) => {
                Ok(Value::Gauss(r.clone(), BigRational::zero()))
            }
            (RingKind::IntegersMod { .. }, RingKind::Integers { .. }, Value::Rat(r)) => self.from_rational(r),
            (RingKind::Presented(p), RingKind::Presented(q), Value::Poly(m)) if p.gens == q.gens => {
                let mut out = PolyMap::new();
                for (k, v) in m {
                    let c = p.base.coerce(&q.base, v)?;
                    accumulate(&p.base, &mut out, k.clone(), c);
                }
                Ok(self.reduce_poly(out))
            }
            (
                RingKind::PowerSeries { base: b1, var: v1, .. } | RingKind::Laurent { base: b1, var: v1, .. },
                RingKind::PowerSeries { base: b2, var: v2, .. } | RingKind::Laurent { base: b2, var: v2, .. },
                Value::Series(s),
            ) if v1 == v2 => {
                let mut terms = BTreeMap::new();
                for (e, c) in &s.terms {
                    terms.insert(*e, b1.coerce(b2, c)?);
                }
                self.norm_series(terms, s.prec)
            }
            _ => {
                if let Some(base) = self.base() {
                    if let Ok(c) = base.coerce(from, a) {
                        return self.embed_base(&c);
                    }
                }
                Err(Error::RingMismatch(format!("cannot map {from} into {self}")))
            }
        }
    }
}

fn merge_maps<K: Ord + Clone>(
    base: &Ring,
    x: &BTreeMap<K, Value>,
    y: &BTreeMap<K, Value>,
    subtract: bool,
) -> BTreeMap<K, Value> {
    let mut out = x.clone();
    for (k, v) in y {
        let v = if subtract { base.neg(v) } else { v.clone() };
        match out.get_mut(k) {
            Some(cur) => {
                let s = base.add(cur, &v);
                if base.is_zero(&s) && base.is_exact_zero(&s) {
                    out.remove(k);
                } else {
                    *cur = s;
                }
            }
            None => {
                out.insert(k.clone(), v);
            }
        }
    }
    out.retain(|_, v| !base.is_exact_zero(v));
    out
}

fn accumulate(base: &Ring, out: &mut PolyMap, m: Monomial, c: Value) {
    match out.get_mut(&m) {
        Some(cur) => {
            let s = base.add(cur, &c);
            if base.is_zero(&s) {
                out.remove(&m);
            } else {
                *cur = s;
            }
        }
        None => {
            if !base.is_zero(&c) {
                out.insert(m, c);
            }
        }
    }
}

fn is_prime(n: &BigInt) -> bool {
    if n < &BigInt::from(2) {
        return false;
    }
    let mut d = BigInt::from(2);
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            return false;
        }
        d += 1;
    }
    true
}

/// Gauss-Jordan elimination on an augmented `n x (n+1)` matrix over a field.
fn solve_linear(field: &Ring, mut m: Vec<Vec<Value>>) -> Option<Vec<Value>> {
    let n = m.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !field.is_zero(&m[r][col]))?;
        m.swap(col, pivot);
        let inv = field.inverse(&m[col][col]).ok()?;
        for j in col..=n {
            m[col][j] = field.mul(&m[col][j], &inv).ok()?;
        }
        for r in 0..n {
            if r == col || field.is_zero(&m[r][col]) {
                continue;
            }
            let f = m[r][col].clone();
            for j in col..=n {
                let t = field.mul(&f, &m[col][j]).ok()?;
                m[r][j] = field.sub(&m[r][j], &t);
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.descriptor())
    }
}
