use std::collections::BTreeMap;
use std::fmt;

use crate::coefficients::{join_terms, Ring, Value};
use crate::error::{Error, Result};

/// Truncation orders for sigma: coefficients of `L^e` for `|e| <= lbound`,
/// each known through `q^qorder`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SigmaOrders {
    pub qorder: i64,
    pub lbound: i64,
}

/// A Laurent polynomial in `L` with coefficients in a `q`-series ring.
#[derive(Clone, Debug)]
pub struct LaurentPoly {
    ring: Ring,
    terms: BTreeMap<i64, Value>,
}

impl LaurentPoly {
    pub fn new(ring: &Ring, terms: BTreeMap<i64, Value>) -> LaurentPoly {
        let mut terms = terms;
        terms.retain(|_, v| !ring.is_exact_zero(v));
        LaurentPoly { ring: ring.clone(), terms }
    }

    pub fn constant(ring: &Ring, c: Value) -> LaurentPoly {
        LaurentPoly::new(ring, BTreeMap::from([(0, c)]))
    }

    /// `c * L^e`.
    pub fn monomial(ring: &Ring, c: Value, e: i64) -> LaurentPoly {
        LaurentPoly::new(ring, BTreeMap::from([(e, c)]))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn terms(&self) -> &BTreeMap<i64, Value> {
        &self.terms
    }

    pub fn coeff(&self, e: i64) -> Value {
        self.terms.get(&e).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn add(&self, other: &LaurentPoly) -> LaurentPoly {
        let mut t = self.terms.clone();
        for (e, c) in &other.terms {
            let v = t.get(e).map_or_else(|| c.clone(), |cur| self.ring.add(cur, c));
            t.insert(*e, v);
        }
        LaurentPoly::new(&self.ring, t)
    }

    pub fn sub(&self, other: &LaurentPoly) -> LaurentPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> LaurentPoly {
        let t = self.terms.iter().map(|(e, c)| (*e, self.ring.neg(c))).collect();
        LaurentPoly::new(&self.ring, t)
    }

    pub fn mul(&self, other: &LaurentPoly) -> Result<LaurentPoly> {
        let mut t: BTreeMap<i64, Value> = BTreeMap::new();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let c = self.ring.mul(c1, c2)?;
                let v = match t.get(&(e1 + e2)) {
                    Some(cur) => self.ring.add(cur, &c),
                    None => c,
                };
                t.insert(e1 + e2, v);
            }
        }
        Ok(LaurentPoly::new(&self.ring, t))
    }

    pub fn scale(&self, c: &Value) -> Result<LaurentPoly> {
        let mut t = BTreeMap::new();
        for (e, v) in &self.terms {
            t.insert(*e, self.ring.mul(c, v)?);
        }
        Ok(LaurentPoly::new(&self.ring, t))
    }

    /// Multiplies by `L^f`.
    pub fn shift(&self, f: i64) -> LaurentPoly {
        let t = self.terms.iter().map(|(e, c)| (e + f, c.clone())).collect();
        LaurentPoly::new(&self.ring, t)
    }

    /// Substitutes `L -> q^s L`, with `q` the series variable of the coefficients.
    pub fn rescale_l(&self, s: i64) -> Result<LaurentPoly> {
        let mut t = BTreeMap::new();
        for (e, c) in &self.terms {
            let m = self.ring.monomial(&self.ring.base().unwrap().one(), e * s)?;
            t.insert(*e, self.ring.mul(&m, c)?);
        }
        Ok(LaurentPoly::new(&self.ring, t))
    }

    /// Value at `L = 1`.
    pub fn at_one(&self) -> Value {
        self.terms.values().fold(self.ring.zero(), |acc, c| self.ring.add(&acc, c))
    }

    /// Coefficientwise equality where both sides are known.
    pub fn eq(&self, other: &LaurentPoly) -> bool {
        let d = self.sub(other);
        d.terms.values().all(|c| self.ring.is_zero(c))
    }

    /// Agreement of every `L^e` coefficient with `|e| <= orders.lbound` through
    /// `q^orders.qorder`; `InsufficientPrecision` if either side is known to less.
    pub fn agrees_to(&self, other: &LaurentPoly, orders: SigmaOrders) -> Result<bool> {
        for e in -orders.lbound..=orders.lbound {
            let (a, b) = (self.coeff(e), other.coeff(e));
            for v in [&a, &b] {
                if let Value::Series(s) = v {
                    if s.prec.is_some_and(|p| p <= orders.qorder) {
                        return Err(Error::InsufficientPrecision(format!(
                            "coefficient of L^{e} known only to O(q^{})",
                            s.prec.unwrap()
                        )));
                    }
                }
            }
            for k in self.ring.series_floor().unwrap()..=orders.qorder {
                let ca = self.ring.series_coeff(&a, k)?;
                let cb = self.ring.series_coeff(&b, k)?;
                if !self.ring.base().unwrap().eq(&ca, &cb) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<(String, String)> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = match e {
                    0 => String::new(),
                    1 => "L".to_string(),
                    _ => format!("L^{e}"),
                };
                (self.ring.format(c), mono)
            })
            .collect();
        write!(f, "{}", join_terms(parts))
    }
}

/// The `q`-Laurent coefficient ring used for sigma at the given orders; the
/// tail leaves room for `q^{-e}` shifts with `|e|` up to `tail`.
pub fn sigma_ring(qorder: i64, tail: u32) -> Result<Ring> {
    Ring::laurent(&Ring::rationals(), "q", qorder, tail)
}

/// `(1 - L) prod_{k>0} (1 - q^k L)(1 - q^k/L) / (1 - q^k)^2` over `ring`, a
/// `q`-series ring; factors with `q^k` beyond the ring's order are 1.
pub fn sigma(ring: &Ring) -> Result<LaurentPoly> {
    let cap = ring.series_cap().ok_or_else(|| Error::InvalidInput(format!("{ring} is not a series ring")))?;
    let one = ring.one();
    let mut acc = LaurentPoly::new(ring, BTreeMap::from([(0, one.clone()), (1, ring.neg(&one))]));
    for k in 1..cap {
        let qk = ring.monomial(&ring.base().unwrap().one(), k)?;
        let mq = ring.neg(&qk);
        let a = LaurentPoly::new(ring, BTreeMap::from([(0, one.clone()), (1, mq.clone())]));
        let b = LaurentPoly::new(ring, BTreeMap::from([(0, one.clone()), (-1, mq.clone())]));
        let d = ring.inverse(&ring.pow(&ring.add(&one, &mq), 2)?)?;
        acc = acc.mul(&a)?.mul(&b)?.scale(&d)?;
    }
    Ok(acc)
}

/// `floor(r)` for an exact rational.
pub fn flat(r: &num_rational::BigRational) -> i64 {
    use num_traits::ToPrimitive;
    r.floor().to_integer().to_i64().expect("integer part fits in i64")
}

/// `sigma[L, r] = q^{-f(f+1)/2} (-L)^f sigma(L)` with `f = floor(r)`.
pub fn sigma_modified(sigma: &LaurentPoly, f: i64) -> Result<LaurentPoly> {
    let ring = sigma.ring();
    let base_one = ring.base().unwrap().one();
    let sign = if f.rem_euclid(2) == 0 { base_one.clone() } else { ring.base().unwrap().neg(&base_one) };
    let c = ring.monomial(&sign, -f * (f + 1) / 2)?;
    sigma.shift(f).scale(&c)
}

/// Compares `sigma(qL)` with `(-L)^{-1} sigma(L)` on the declared orders,
/// expanding with enough guard orders that every compared coefficient is known.
pub fn functional_equation_check(orders: SigmaOrders) -> Result<bool> {
    let work = orders.qorder + orders.lbound + 1;
    let ring = sigma_ring(work, (2 * work + 4) as u32)?;
    let s = sigma(&ring)?;
    let lhs = s.rescale_l(1)?;
    let rhs = s.shift(-1).neg();
    lhs.agrees_to(&rhs, orders)
}

/// Compares `sigma[qL, r + 1]` with `sigma[L, r]` on the declared orders.
pub fn modified_identity_check(r: &num_rational::BigRational, orders: SigmaOrders) -> Result<bool> {
    let f = flat(r);
    let loss = [f, f + 1].iter().map(|g| (g * (g + 1) / 2).max(0)).max().unwrap();
    let work = orders.qorder + orders.lbound + loss + 1;
    let ring = sigma_ring(work, (2 * work + 4 + loss) as u32)?;
    let s = sigma(&ring)?;
    let lhs = sigma_modified(&s, f + 1)?.rescale_l(1)?;
    let rhs = sigma_modified(&s, f)?;
    lhs.agrees_to(&rhs, orders)
}
