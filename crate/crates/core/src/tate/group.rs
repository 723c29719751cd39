use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::coefficients::{Ring, Value};
use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;

use super::sigma::flat;

/// A point `(g, a)` with `g` nilpotent and `0 <= a < 1`.
#[derive(Clone, Debug)]
pub struct TatePoint {
    pub g: Value,
    pub a: BigRational,
}

/// The extension group of a law over a test ring `A` with a chosen `qhat`.
#[derive(Clone, Debug)]
pub struct TateGroup {
    law: FormalGroupLaw,
    ring: Ring,
    qhat: Value,
}

/// Failures found by [`TateGroup::exact_sequence_check`]; empty when it passes.
#[derive(Clone, Debug, Default)]
pub struct ExactSequenceReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl ExactSequenceReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn frac(a: &BigRational) -> BigRational {
    a - a.floor()
}

impl TateGroup {
    /// `law` is mapped into `ring`; `qhat` must be nilpotent there.
    pub fn new(law: &FormalGroupLaw, ring: &Ring, qhat: Value) -> Result<TateGroup> {
        let law = law.change_ring(ring)?;
        let g = TateGroup { law, ring: ring.clone(), qhat };
        g.check_nilpotent(&g.qhat)?;
        Ok(g)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn qhat(&self) -> &Value {
        &self.qhat
    }
    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }

    fn check_nilpotent(&self, g: &Value) -> Result<()> {
        if self.ring.is_zero(g) || self.ring.nilpotency_index(g, 64).is_some() {
            Ok(())
        } else {
            Err(Error::NotNilpotent(format!("{} in {}", self.ring.format(g), self.ring)))
        }
    }

    pub fn point(&self, g: Value, a: BigRational) -> Result<TatePoint> {
        if a < BigRational::zero() || a >= BigRational::one() {
            return Err(Error::InvalidInput(format!("rational part {a} outside [0, 1)")));
        }
        self.check_nilpotent(&g)?;
        Ok(TatePoint { g, a })
    }

    pub fn parse_point(&self, g: &str, a: &str) -> Result<TatePoint> {
        let a: BigRational = a.parse().map_err(|_| Error::Parse(format!("bad rational {a}")))?;
        self.point(self.ring.parse(g)?, a)
    }

    pub fn identity(&self) -> TatePoint {
        TatePoint { g: self.ring.zero(), a: BigRational::zero() }
    }

    fn add(&self, a: &Value, b: &Value) -> Result<Value> {
        self.law.sum_elements(&self.ring, a, b)
    }

    fn minus(&self, a: &Value, b: &Value) -> Result<Value> {
        self.add(a, &self.law.inverse_element(&self.ring, b)?)
    }

    fn n_qhat(&self, n: i64) -> Result<Value> {
        self.law.n_element(&self.ring, n, &self.qhat)
    }

    pub fn mul(&self, p: &TatePoint, q: &TatePoint) -> Result<TatePoint> {
        let g = self.add(&p.g, &q.g)?;
        let a = &p.a + &q.a;
        if a >= BigRational::one() {
            Ok(TatePoint { g: self.minus(&g, &self.qhat)?, a: a - BigRational::one() })
        } else {
            Ok(TatePoint { g, a })
        }
    }

    pub fn inv(&self, p: &TatePoint) -> Result<TatePoint> {
        let ig = self.law.inverse_element(&self.ring, &p.g)?;
        if p.a.is_zero() {
            Ok(TatePoint { g: ig, a: p.a.clone() })
        } else {
            Ok(TatePoint { g: self.add(&ig, &self.qhat)?, a: BigRational::one() - &p.a })
        }
    }

    pub fn eq(&self, p: &TatePoint, q: &TatePoint) -> bool {
        p.a == q.a && self.ring.eq(&p.g, &q.g)
    }

    pub fn format_point(&self, p: &TatePoint) -> String {
        format!("({}, {})", self.ring.format(&p.g), p.a)
    }

    pub fn is_identity(&self, p: &TatePoint) -> bool {
        self.eq(p, &self.identity())
    }

    /// Least `n <= bound` with `p^n` the identity.
    pub fn torsion_order(&self, p: &TatePoint, bound: u32) -> Result<Option<u32>> {
        let mut acc = p.clone();
        for n in 1..=bound {
            if self.is_identity(&acc) {
                return Ok(Some(n));
            }
            acc = self.mul(&acc, p)?;
        }
        Ok(None)
    }

    /// `(x, a) -> (x -_F [floor a](qhat), frac a)`.
    pub fn from_pair(&self, x: &Value, a: &BigRational) -> Result<TatePoint> {
        let f = flat(a);
        Ok(TatePoint { g: self.minus(x, &self.n_qhat(f)?)?, a: frac(a) })
    }

    /// Checks on all samples and pairs of samples: the map from `F(A) x Q` is a
    /// homomorphism, hits every sampled point, kills `([n]qhat, n)`, and the
    /// projection to `F(A)` is additive modulo multiples of `qhat`.
    pub fn exact_sequence_check(&self, samples: &[(Value, BigRational)]) -> Result<ExactSequenceReport> {
        let mut rep = ExactSequenceReport::default();
        let r = &self.ring;
        for (x, a) in samples {
            for (y, b) in samples {
                rep.checked += 1;
                let lhs = self.from_pair(&self.add(x, y)?, &(a + b))?;
                let rhs = self.mul(&self.from_pair(x, a)?, &self.from_pair(y, b)?)?;
                if !self.eq(&lhs, &rhs) {
                    rep.failures.push(format!("not additive at ({}, {a}), ({}, {b})", r.format(x), r.format(y)));
                }
            }
        }
        for (x, a) in samples {
            rep.checked += 1;
            let p = self.from_pair(x, a)?;
            let lift = (self.add(&p.g, &self.qhat)?, &p.a + BigRational::one());
            if !self.eq(&self.from_pair(&lift.0, &lift.1)?, &p) {
                rep.failures.push(format!("no preimage found for ({}, {})", r.format(&p.g), p.a));
            }
        }
        for n in -3..=3i64 {
            rep.checked += 1;
            let p = self.from_pair(&self.n_qhat(n)?, &BigRational::from_integer(BigInt::from(n)))?;
            if !self.is_identity(&p) {
                rep.failures.push(format!("([{n}]qhat, {n}) maps to ({}, {})", r.format(&p.g), p.a));
            }
        }
        let multiples: Vec<Value> = (-2..=2).map(|m| self.n_qhat(m)).collect::<Result<_>>()?;
        for (x, a) in samples {
            for (y, b) in samples {
                rep.checked += 1;
                let (p, q) = (self.from_pair(x, a)?, self.from_pair(y, b)?);
                let pq = self.mul(&p, &q)?;
                let d = self.minus(&pq.g, &self.add(&p.g, &q.g)?)?;
                if !multiples.iter().any(|m| r.eq(m, &d)) {
                    rep.failures.push(format!("projection defect {} is not a multiple of qhat", r.format(&d)));
                }
            }
        }
        Ok(rep)
    }
}
