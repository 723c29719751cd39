//! Exact coefficient rings: rationals, Gaussian rationals, localized integers,
//! residues, finitely presented algebras and truncated power/Laurent series.

mod ring;
mod text;


use std::fmt;

pub use ring::{Monomial, PolyMap, Presentation, Relation, Ring, RingKind, SeriesValue, Value};
pub(crate) use text::{join_terms, parse_expression, resolve_ident, ExprTarget};

use crate::error::{Error, Result};

/// A value paired with the ring it lives in.
#[derive(Clone, Debug)]
pub struct Elem {
    ring: Ring,
    value: Value,
}

impl Elem {
    pub fn new(ring: &Ring, value: Value) -> Elem {
        Elem { ring: ring.clone(), value }
    }

    pub fn parse(ring: &Ring, text: &str) -> Result<Elem> {
        Ok(Elem::new(ring, ring.parse(text)?))
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    fn check(&self, other: &Elem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::RingMismatch(format!("{} vs {}", self.ring, other.ring)))
        }
    }

    pub fn add(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(Elem::new(&self.ring, self.ring.add(&self.value, &other.value)))
    }

    pub fn sub(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(Elem::new(&self.ring, self.ring.sub(&self.value, &other.value)))
    }

    pub fn mul(&self, other: &Elem) -> Result<Elem> {
        self.check(other)?;
        Ok(Elem::new(&self.ring, self.ring.mul(&self.value, &other.value)?))
    }

    pub fn neg(&self) -> Elem {
        Elem::new(&self.ring, self.ring.neg(&self.value))
    }

    pub fn inverse(&self) -> Result<Elem> {
        Ok(Elem::new(&self.ring, self.ring.inverse(&self.value)?))
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.value)
    }
}

impl PartialEq for Elem {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.ring.eq(&self.value, &other.value)
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format(&self.value))
    }
}
