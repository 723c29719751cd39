//! JSON documents for series, ring elements and check results.

use serde::{Deserialize, Serialize};
use tatefgl::{MultiSeries, Ring, SeriesSpace, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub exponents: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub vars: Vec<String>,
    pub trunc: u32,
    pub coeff_ring: String,
    pub terms: Vec<Term>,
}

impl SeriesDocument {
    pub fn from_series(s: &MultiSeries) -> SeriesDocument {
        let ring = s.ring();
        SeriesDocument {
            vars: s.space().vars().to_vec(),
            trunc: s.trunc(),
            coeff_ring: ring.descriptor(),
            terms: s
                .terms()
                .iter()
                .map(|(m, c)| Term { exponents: m.clone(), coeff: ring.format(c) })
                .collect(),
        }
    }

    pub fn to_series(&self) -> tatefgl::Result<MultiSeries> {
        let ring: Ring = self.coeff_ring.parse()?;
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        let space = SeriesSpace::new(&ring, &vars, self.trunc)?;
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push((t.exponents.clone(), ring.parse(&t.coeff)?));
        }
        space.from_terms(terms)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValueDocument {
    pub ring: String,
    pub value: String,
}

impl ValueDocument {
    pub fn new(ring: &Ring, v: &Value) -> ValueDocument {
        ValueDocument { ring: ring.descriptor(), value: ring.format(v) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckDocument {
    pub check: String,
    pub passed: bool,
    pub details: Vec<String>,
}
