//! Lubin's quotient of a formal group law by a finite subgroup of points.

use num_bigint::BigInt;
use num_integer::Integer;

use crate::coefficients::{Presentation, Ring, RingKind, Value};
use crate::error::{Error, Result};
use crate::fgl::{evaluate, x_space, FormalGroupLaw};
use crate::polyseries::MultiSeries;

/// A finite set of points of a test ring, containing zero.
#[derive(Clone, Debug)]
pub struct SubgroupPoints {
    ring: Ring,
    points: Vec<Value>,
}

/// Result of [`subgroup_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Closure {
    Closed,
    /// `a +_F b` is not among the points.
    Sum(Value, Value),
    /// `iota(a)` is not among the points.
    Inverse(Value),
}

impl Closure {
    pub fn is_closed(&self) -> bool {
        matches!(self, Closure::Closed)
    }
}

impl SubgroupPoints {
    pub fn new(ring: &Ring, points: Vec<Value>) -> Result<SubgroupPoints> {
        if !points.iter().any(|p| ring.is_zero(p)) {
            return Err(Error::InvalidInput("a subgroup must contain 0".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if points[..i].iter().any(|q| ring.eq(p, q)) {
                return Err(Error::InvalidInput(format!("repeated point {}", ring.format(p))));
            }
        }
        Ok(SubgroupPoints { ring: ring.clone(), points })
    }

    pub fn parse(ring: &Ring, points: &[&str]) -> Result<SubgroupPoints> {
        let vals = points.iter().map(|p| ring.parse(p)).collect::<Result<Vec<_>>>()?;
        SubgroupPoints::new(ring, vals)
    }

    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn points(&self) -> &[Value] {
        &self.points
    }
    pub fn len(&self) -> usize {
        self.points.len()
    }
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    fn contains(&self, v: &Value) -> bool {
        self.points.iter().any(|p| self.ring.eq(p, v))
    }

    /// The same points in `ring`, which must receive a natural map from the ambient ring.
    pub fn map_to(&self, ring: &Ring) -> Result<SubgroupPoints> {
        let pts = self.points.iter().map(|p| ring.coerce(&self.ring, p)).collect::<Result<Vec<_>>>()?;
        Ok(SubgroupPoints { ring: ring.clone(), points: pts })
    }
}

/// Checks closure under `+_F` and `iota` exactly.
pub fn subgroup_check(f: &FormalGroupLaw, h: &SubgroupPoints) -> Result<Closure> {
    let r = &h.ring;
    for a in &h.points {
        for b in &h.points {
            let s = f.sum_elements(r, a, b)?;
            if !h.contains(&s) {
                return Ok(Closure::Sum(a.clone(), b.clone()));
            }
        }
        let inv = f.inverse_element(r, a)?;
        if !h.contains(&inv) {
            return Ok(Closure::Inverse(a.clone()));
        }
    }
    Ok(Closure::Closed)
}

/// `f_H(x) = prod_{h in H} (x +_F h)` over the ambient ring.
pub fn lubin_f(f: &FormalGroupLaw, h: &SubgroupPoints, trunc: u32) -> Result<MultiSeries> {
    if !subgroup_check(f, h)?.is_closed() {
        return Err(Error::InvalidInput("points are not closed under the group law".into()));
    }
    lubin_product(f, h, trunc)
}

fn lubin_product(f: &FormalGroupLaw, h: &SubgroupPoints, trunc: u32) -> Result<MultiSeries> {
    let s = x_space(&h.ring, trunc)?;
    let x = s.var("x")?;
    let mut acc = s.one();
    for p in &h.points {
        let factor = f.sum(&x, &s.constant(p.clone()))?;
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// True when `f_H(h) = 0` for every point.
pub fn kernel_property(f: &FormalGroupLaw, h: &SubgroupPoints, fh: &MultiSeries) -> Result<bool> {
    let s = crate::polyseries::SeriesSpace::new(&h.ring, &[], 0)?;
    for p in &h.points {
        let arg = s.constant(p.clone());
        let v = evaluate(fh, f.is_exact(), &[&arg], &s)?.constant_term();
        if !h.ring.is_zero(&v) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ring` with the integer `n` inverted in its base.
pub fn localize(ring: &Ring, n: i64) -> Result<Ring> {
    match ring.kind() {
        RingKind::Rationals | RingKind::GaussianRationals => Ok(ring.clone()),
        RingKind::Integers { inverted } => Ring::new(RingKind::Integers { inverted: inverted.lcm(&BigInt::from(n)) }),
        RingKind::Presented(p) => {
            let base = localize(&p.base, n)?;
            let mut relations = Vec::new();
            for rel in &p.relations {
                let mut rel = rel.clone();
                for c in rel.rhs.values_mut() {
                    *c = base.coerce(&p.base, c)?;
                }
                relations.push(rel);
            }
            Ring::new(RingKind::Presented(Presentation { base, gens: p.gens.clone(), relations }))
        }
        _ => Err(Error::InvalidInput(format!("cannot invert {n} in {ring}"))),
    }
}

/// The strict normalization `g_H = f_H / f_H'(0)`.
#[derive(Clone, Debug)]
pub struct LubinG {
    pub g: MultiSeries,
    pub leading: Value,
    /// Ring over which `g` is defined (the ambient ring, localized if requested).
    pub ring: Ring,
}

/// Computes `g_H`; `invert` names an integer to invert in the ambient base
/// ring first. Without it the leading coefficient must already be a unit.
pub fn lubin_g(f: &FormalGroupLaw, h: &SubgroupPoints, invert: Option<i64>, trunc: u32) -> Result<LubinG> {
    let ring = match invert {
        Some(n) => localize(&h.ring, n)?,
        None => h.ring.clone(),
    };
    let h = h.map_to(&ring)?;
    let fh = lubin_f(f, &h, trunc)?;
    let leading = fh.coefficient(&[1])?;
    let inv = ring.inverse(&leading).map_err(|_| {
        Error::NotAUnit(format!("f_H'(0) = {} in {}", ring.format(&leading), ring))
    })?;
    Ok(LubinG { g: fh.scale(&inv)?, leading, ring })
}

/// The quotient law `F/H` with the isogeny `f_H: F -> F/H`.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub law: FormalGroupLaw,
    pub f: MultiSeries,
    pub g: LubinG,
}

impl Quotient {
    /// `F/H(f(x), f(y)) - f(F(x, y))`, which vanishes up to the truncation.
    pub fn homomorphism_defect(&self, source: &FormalGroupLaw) -> Result<MultiSeries> {
        let src = source.change_ring(&self.g.ring)?.with_trunc(self.law.trunc())?;
        let s = src.law().space().clone();
        let fx = self.f.substitute_polynomial(&[("x", &s.var("x")?)], &s)?;
        let fy = self.f.substitute_polynomial(&[("x", &s.var("y")?)], &s)?;
        let lhs = self.law.sum(&fx, &fy)?;
        let rhs = evaluate(&self.f, true, &[src.law()], &s)?;
        lhs.sub(&rhs)
    }
}

/// `F/H`, by transport along `g_H` followed by conjugation with `t(x) = f_H'(0) x`.
pub fn quotient_law(f: &FormalGroupLaw, h: &SubgroupPoints, invert: Option<i64>, trunc: u32) -> Result<Quotient> {
    let g = lubin_g(f, h, invert, trunc)?;
    let fl = f.change_ring(&g.ring)?.with_trunc(trunc)?;
    let (gl, _) = fl.transport(&g.g)?;
    let t = x_space(&g.ring, trunc)?.var("x")?.scale(&g.leading)?;
    let (law, _) = gl.transport(&t)?;
    let fpoly = g.g.scale(&g.leading)?;
    Ok(Quotient { law, f: fpoly, g })
}
