//! Borel-type equivariant Euler classes over trivial circle actions, in
//! localized and unlocalized coefficient rings.

use crate::coefficients::{Ring, Value};
use crate::error::{Error, Result};
use crate::fgl::FormalGroupLaw;
use crate::polyseries::{MultiSeries, SeriesSpace};

/// Which of the worked models a context realizes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    Additive,
    Multiplicative,
    General,
}

/// Coefficient ring of the equivariant theory with the image of `qhat`.
#[derive(Clone, Debug)]
pub struct EquivariantContext {
    law: FormalGroupLaw,
    ring: Ring,
    qhat: Value,
    localized: bool,
    kind: LawKind,
}

impl EquivariantContext {
    /// Additive law over `Q((qhat))` with exponents in `[-tail, qorder]`.
    pub fn additive(qorder: i64, tail: u32, trunc: u32) -> Result<EquivariantContext> {
        let ring = Ring::laurent(&Ring::rationals(), "qhat", qorder, tail)?;
        let law = FormalGroupLaw::additive(&ring, trunc)?;
        let qhat = ring.series_gen()?;
        Ok(EquivariantContext { law, ring, qhat, localized: true, kind: LawKind::Additive })
    }

    /// Multiplicative law over `Q((q))` with `qhat = 1 - q`.
    pub fn multiplicative(qorder: i64, tail: u32, trunc: u32) -> Result<EquivariantContext> {
        let ring = Ring::laurent(&Ring::rationals(), "q", qorder, tail)?;
        let law = FormalGroupLaw::multiplicative(&ring, trunc)?;
        let qhat = ring.parse("1 - q")?;
        Ok(EquivariantContext { law, ring, qhat, localized: true, kind: LawKind::Multiplicative })
    }

    /// Unlocalized Borel extension: power series in `qhat` over the law's ring.
    pub fn borel(law: &FormalGroupLaw, qorder: u32) -> Result<EquivariantContext> {
        let ring = Ring::power_series(law.ring(), "qhat", qorder)?;
        let qhat = ring.series_gen()?;
        let law = law.change_ring(&ring)?;
        Ok(EquivariantContext { law, ring, qhat, localized: false, kind: LawKind::General })
    }

    /// Laurent series in `qhat` over the law's ring; every `[k](qhat)` with
    /// `0 < |k| <= bound` must be invertible there.
    pub fn localized(law: &FormalGroupLaw, qorder: i64, tail: u32, bound: u32) -> Result<EquivariantContext> {
        let ring = Ring::laurent(law.ring(), "qhat", qorder, tail)?;
        let qhat = ring.series_gen()?;
        let law = law.change_ring(&ring)?;
        let ctx = EquivariantContext { law, ring, qhat, localized: true, kind: LawKind::General };
        for k in 1..=bound as i64 {
            for kk in [k, -k] {
                let v = ctx.n_qhat(kk)?;
                if !ctx.ring.is_unit(&v) {
                    return Err(Error::NotAUnit(format!("[{kk}](qhat) = {}", ctx.ring.format(&v))));
                }
            }
        }
        Ok(ctx)
    }

    /// Same context with another truncation of the law.
    pub fn with_trunc(&self, trunc: u32) -> Result<EquivariantContext> {
        Ok(EquivariantContext { law: self.law.with_trunc(trunc)?, ..self.clone() })
    }

    /// Same context over a coefficient ring with other series bounds.
    pub fn with_qorder(&self, qorder: i64, tail: u32) -> Result<EquivariantContext> {
        let ring = self.ring.with_series_bounds(qorder, tail)?;
        let law = self.law.change_ring(&ring)?;
        let qhat = match self.kind {
            LawKind::Additive => ring.series_gen()?,
            LawKind::Multiplicative => ring.parse("1 - q")?,
            LawKind::General => ring.coerce(&self.ring, &self.qhat)?,
        };
        Ok(EquivariantContext { law, ring, qhat, ..self.clone() })
    }

    pub fn law(&self) -> &FormalGroupLaw {
        &self.law
    }
    pub fn ring(&self) -> &Ring {
        &self.ring
    }
    pub fn qhat(&self) -> &Value {
        &self.qhat
    }
    pub fn is_localized(&self) -> bool {
        self.localized
    }
    pub fn kind(&self) -> LawKind {
        self.kind
    }
    pub fn trunc(&self) -> u32 {
        self.law.trunc()
    }

    /// Root space for Chern-root variables.
    pub fn space(&self, vars: &[&str], trunc: u32) -> Result<SeriesSpace> {
        SeriesSpace::new(&self.ring, vars, trunc)
    }

    /// `[k]_F(qhat)`.
    pub fn n_qhat(&self, k: i64) -> Result<Value> {
        self.law.n_element(&self.ring, k, &self.qhat)
    }

    /// `x +_F [k](qhat)` for a series `x` with zero constant term.
    pub fn twist(&self, x: &MultiSeries, k: i64) -> Result<MultiSeries> {
        let c = x.space().constant(self.n_qhat(k)?);
        self.law.sum(x, &c)
    }
}

/// A Chern root `scale * var`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Root {
    pub var: String,
    pub scale: i64,
}

/// One summand `(L_root ⊗ C(weight))^multiplicity`; without a root the line is trivial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub root: Option<Root>,
    pub weight: i64,
    pub multiplicity: i64,
}

impl Block {
    pub fn new(root: Option<(&str, i64)>, weight: i64, multiplicity: i64) -> Block {
        Block { root: root.map(|(v, s)| Root { var: v.to_string(), scale: s }), weight, multiplicity }
    }
}

/// A sum of line bundles with circle weights over a trivial circle space.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EqBundle {
    pub blocks: Vec<Block>,
}

impl EqBundle {
    pub fn new(blocks: Vec<Block>) -> EqBundle {
        EqBundle { blocks }
    }

    pub fn rank(&self) -> i64 {
        self.blocks.iter().map(|b| b.multiplicity).sum()
    }

    /// Direct sum.
    pub fn sum(&self, other: &EqBundle) -> EqBundle {
        let mut blocks = self.blocks.clone();
        blocks.extend(other.blocks.iter().cloned());
        EqBundle { blocks }
    }

    /// `V ⊗ C(k)`.
    pub fn twist(&self, k: i64) -> EqBundle {
        EqBundle {
            blocks: self.blocks.iter().map(|b| Block { weight: b.weight + k, ..b.clone() }).collect(),
        }
    }

    /// `V ⊗ I_n` with `I_n` the sum of `C(k)` for `0 < |k| <= n`.
    pub fn times_interval(&self, n: i64) -> EqBundle {
        let mut out = EqBundle::default();
        for k in 1..=n {
            out = out.sum(&self.twist(k)).sum(&self.twist(-k));
        }
        out
    }
}

/// `prod ([a] x_root +_F [k](qhat))^m` in `space`.
pub fn euler_class(ctx: &EquivariantContext, bundle: &EqBundle, space: &SeriesSpace) -> Result<MultiSeries> {
    if space.ring() != ctx.ring() {
        return Err(Error::RingMismatch(format!("root space over {}, context over {}", space.ring(), ctx.ring())));
    }
    let mut acc = space.one();
    for b in &bundle.blocks {
        let x = match &b.root {
            Some(r) => space.var(&r.var)?.scale(&ctx.ring().from_int(r.scale))?,
            None => space.zero(),
        };
        let e = ctx.twist(&x, b.weight)?;
        let factor = if b.multiplicity >= 0 {
            e.pow(b.multiplicity as u32)?
        } else {
            e.inverse()?.pow(b.multiplicity.unsigned_abs() as u32)?
        };
        acc = acc.mul(&factor)?;
    }
    Ok(acc)
}

/// True when the bundle has no fixed summand and its Euler class inverts.
pub fn unit_check(ctx: &EquivariantContext, bundle: &EqBundle, space: &SeriesSpace) -> bool {
    if bundle.blocks.iter().any(|b| b.weight == 0 && b.multiplicity != 0) {
        return false;
    }
    match euler_class(ctx, bundle, space) {
        Ok(e) => e.inverse().is_ok(),
        Err(_) => false,
    }
}

/// Normal bundle of the constant loops, cut off at `|k| <= n`: each Chern
/// root of `TX` twisted by every nonzero weight.
pub fn loop_normal_bundle(roots: &[Root], multiplicities: &[i64], n: i64) -> EqBundle {
    let mut blocks = Vec::new();
    for (r, m) in roots.iter().zip(multiplicities) {
        for k in (1..=n).flat_map(|k| [k, -k]) {
            blocks.push(Block { root: Some(r.clone()), weight: k, multiplicity: *m });
        }
    }
    EqBundle { blocks }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_euler_classes() {
        let ga = EquivariantContext::additive(6, 4, 4).unwrap();
        let s = ga.space(&[], 0).unwrap();
        for k in -3..=3 {
            let e = euler_class(&ga, &EqBundle::new(vec![Block::new(None, k, 1)]), &s).unwrap();
            assert_eq!(e.constant_term(), ga.ring().parse(&format!("{k}*qhat")).unwrap());
        }
        let gm = EquivariantContext::multiplicative(6, 4, 4).unwrap();
        let s = gm.space(&[], 0).unwrap();
        for k in -3..=3 {
            let e = euler_class(&gm, &EqBundle::new(vec![Block::new(None, k, 1)]), &s).unwrap();
            assert!(gm.ring().eq(&e.constant_term(), &gm.ring().parse(&format!("1 - q^{k}")).unwrap()));
        }
    }

    #[test]
    fn trivial_action_gives_ordinary_euler_class() {
        let gm = EquivariantContext::multiplicative(6, 4, 4).unwrap();
        let s = gm.space(&["x"], 4).unwrap();
        let e = euler_class(&gm, &EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 1)]), &s).unwrap();
        assert_eq!(e, s.var("x").unwrap());
        let e2 = euler_class(&gm, &EqBundle::new(vec![Block::new(Some(("x", 2)), 0, 1)]), &s).unwrap();
        assert_eq!(e2, s.parse("2*x").unwrap());
    }

    #[test]
    fn unit_checks() {
        let ga = EquivariantContext::additive(6, 4, 3).unwrap();
        let s = ga.space(&["x"], 3).unwrap();
        let pm = EqBundle::new(vec![Block::new(None, 1, 1), Block::new(None, -1, 1)]);
        assert!(unit_check(&ga, &pm, &s));
        let fixed = pm.sum(&EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 1)]));
        assert!(!unit_check(&ga, &fixed, &s));
        let twisted = EqBundle::new(vec![Block::new(Some(("x", 1)), 2, 1)]);
        assert!(unit_check(&ga, &twisted, &s));
        let e = euler_class(&ga, &twisted, &s).unwrap();
        assert_eq!(e.mul(&e.inverse().unwrap()).unwrap(), s.one());

        let borel = EquivariantContext::borel(&FormalGroupLaw::additive(&Ring::rationals(), 3).unwrap(), 6).unwrap();
        let sb = borel.space(&["x"], 3).unwrap();
        assert!(!unit_check(&borel, &pm, &sb));
        assert!(!unit_check(&borel, &twisted, &sb));
    }

    #[test]
    fn loop_normal_bundles() {
        let ga = EquivariantContext::additive(6, 4, 4).unwrap();
        let s = ga.space(&["x"], 4).unwrap();
        let empty = loop_normal_bundle(&[], &[], 3);
        assert_eq!(euler_class(&ga, &empty, &s).unwrap(), s.one());
        let root = Root { var: "x".into(), scale: 1 };
        let nu = loop_normal_bundle(std::slice::from_ref(&root), &[1], 2);
        let e = euler_class(&ga, &nu, &s).unwrap();
        assert_eq!(e, s.parse("(x^2 - qhat^2)*(x^2 - 4*qhat^2)").unwrap());

        let gm = EquivariantContext::multiplicative(6, 4, 4).unwrap();
        let s = gm.space(&["x"], 4).unwrap();
        let nu = loop_normal_bundle(std::slice::from_ref(&root), &[2], 1);
        let x = s.var("x").unwrap();
        let a = gm.twist(&x, 1).unwrap();
        let iota = gm.law().inverse_element(gm.ring(), gm.qhat()).unwrap();
        let b = gm.law().sum(&x, &s.constant(iota)).unwrap();
        let expected = a.mul(&b).unwrap().pow(2).unwrap();
        assert_eq!(euler_class(&gm, &nu, &s).unwrap(), expected);
    }

    #[test]
    fn euler_class_is_multiplicative() {
        let gm = EquivariantContext::multiplicative(5, 6, 4).unwrap();
        let s = gm.space(&["x", "y"], 4).unwrap();
        let b1 = EqBundle::new(vec![Block::new(Some(("x", 1)), 2, 1), Block::new(None, -1, 2)]);
        let b2 = EqBundle::new(vec![Block::new(Some(("y", 3)), -3, 1), Block::new(Some(("x", 1)), 1, -1)]);
        let lhs = euler_class(&gm, &b1.sum(&b2), &s).unwrap();
        let rhs = euler_class(&gm, &b1, &s).unwrap().mul(&euler_class(&gm, &b2, &s).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        let trivial = EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 2)]);
        assert_eq!(euler_class(&gm, &trivial, &s).unwrap(), s.parse("x^2").unwrap());
    }
}
