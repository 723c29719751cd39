//! Towers of Thom modules `X^{-I_n V}` with Euler-class transition maps,
//! modeled as free rank-one modules over the root series ring.

use crate::coefficients::Ring;
use crate::equivariant::{euler_class, unit_check, EqBundle, EquivariantContext, LawKind};
use crate::error::{Error, Result};
use crate::polyseries::{MultiSeries, SeriesSpace};
use crate::tate::{self, narrow, series_bounds};

/// A tower for the bundle `V` (weights ignored: `V` carries the trivial action).
#[derive(Clone, Debug)]
pub struct ThomTower {
    ctx: EquivariantContext,
    bundle: EqBundle,
    space: SeriesSpace,
}

/// A class `(stage, value)` in the colimit.
#[derive(Clone, Debug, PartialEq)]
pub struct TowerClass {
    pub stage: u32,
    pub value: MultiSeries,
}

/// Result of [`ThomTower::stabilize`].
#[derive(Clone, Debug)]
pub struct Stabilized {
    pub n_stable: u32,
    pub series: MultiSeries,
}

impl ThomTower {
    pub fn new(ctx: &EquivariantContext, bundle: &EqBundle, space: &SeriesSpace) -> Result<ThomTower> {
        if space.ring() != ctx.ring() {
            return Err(Error::RingMismatch(format!("root space over {}, context over {}", space.ring(), ctx.ring())));
        }
        if bundle.blocks.iter().any(|b| b.weight != 0) {
            return Err(Error::InvalidInput("the tower bundle carries the trivial circle action".into()));
        }
        Ok(ThomTower { ctx: ctx.clone(), bundle: bundle.clone(), space: space.clone() })
    }

    pub fn context(&self) -> &EquivariantContext {
        &self.ctx
    }

    pub fn space(&self) -> &SeriesSpace {
        &self.space
    }

    pub fn rank(&self) -> i64 {
        self.bundle.rank()
    }

    /// `e(V ⊗ C(n)) e(V ⊗ C(-n))`.
    pub fn transition(&self, n: u32) -> Result<MultiSeries> {
        if n == 0 {
            return Err(Error::InvalidInput("transitions start at stage 1".into()));
        }
        let step = self.bundle.twist(n as i64).sum(&self.bundle.twist(-(n as i64)));
        euler_class(&self.ctx, &step, &self.space)
    }

    /// `u_n = e(V ⊗ I_n)`, computed from the whole bundle at once.
    pub fn unit_u(&self, n: u32) -> Result<MultiSeries> {
        let big = self.bundle.times_interval(n as i64);
        if n > 0 && !unit_check(&self.ctx, &big, &self.space) {
            return Err(Error::NotAUnit(format!("e(V ⊗ I_{n}) over {}", self.ctx.ring())));
        }
        euler_class(&self.ctx, &big, &self.space)
    }

    /// `(n, u_n s)`.
    pub fn omega(&self, n: u32, s: &MultiSeries) -> Result<TowerClass> {
        Ok(TowerClass { stage: n, value: self.unit_u(n)?.mul(s)? })
    }

    /// Image of a class at a later stage.
    pub fn push(&self, c: &TowerClass, stage: u32) -> Result<TowerClass> {
        if stage < c.stage {
            return Err(Error::InvalidInput(format!("cannot push stage {} back to {stage}", c.stage)));
        }
        let mut v = c.value.clone();
        for m in c.stage + 1..=stage {
            v = v.mul(&self.transition(m)?)?;
        }
        Ok(TowerClass { stage, value: v })
    }

    /// Equality in the colimit, decided at the larger stage.
    pub fn equivalent(&self, a: &TowerClass, b: &TowerClass) -> Result<bool> {
        let m = a.stage.max(b.stage);
        Ok(self.push(a, m)?.value == self.push(b, m)?.value)
    }

    /// `j_n(omega_{n-1}(s)) = omega_n(s)`.
    pub fn diagram_check(&self, n: u32, s: &MultiSeries) -> Result<bool> {
        let lower = self.omega(n - 1, s)?;
        Ok(self.push(&lower, n)?.value == self.omega(n, s)?.value)
    }

    /// `prod_j prod_{0<|k|<=n} (x_j +_F [k]qhat) / [k]qhat` over the Chern roots of `V`.
    pub fn relative_omega(&self, n: u32) -> Result<MultiSeries> {
        let work = match series_bounds(self.ctx.ring()) {
            Some((order, tail)) => self.ctx.with_qorder(order + n as i64 + 1, tail + n)?,
            None => self.ctx.clone(),
        };
        let ring = work.ring();
        let s = self.space.with_ring(ring);
        let mut acc = s.one();
        for b in &self.bundle.blocks {
            let Some(root) = &b.root else { continue };
            let x = s.var(&root.var)?.scale(&ring.from_int(root.scale))?;
            for k in (1..=n as i64).flat_map(|k| [k, -k]) {
                let c = work.n_qhat(k)?;
                let factor = work.twist(&x, k)?.scale(&ring.inverse(&c)?)?;
                acc = acc.mul(&pow_signed(&factor, b.multiplicity)?)?;
            }
        }
        narrow(&acc, self.ctx.ring())
    }

    /// `relative_omega` times `prod_j L_j^{-n}`, `L_j = 1 - x_j`.
    fn sigma_normalized(&self, n: u32) -> Result<MultiSeries> {
        let mut acc = self.relative_omega(n)?;
        for (l, m) in self.line_factors()? {
            acc = acc.mul(&pow_signed(&l.inverse()?.pow(n)?, m)?)?;
        }
        Ok(acc)
    }

    fn line_factors(&self) -> Result<Vec<(MultiSeries, i64)>> {
        let s = &self.space;
        let mut out = Vec::new();
        for b in &self.bundle.blocks {
            if let Some(root) = &b.root {
                let x = s.var(&root.var)?.scale(&s.ring().from_int(root.scale))?;
                out.push((s.one().sub(&x)?, b.multiplicity));
            }
        }
        Ok(out)
    }

    /// Smallest cutoff after which every coefficient through `q^qorder` is
    /// fixed, scanning cutoffs up to `qorder + 2`. The multiplicative law needs
    /// `sigma_normalize`; the raw product does not settle and is reported as
    /// `NonConvergent`. For the additive law only the closed form settles, and
    /// it is returned with the cutoff equal to the order bound.
    pub fn stabilize(&self, qorder: i64, sigma_normalize: bool) -> Result<Stabilized> {
        match self.ctx.kind() {
            LawKind::Additive => {
                let series = self.sine_closed_form()?;
                Ok(Stabilized { n_stable: qorder.max(0) as u32, series })
            }
            LawKind::Multiplicative => {
                let tail = series_bounds(self.ctx.ring()).map_or(0, |b| b.1);
                let at = self.with_qorder(qorder, tail)?;
                let last = qorder.max(0) as u32 + 2;
                let mut seq = Vec::new();
                for n in 0..=last {
                    seq.push(if sigma_normalize { at.sigma_normalized(n)? } else { at.relative_omega(n)? });
                }
                let n_stable = (0..=last).find(|&n| seq[n as usize..].iter().all(|s| *s == seq[n as usize]));
                match n_stable {
                    Some(n) if n < last => Ok(Stabilized { n_stable: n, series: seq[n as usize].clone() }),
                    _ => Err(Error::NonConvergent(format!(
                        "coefficients through q^{qorder} still move at cutoff {last}"
                    ))),
                }
            }
            LawKind::General => Err(Error::InvalidInput("stabilization needs the additive or multiplicative context".into())),
        }
    }

    fn with_qorder(&self, qorder: i64, tail: u32) -> Result<ThomTower> {
        let ctx = self.ctx.with_qorder(qorder, tail)?;
        let space = self.space.with_ring(ctx.ring());
        Ok(ThomTower { ctx, bundle: self.bundle.clone(), space })
    }

    /// `prod_j sigma(L_j) / x_j` with `L_j = 1 - x_j`, through `q^qorder`.
    pub fn sigma_closed_form(&self, qorder: i64) -> Result<MultiSeries> {
        let ring = tate::sigma_ring(qorder, 2)?;
        let sig = tate::sigma(&ring)?;
        let s = self.space.with_ring(&ring);
        // one more degree so that dividing by the root keeps degree trunc
        let s1 = s.with_trunc(s.trunc() + 1);
        let mut acc = s.one();
        for b in &self.bundle.blocks {
            let Some(root) = &b.root else { continue };
            let x = s1.var(&root.var)?.scale(&ring.from_int(root.scale))?;
            let l = s1.one().sub(&x)?;
            let linv = l.inverse()?;
            let mut value = s1.zero();
            for (e, c) in sig.terms() {
                let p = if *e >= 0 { l.pow(*e as u32)? } else { linv.pow(e.unsigned_abs() as u32)? };
                value = value.add(&p.scale(c)?)?;
            }
            // sigma(1 - x) = x * unit; divide by the root
            let quotient = divide_by(&value, &x, root.scale)?.truncate(s.trunc())?;
            acc = acc.mul(&pow_signed(&quotient, b.multiplicity)?)?;
        }
        Ok(acc)
    }

    /// `prod_j sin(t x_j) / (t x_j)` over `Q((t))`.
    pub fn sine_closed_form(&self) -> Result<MultiSeries> {
        let k = Ring::rationals();
        let trunc = self.space.trunc();
        let sine = tate::sine_series(&k, trunc + 1)?;
        let tr = sine.ring().clone();
        let s = self.space.with_ring(&tr);
        let shifted = crate::fgl::x_space(&tr, trunc)?.from_coeffs(&sine.coeffs()[1..])?;
        let mut acc = s.one();
        for b in &self.bundle.blocks {
            let Some(root) = &b.root else { continue };
            let x = s.var(&root.var)?.scale(&tr.from_int(root.scale))?;
            let f = shifted.substitute(&[("x", &x)], &s)?;
            acc = acc.mul(&pow_signed(&f, b.multiplicity)?)?;
        }
        Ok(acc)
    }
}

fn pow_signed(f: &MultiSeries, m: i64) -> Result<MultiSeries> {
    if m >= 0 {
        f.pow(m as u32)
    } else {
        f.inverse()?.pow(m.unsigned_abs() as u32)
    }
}

/// `f / x` where `x = a * v` is a scaled variable dividing `f` exactly.
fn divide_by(f: &MultiSeries, x: &MultiSeries, a: i64) -> Result<MultiSeries> {
    let ring = f.ring();
    let (m, _) = x.terms().iter().next().ok_or_else(|| Error::InvalidInput("zero root".into()))?;
    let i = m.iter().position(|e| *e == 1).unwrap();
    let ainv = ring.inverse(&ring.from_int(a))?;
    let mut terms = Vec::new();
    for (mono, c) in f.terms() {
        if mono[i] == 0 {
            if !ring.is_zero(c) {
                return Err(Error::InvalidInput("series is not divisible by the root".into()));
            }
            continue;
        }
        let mut e = mono.clone();
        e[i] -= 1;
        terms.push((e, ring.mul(c, &ainv)?));
    }
    f.space().from_terms(terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivariant::Block;

    fn point_tower(ctx: &EquivariantContext, rank: i64) -> ThomTower {
        let s = ctx.space(&[], 0).unwrap();
        let b = EqBundle::new(if rank > 0 { vec![Block::new(None, 0, rank)] } else { vec![] });
        ThomTower::new(ctx, &b, &s).unwrap()
    }

    #[test]
    fn transitions_over_a_point() {
        let ga = EquivariantContext::additive(6, 8, 3).unwrap();
        let t = point_tower(&ga, 1);
        assert_eq!(t.transition(1).unwrap().constant_term(), ga.ring().parse("-qhat^2").unwrap());
        let gm = EquivariantContext::multiplicative(6, 8, 3).unwrap();
        let t = point_tower(&gm, 1);
        let expected = gm.ring().parse("(1 - q)*(1 - q^-1)").unwrap();
        assert!(gm.ring().eq(&t.transition(1).unwrap().constant_term(), &expected));
        let t0 = point_tower(&gm, 0);
        assert_eq!(t0.transition(3).unwrap(), t0.space().one());
    }

    #[test]
    fn units_and_recursion() {
        let ga = EquivariantContext::additive(12, 12, 3).unwrap();
        let t = point_tower(&ga, 1);
        assert_eq!(t.unit_u(0).unwrap(), t.space().one());
        assert_eq!(t.unit_u(2).unwrap().constant_term(), ga.ring().parse("4*qhat^4").unwrap());
        for n in 1..=4 {
            let lhs = t.unit_u(n).unwrap();
            let rhs = t.unit_u(n - 1).unwrap().mul(&t.transition(n).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let borel = EquivariantContext::borel(&crate::FormalGroupLaw::additive(&Ring::rationals(), 3).unwrap(), 6).unwrap();
        let tb = point_tower(&borel, 1);
        assert!(matches!(tb.unit_u(1), Err(Error::NotAUnit(_))));
    }

    #[test]
    fn omega_and_colimit() {
        let gm = EquivariantContext::multiplicative(16, 16, 3).unwrap();
        let s = gm.space(&["x"], 3).unwrap();
        let b = EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 1), Block::new(None, 0, 1)]);
        let t = ThomTower::new(&gm, &b, &s).unwrap();
        let cls = s.parse("1 + x").unwrap();
        assert_eq!(t.omega(0, &cls).unwrap(), TowerClass { stage: 0, value: cls.clone() });
        for n in 1..=3 {
            assert!(t.diagram_check(n, &cls).unwrap());
        }
        let a = t.omega(1, &cls).unwrap();
        let c = t.omega(3, &cls).unwrap();
        assert!(t.equivalent(&a, &c).unwrap());
        let other = t.omega(2, &s.parse("1 - x").unwrap()).unwrap();
        assert!(!t.equivalent(&a, &other).unwrap());
    }

    #[test]
    fn relative_omega_matches_theta() {
        let ga = EquivariantContext::additive(4, 6, 5).unwrap();
        let s = ga.space(&["x"], 5).unwrap();
        let b = EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 1)]);
        let t = ThomTower::new(&ga, &b, &s).unwrap();
        assert_eq!(t.relative_omega(1).unwrap(), s.parse("1 - qhat^-2*x^2").unwrap());
        let th = tate::theta(&ga, 2).unwrap();
        let prod = t.relative_omega(2).unwrap().mul(&s.var("x").unwrap()).unwrap();
        assert_eq!(prod, th.series);
        assert_eq!(point_tower(&ga, 0).relative_omega(3).unwrap(), ga.space(&[], 0).unwrap().one());
    }

    #[test]
    fn stabilization() {
        let gm = EquivariantContext::multiplicative(3, 10, 3).unwrap();
        let s = gm.space(&["x"], 3).unwrap();
        let b = EqBundle::new(vec![Block::new(Some(("x", 1)), 0, 1)]);
        let t = ThomTower::new(&gm, &b, &s).unwrap();
        let st = t.stabilize(3, true).unwrap();
        assert_eq!(st.n_stable, 3);
        let closed = t.sigma_closed_form(3).unwrap();
        assert_eq!(narrow(&st.series, closed.ring()).unwrap(), closed);
        assert!(matches!(t.stabilize(3, false), Err(Error::NonConvergent(_))));
        assert_eq!(t.stabilize(0, true).unwrap().n_stable, 0);

        let ga = EquivariantContext::additive(4, 6, 3).unwrap();
        let sa = ga.space(&["x"], 3).unwrap();
        let ta = ThomTower::new(&ga, &b, &sa).unwrap();
        let st = ta.stabilize(4, true).unwrap();
        assert_eq!(st.n_stable, 4);
        let tr = st.series.ring().clone();
        assert_eq!(st.series, crate::fgl::x_space(&tr, 3).unwrap().parse("1 - 1/6*t^2*x^2").unwrap());
    }
}
