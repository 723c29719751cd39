//! Multiplicative genera of manifolds given by Chern-root data, Riemann-Roch
//! transformations, loop-space genera and the residue formula for `chi`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::coefficients::{Elem, Ring, Value};
use crate::equivariant::{EquivariantContext, LawKind};
use crate::error::{Error, Result};
use crate::fgl::{x_space, FormalGroupLaw};
use crate::polyseries::{MultiSeries, SeriesSpace};
use crate::tate::{self, sigma, sigma_ring, sin_cos_pi, t_ring, LaurentPoly};

/// One block: tangent Chern roots `scale * h` with multiplicities (negative for
/// normal directions), paired against `[X]` by taking the coefficient of
/// `h^top` and multiplying by `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernBlock {
    pub var: String,
    pub top: u32,
    pub roots: Vec<(i64, i64)>,
    pub degree: i64,
}

/// A product of blocks; the complex dimension is the sum of the tops.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ChernData {
    pub blocks: Vec<ChernBlock>,
}

impl ChernData {
    pub fn point() -> ChernData {
        ChernData::default()
    }

    /// `CP^n` with `c(T) = (1 + h)^{n+1}`.
    pub fn projective(var: &str, n: u32) -> ChernData {
        ChernData::block(var, n, vec![(1, n as i64 + 1)], 1)
    }

    /// A smooth hypersurface of degree `e` in `CP^{n+1}`.
    pub fn hypersurface(var: &str, n: u32, e: i64) -> ChernData {
        ChernData::block(var, n, vec![(1, n as i64 + 2), (e, -1)], e)
    }

    pub fn block(var: &str, top: u32, roots: Vec<(i64, i64)>, degree: i64) -> ChernData {
        ChernData { blocks: vec![ChernBlock { var: var.to_string(), top, roots, degree }] }
    }

    pub fn product(&self, other: &ChernData) -> Result<ChernData> {
        let mut blocks = self.blocks.clone();
        for b in &other.blocks {
            if blocks.iter().any(|c| c.var == b.var) {
                return Err(Error::InvalidInput(format!("block variable {} used twice", b.var)));
            }
            blocks.push(b.clone());
        }
        Ok(ChernData { blocks })
    }

    pub fn dim(&self) -> u32 {
        self.blocks.iter().map(|b| b.top).sum()
    }

    pub fn vars(&self) -> Vec<&str> {
        self.blocks.iter().map(|b| b.var.as_str()).collect()
    }

    /// First Chern class coefficient of each block.
    pub fn c1(&self) -> Vec<i64> {
        self.blocks.iter().map(|b| b.roots.iter().map(|(a, m)| a * m).sum()).collect()
    }

    fn top_monomial(&self) -> Vec<u32> {
        self.blocks.iter().map(|b| b.top).collect()
    }

    fn degree(&self) -> i64 {
        self.blocks.iter().map(|b| b.degree).product()
    }

    /// `c_d[X]`, the Euler characteristic.
    pub fn euler_characteristic(&self) -> Result<BigInt> {
        let ring = Ring::integers();
        let s = SeriesSpace::new(&ring, &self.vars(), self.dim())?;
        let mut c = s.one();
        for b in &self.blocks {
            for (a, m) in &b.roots {
                let f = s.one().add(&s.var(&b.var)?.scale(&ring.from_int(*a))?)?;
                c = c.mul(&if *m >= 0 { f.pow(*m as u32)? } else { f.inverse()?.pow(m.unsigned_abs() as u32)? })?;
            }
        }
        let v = c.coefficient(&self.top_monomial())?;
        match v {
            Value::Rat(r) => Ok(r.to_integer() * BigInt::from(self.degree())),
            _ => unreachable!("integer coefficients"),
        }
    }
}

/// A characteristic series with constant term exactly 1.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusSeries(MultiSeries);

impl GenusSeries {
    pub fn new(q: MultiSeries) -> Result<GenusSeries> {
        if q.space().nvars() != 1 {
            return Err(Error::InvalidInput("a characteristic series is univariate".into()));
        }
        if !q.ring().is_one(&q.constant_term()) {
            return Err(Error::InvalidInput(format!("characteristic series starts with {}", q.ring().format(&q.constant_term()))));
        }
        Ok(GenusSeries(q))
    }

    pub fn series(&self) -> &MultiSeries {
        &self.0
    }

    pub fn ring(&self) -> &Ring {
        self.0.ring()
    }

    pub fn mul(&self, other: &GenusSeries) -> Result<GenusSeries> {
        GenusSeries::new(self.0.mul(&other.0)?)
    }
}

/// `degree * coeff of prod h_i^{top_i} in prod Q(a h_i)^m`.
pub fn genus_eval(x: &ChernData, q: &GenusSeries) -> Result<Value> {
    let ring = q.ring();
    let d = x.dim();
    if q.0.trunc() < d {
        return Err(Error::TruncationTooSmall(format!("dimension {d} needs a series known to degree {d}, got {}", q.0.trunc())));
    }
    let q = q.0.truncate(d)?;
    let s = SeriesSpace::new(ring, &x.vars(), d)?;
    let var = &q.space().vars()[0];
    let mut acc = s.one();
    for b in &x.blocks {
        for (a, m) in &b.roots {
            let arg = s.var(&b.var)?.scale(&ring.from_int(*a))?;
            let qa = q.substitute(&[(var, &arg)], &s)?;
            let f = if *m >= 0 { qa.pow(*m as u32)? } else { qa.inverse()?.pow(m.unsigned_abs() as u32)? };
            acc = acc.mul(&f)?;
        }
    }
    ring.mul(&acc.coefficient(&x.top_monomial())?, &ring.from_int(x.degree()))
}

/// `(f(x)/x)^{-1}` for `f = x + ...`, known one degree less than `f`.
pub fn x_over(f: &MultiSeries) -> Result<MultiSeries> {
    let ring = f.ring();
    if f.trunc() == 0 {
        return Err(Error::TruncationTooSmall("series known only to degree 0".into()));
    }
    if !ring.is_zero(&f.constant_term()) {
        return Err(Error::ConstantTerm("x/f(x) needs f(0) = 0".into()));
    }
    let s = x_space(ring, f.trunc() - 1)?;
    let coeffs: Vec<Value> = f.coeffs().into_iter().skip(1).collect();
    s.from_coeffs(&coeffs)?.inverse()
}

/// `x / exp_F(x)`, known to one degree less than the law.
pub fn todd_series_of(f: &FormalGroupLaw) -> Result<GenusSeries> {
    GenusSeries::new(x_over(&f.exp()?)?)
}

/// `(x/2) / sinh(x/2)` over the rationals.
pub fn ahat_series(trunc: u32) -> Result<GenusSeries> {
    let ring = Ring::rationals();
    let mut coeffs = vec![ring.zero(); trunc as usize + 2];
    let mut fact = BigInt::from(1);
    for j in 1..=trunc as usize + 1 {
        fact *= BigInt::from(j);
        if j % 2 == 1 {
            let w = BigRational::new(BigInt::from(1), &fact * BigInt::from(2).pow(j as u32 - 1));
            coeffs[j] = ring.from_rational(&w)?;
        }
    }
    let sinh = x_space(&ring, trunc + 1)?.from_coeffs(&coeffs)?;
    GenusSeries::new(x_over(&sinh)?)
}

/// Genus of `X` under `G = theta F theta^{-1}` and the corrected `F`-genus
/// with series `Q_F(h) (x/theta(x))(exp_F h)`; the two agree.
pub fn rr_transform(x: &ChernData, f: &FormalGroupLaw, theta: &MultiSeries) -> Result<(Value, Value)> {
    let r = f.ring();
    if !r.is_one(&theta.coefficient(&[1])?) {
        return Err(Error::NonStrict(format!("theta has linear coefficient {}", r.format(&theta.coefficient(&[1])?))));
    }
    let d = x.dim();
    if f.trunc() < d + 1 || theta.trunc() < d + 1 {
        return Err(Error::TruncationTooSmall(format!("dimension {d} needs laws known to degree {}", d + 1)));
    }
    let (g, _) = f.transport(theta)?;
    let lhs = genus_eval(x, &todd_series_of(&g)?)?;
    let rhs = genus_eval(x, &corrected(f, theta)?)?;
    Ok((lhs, rhs))
}

/// `Q_F(h) * (x/theta(x))(exp_F h)`.
fn corrected(f: &FormalGroupLaw, theta: &MultiSeries) -> Result<GenusSeries> {
    with_todd(f, &x_over(theta)?)
}

/// `Q_F(h) * u(exp_F h)` for a univariate series `u`.
fn with_todd(f: &FormalGroupLaw, u: &MultiSeries) -> Result<GenusSeries> {
    let qf = todd_series_of(f)?;
    let t = qf.series().trunc().min(u.trunc());
    let exp = f.exp()?.truncate(t)?;
    let correction = u.truncate(t)?.compose(&exp)?;
    GenusSeries::new(qf.series().truncate(t)?.mul(&correction)?)
}

/// Normalization of the finite product in the loop genus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoopNormalization {
    /// Each factor divided by `[k]qhat`.
    Renormalized,
    /// Multiplicative law only: additionally divided by `L^N`, `L = 1 - x`.
    Sigma,
}

/// The characteristic series `Q_F(h) (x/Theta_N(x))(exp_F h)`.
pub fn loop_series(ctx: &EquivariantContext, n: u32, norm: LoopNormalization) -> Result<GenusSeries> {
    let th = tate::theta(ctx, n)?;
    let mut series = th.series;
    if norm == LoopNormalization::Sigma {
        if ctx.kind() != LawKind::Multiplicative {
            return Err(Error::InvalidInput("sigma normalization needs the multiplicative law".into()));
        }
        let s = series.space().clone();
        let l = s.one().sub(&s.var("x")?)?;
        series = series.mul(&l.inverse()?.pow(n)?)?;
    }
    with_todd(ctx.law(), &x_over(&series)?)
}

/// Loop genus at cutoff `N`; the context truncation must exceed `dim X`.
pub fn loop_genus(x: &ChernData, ctx: &EquivariantContext, n: u32, norm: LoopNormalization) -> Result<Value> {
    let ctx = ctx.with_trunc(ctx.trunc().max(x.dim() + 1))?;
    genus_eval(x, &loop_series(&ctx, n, norm)?)
}

/// The unrenormalized product `prod_k (x +_F [k]qhat)^{-1}` paired against
/// `[X]`, with the constant `prod_k [k]qhat^{-1}` counted once per tangent
/// direction.
pub fn loop_genus_raw(x: &ChernData, ctx: &EquivariantContext, n: u32) -> Result<Value> {
    let d = x.dim();
    let ctx = ctx.with_trunc(ctx.trunc().max(d + 1))?;
    let ring = ctx.ring();
    let s = x_space(ring, ctx.trunc())?;
    let xv = s.var("x")?;
    let mut prod = s.one();
    let mut consts = ring.one();
    for k in (1..=n as i64).flat_map(|k| [k, -k]) {
        prod = prod.mul(&ctx.twist(&xv, k)?)?;
        consts = ring.mul(&consts, &ctx.n_qhat(k)?)?;
    }
    let raw = prod.inverse()?;
    let c0 = raw.constant_term();
    let normalized = raw.scale(&ring.inverse(&c0)?)?;
    let g = genus_eval(x, &with_todd(ctx.law(), &normalized)?)?;
    ring.mul(&g, &ring.pow_signed(&consts, -(d as i64))?)
}

/// `Q(h) = h / sigma(e^{-h})` over `Q((q))` through `q^qorder`, degree `trunc`.
pub fn witten_series(qorder: i64, trunc: u32) -> Result<GenusSeries> {
    let ring = sigma_ring(qorder, 2)?;
    let sig = sigma(&ring)?;
    GenusSeries::new(x_over(&sigma_at_exp(&sig, trunc + 1)?)?)
}

/// `sigma(e^{-h})` as a series in `h`.
fn sigma_at_exp(sig: &LaurentPoly, trunc: u32) -> Result<MultiSeries> {
    let ring = sig.ring();
    let base = ring.base().unwrap();
    let s = SeriesSpace::new(ring, &["h"], trunc)?;
    let mut coeffs = vec![ring.zero(); trunc as usize + 1];
    for (e, c) in sig.terms() {
        let mut fact = BigInt::from(1);
        for (j, slot) in coeffs.iter_mut().enumerate() {
            if j > 0 {
                fact *= BigInt::from(j);
            }
            let w = BigRational::new(BigInt::from(-e).pow(j as u32), fact.clone());
            let term = ring.scale(&base.from_rational(&w)?, c)?;
            *slot = ring.add(slot, &term);
        }
    }
    s.from_coeffs(&coeffs)
}

/// Witten genus through `q^qorder` for data with vanishing first Chern class.
pub fn witten_genus(x: &ChernData, qorder: i64) -> Result<Value> {
    if x.c1().iter().any(|c| *c != 0) {
        return Err(Error::InvalidInput(format!("first Chern class {:?} is not zero", x.c1())));
    }
    genus_eval(x, &witten_series(qorder, x.dim())?)
}

/// The additive law's closed form: `Q(h) = t h / sin(t h)` over `k((t))`.
pub fn sine_loop_series(k: &Ring, trunc: u32) -> Result<GenusSeries> {
    GenusSeries::new(x_over(&tate::sine_series(k, trunc + 1)?)?)
}

/// Closed-form additive loop genus; `(2it)^d` times the `A-hat` genus.
pub fn sine_loop_genus(x: &ChernData, k: &Ring) -> Result<Elem> {
    let q = sine_loop_series(k, x.dim())?;
    Ok(Elem::new(q.ring(), genus_eval(x, &q)?))
}

/// True iff the loop genus equals the genus under `G = transport(F, Theta_N)`,
/// every coefficient agreeing through the context's series order.
pub fn loop_vs_quotient_check(x: &ChernData, ctx: &EquivariantContext, n: u32) -> Result<bool> {
    let ctx = ctx.with_trunc(ctx.trunc().max(x.dim() + 1))?;
    let lhs = loop_genus(x, &ctx, n, LoopNormalization::Renormalized)?;
    let th = tate::theta(&ctx, n)?;
    let (g, iso) = ctx.law().transport(&th.series)?;
    if !iso.is_strict() {
        return Err(Error::NonStrict("Theta is not strict".into()));
    }
    let rhs = genus_eval(x, &todd_series_of(&g)?)?;
    let ring = ctx.ring();
    if let Some(cap) = ring.series_cap() {
        for v in [&lhs, &rhs] {
            if let Value::Series(sv) = v {
                if sv.prec.is_some_and(|p| p < cap) {
                    return Err(Error::InsufficientPrecision(format!("genus known only to O({})", ring.format(&ring.big_o(sv.prec.unwrap())?))));
                }
            }
        }
    }
    Ok(ring.eq(&lhs, &rhs))
}

/// Residue at `z = 0` of `prod_j (t x_j z) / sin(t x_j z + pi r)` times
/// `z^{-d-1}`, paired against `[X]`; equals `(t / sin(pi r))^d chi(X)`.
pub fn chi_residue(x: &ChernData, r: &BigRational) -> Result<Elem> {
    if r.is_integer() {
        return Err(Error::Pole(format!("r = {r} is an integer")));
    }
    let (field, sin, cos) = sin_cos_pi(r)?;
    let k = field.ring();
    let d = x.dim();
    let tr = t_ring(&k, 2 * d)?;
    // t/sin(t y + pi r) = g0 * ghat(y), ghat(0) = 1
    let cot = k.div(&cos, &sin)?;
    let cos_ty = tate::cos_over_t_series(&k, 2 * d)?.scale(&tr.series_gen()?)?;
    let sin_ty = tate::sine_series(&k, 2 * d)?.scale(&tr.series_gen()?)?;
    let denom = cos_ty.add(&sin_ty.scale(&tr.embed_base(&cot)?)?)?;
    let ghat = denom.inverse()?;
    let g0 = tr.div(&tr.series_gen()?, &tr.embed_base(&sin)?)?;

    let mut vars = x.vars();
    vars.push("z");
    let s = SeriesSpace::new(&tr, &vars, 2 * d)?;
    let z = s.var("z")?;
    let mut chern = s.one();
    let mut prod = s.one();
    let yv = &ghat.space().vars()[0];
    for b in &x.blocks {
        let h = s.var(&b.var)?;
        for (a, m) in &b.roots {
            let ah = h.scale(&tr.from_int(*a))?;
            let c = s.one().add(&ah)?;
            let gh = ghat.substitute(&[(yv, &ah.mul(&z)?)], &s)?;
            let (c, gh) = if *m >= 0 {
                (c.pow(*m as u32)?, gh.pow(*m as u32)?)
            } else {
                (c.inverse()?.pow(m.unsigned_abs() as u32)?, gh.inverse()?.pow(m.unsigned_abs() as u32)?)
            };
            chern = chern.mul(&c)?;
            prod = prod.mul(&gh)?;
        }
    }
    let top_chern = s.from_terms(
        chern.terms().iter().filter(|(m, _)| m.iter().sum::<u32>() == d).map(|(m, c)| (m.clone(), c.clone())),
    )?;
    let integrand = z.pow(d)?.mul(&top_chern)?.mul(&prod)?.scale(&tr.pow(&g0, d)?)?;
    let mut mono = x.top_monomial();
    mono.push(d);
    let v = tr.mul(&integrand.coefficient(&mono)?, &tr.from_int(x.degree()))?;
    Ok(Elem::new(&tr, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Ring {
        Ring::rationals()
    }

    fn ahat(trunc: u32) -> GenusSeries {
        // inverse of sinh(x/2)/(x/2) = sum x^{2j} / (4^j (2j+1)!)
        let s = x_space(&q(), trunc).unwrap();
        let mut out = vec![q().zero(); trunc as usize + 1];
        let mut f = BigInt::from(1);
        for j in 0..=trunc / 2 {
            if j > 0 {
                f *= BigInt::from(2 * j) * BigInt::from(2 * j + 1);
            }
            out[2 * j as usize] = Value::Rat(BigRational::new(BigInt::from(1), &f * BigInt::from(4).pow(j)));
        }
        GenusSeries::new(s.from_coeffs(&out).unwrap().inverse().unwrap()).unwrap()
    }

    #[test]
    fn constant_series_kills_positive_dimension() {
        let one = GenusSeries::new(x_space(&q(), 4).unwrap().one()).unwrap();
        assert!(q().is_zero(&genus_eval(&ChernData::projective("h", 2), &one).unwrap()));
        assert!(q().is_one(&genus_eval(&ChernData::point(), &one).unwrap()));
    }

    #[test]
    fn todd_of_projective_spaces() {
        let gm = FormalGroupLaw::multiplicative(&q(), 8).unwrap();
        let td = todd_series_of(&gm).unwrap();
        for n in 0..=6 {
            assert!(q().is_one(&genus_eval(&ChernData::projective("h", n), &td).unwrap()), "n = {n}");
        }
        let ga = FormalGroupLaw::additive(&q(), 5).unwrap();
        let one = todd_series_of(&ga).unwrap();
        assert_eq!(one.series(), &x_space(&q(), 4).unwrap().one());
    }

    #[test]
    fn ahat_of_cp2() {
        assert_eq!(ahat_series(6).unwrap(), ahat(6));
        let v = genus_eval(&ChernData::projective("h", 2), &ahat(4)).unwrap();
        assert_eq!(v, q().parse("-1/8").unwrap());
        let k3 = ChernData::hypersurface("h", 2, 4);
        assert_eq!(genus_eval(&k3, &ahat(4)).unwrap(), q().parse("2").unwrap());
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(ChernData::projective("h", 1).euler_characteristic().unwrap(), BigInt::from(2));
        assert_eq!(ChernData::projective("h", 2).euler_characteristic().unwrap(), BigInt::from(3));
        assert_eq!(ChernData::hypersurface("h", 2, 4).euler_characteristic().unwrap(), BigInt::from(24));
        assert_eq!(ChernData::hypersurface("h", 4, 6).euler_characteristic().unwrap(), BigInt::from(2610));
        let p = ChernData::projective("a", 1).product(&ChernData::projective("b", 2)).unwrap();
        assert_eq!(p.euler_characteristic().unwrap(), BigInt::from(6));
    }

    #[test]
    fn genus_is_multiplicative() {
        let gm = FormalGroupLaw::multiplicative(&q(), 6).unwrap();
        let series = [todd_series_of(&gm).unwrap(), ahat(5)];
        let x = ChernData::projective("a", 2);
        let y = ChernData::hypersurface("b", 2, 3);
        let xy = x.product(&y).unwrap();
        for s in &series {
            let lhs = genus_eval(&xy, s).unwrap();
            let rhs = q().mul(&genus_eval(&x, s).unwrap(), &genus_eval(&y, s).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rr_examples() {
        let ga = FormalGroupLaw::additive(&q(), 4).unwrap();
        let s = x_space(&q(), 4).unwrap();
        let id = s.var("x").unwrap();
        let (l, r) = rr_transform(&ChernData::projective("h", 2), &ga, &id).unwrap();
        assert!(q().is_zero(&l) && q().is_zero(&r));

        let theta = s.parse("x - x^2/2 + x^3/6 - x^4/24").unwrap();
        let (l, r) = rr_transform(&ChernData::projective("h", 1), &ga, &theta).unwrap();
        assert!(q().is_one(&l) && q().is_one(&r));

        let ab = Ring::presented(&q(), &["a", "b"], &[]).unwrap();
        let gab = FormalGroupLaw::additive(&ab, 3).unwrap();
        let th = x_space(&ab, 3).unwrap().parse("x + a*x^2 + b*x^3").unwrap();
        let (l, r) = rr_transform(&ChernData::projective("h", 2), &gab, &th).unwrap();
        assert!(ab.eq(&l, &r));
        assert!(!ab.is_zero(&l));

        let bad = s.parse("2*x").unwrap();
        assert!(matches!(rr_transform(&ChernData::projective("h", 1), &ga, &bad), Err(Error::NonStrict(_))));
    }

    #[test]
    fn chi_residues() {
        let half = BigRational::new(1.into(), 2.into());
        let v = chi_residue(&ChernData::projective("h", 1), &half).unwrap();
        assert_eq!(v.to_string(), "2*t");
        let v = chi_residue(&ChernData::projective("h", 2), &half).unwrap();
        assert_eq!(v.to_string(), "3*t^2");
        let v = chi_residue(&ChernData::point(), &half).unwrap();
        assert_eq!(v.to_string(), "1");
        let third = BigRational::new(1.into(), 3.into());
        let v = chi_residue(&ChernData::projective("h", 1), &third).unwrap();
        let expected = Elem::parse(v.ring(), "4/3*w*t").unwrap();
        assert_eq!(v, expected);
        assert!(matches!(chi_residue(&ChernData::projective("h", 1), &BigRational::from_integer(2.into())), Err(Error::Pole(_))));
    }

    #[test]
    fn point_loop_genus_is_one() {
        let ga = EquivariantContext::additive(4, 6, 2).unwrap();
        let v = loop_genus(&ChernData::point(), &ga, 2, LoopNormalization::Renormalized).unwrap();
        assert!(ga.ring().is_one(&v));
        assert!(loop_vs_quotient_check(&ChernData::point(), &ga, 2).unwrap());
    }

    #[test]
    fn loop_vs_quotient_small() {
        let ga = EquivariantContext::additive(6, 8, 3).unwrap();
        assert!(loop_vs_quotient_check(&ChernData::projective("h", 2), &ga, 2).unwrap());
        let gm = EquivariantContext::multiplicative(4, 6, 3).unwrap();
        assert!(loop_vs_quotient_check(&ChernData::projective("h", 1), &gm, 2).unwrap());
    }

    #[test]
    fn raw_and_renormalized() {
        let ga = EquivariantContext::additive(6, 10, 3).unwrap();
        let x = ChernData::projective("h", 2);
        let raw = loop_genus_raw(&x, &ga, 2).unwrap();
        let ren = loop_genus(&x, &ga, 2, LoopNormalization::Renormalized).unwrap();
        let r = ga.ring();
        // prod_{0<|k|<=2} k qhat = 4 qhat^4
        let c = r.parse("4*qhat^4").unwrap();
        assert!(r.eq(&raw, &r.mul(&ren, &r.pow_signed(&c, -2).unwrap()).unwrap()));
    }

    #[test]
    fn sine_closed_form_matches_ahat() {
        let k = Ring::gaussian();
        let x = ChernData::projective("h", 2);
        let v = sine_loop_genus(&x, &k).unwrap();
        assert_eq!(v, Elem::parse(v.ring(), "1/2*t^2").unwrap());
        // x/Theta(x) = Q_Ahat(2 i t x)
        let tr = t_ring(&k, 7).unwrap();
        let qs = sine_loop_series(&k, 6).unwrap();
        let ah = ahat(6).series().change_ring(&k).unwrap().change_ring(&tr).unwrap();
        let s = x_space(&tr, 6).unwrap();
        let arg = s.parse("2*i*t*x").unwrap();
        let sub = ah.substitute(&[("x", &arg)], &s).unwrap();
        assert_eq!(qs.series().change_ring(&tr).unwrap(), sub);
    }

    #[test]
    fn witten_needs_c1_zero() {
        assert!(matches!(witten_genus(&ChernData::projective("h", 2), 3), Err(Error::InvalidInput(_))));
        // K3: the constant term is the A-hat genus 2
        let v = witten_genus(&ChernData::hypersurface("h", 2, 4), 3).unwrap();
        let r = sigma_ring(3, 2).unwrap();
        assert!(q().eq(&r.series_coeff(&v, 0).unwrap(), &q().parse("2").unwrap()));
    }
}
