//! One-dimensional commutative formal group laws.

use std::fmt;

use crate::coefficients::{Monomial, Ring, RingKind, Value};
use crate::error::{Error, Result};
use crate::polyseries::{MultiSeries, SeriesSpace};

/// A validated formal group law `F(x, y)`.
///
/// `exact` marks laws that are polynomials known in full (for example the
/// additive and multiplicative laws); those may be evaluated at arguments with
/// nonzero constant term.
#[derive(Clone, Debug)]
pub struct FormalGroupLaw {
    law: MultiSeries,
    exact: bool,
}

/// A coordinate change `theta` from `source` to `target`.
#[derive(Clone, Debug)]
pub struct Isomorphism {
    pub theta: MultiSeries,
    pub source: FormalGroupLaw,
    pub target: FormalGroupLaw,
}

impl Isomorphism {
    pub fn is_strict(&self) -> bool {
        let r = self.theta.ring();
        self.theta.coefficient(&[1]).map(|c| r.is_one(&c)).unwrap_or(false)
    }
}

fn xy_space(ring: &Ring, trunc: u32) -> Result<SeriesSpace> {
    SeriesSpace::new(ring, &["x", "y"], trunc)
}

/// Univariate series in `x`.
pub fn x_space(ring: &Ring, trunc: u32) -> Result<SeriesSpace> {
    SeriesSpace::new(ring, &["x"], trunc)
}

fn monomials_of_degree(nvars: usize, deg: u32) -> Vec<Monomial> {
    if nvars == 0 {
        return if deg == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=deg).rev() {
        for mut rest in monomials_of_degree(nvars - 1, deg - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Evaluates a truncated series `f` at `args` in `target`.
///
/// Arguments with zero constant term need no justification. Otherwise the
/// constants must be nilpotent (presented rings) or have positive valuation
/// (series rings); in the latter case the precision lost to truncation is
/// recorded as `O(q^p)` terms on each coefficient.
pub fn evaluate(f: &MultiSeries, exact: bool, args: &[&MultiSeries], target: &SeriesSpace) -> Result<MultiSeries> {
    let names: Vec<&str> = f.space().vars().iter().map(String::as_str).collect();
    if names.len() != args.len() {
        return Err(Error::InvalidInput("argument count does not match the series".into()));
    }
    let bindings: Vec<(&str, &MultiSeries)> = names.iter().copied().zip(args.iter().copied()).collect();
    if exact {
        let t = f.trunc().max(target.trunc());
        return f.extend_exact(t).substitute_polynomial(&bindings, target);
    }
    let ring = target.ring();
    let consts: Vec<Value> = args.iter().map(|a| a.constant_term()).filter(|c| !ring.is_exact_zero(c)).collect();
    if consts.is_empty() {
        return f.substitute(&bindings, target);
    }
    if target.trunc() > f.trunc() {
        return Err(Error::TruncationTooSmall(format!(
            "series known to degree {} cannot be evaluated to degree {}",
            f.trunc(),
            target.trunc()
        )));
    }
    match ring.kind() {
        RingKind::Presented(_) => {
            let mut slack = 0u32;
            for c in &consts {
                let k = ring
                    .nilpotency_index(c, 64)
                    .ok_or_else(|| Error::NotNilpotent(format!("{} is not nilpotent", ring.format(c))))?;
                slack += k - 1;
            }
            if f.trunc() < target.trunc() + slack {
                return Err(Error::TruncationTooSmall(format!(
                    "nilpotent arguments need truncation {} but the series has {}",
                    target.trunc() + slack,
                    f.trunc()
                )));
            }
            f.substitute_polynomial(&bindings, target)
        }
        RingKind::PowerSeries { .. } | RingKind::Laurent { .. } => {
            let mut v = i64::MAX;
            for c in &consts {
                let val = match c {
                    Value::Series(s) => s.terms.keys().next().copied().or(s.prec).unwrap_or(i64::MAX),
                    _ => unreachable!(),
                };
                v = v.min(val);
            }
            if v <= 0 {
                return Err(Error::ConstantTerm(format!(
                    "argument constant {} is not topologically nilpotent",
                    consts.iter().map(|c| ring.format(c)).collect::<Vec<_>>().join(", ")
                )));
            }
            let mut out = f.substitute_polynomial(&bindings, target)?;
            for i in 0..=target.trunc() {
                let p = (f.trunc() as i64 + 1 - i as i64) * v;
                let o = ring.big_o(p)?;
                for m in monomials_of_degree(target.nvars(), i) {
                    out = out.add(&target.monomial(m, o.clone()))?;
                }
            }
            Ok(out)
        }
        _ => Err(Error::NotNilpotent(format!(
            "{} has no nilpotent elements besides zero",
            ring
        ))),
    }
}

impl FormalGroupLaw {
    /// `x + y`.
    pub fn additive(ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
        let s = xy_space(ring, trunc)?;
        FormalGroupLaw::from_polynomial(s.parse("x + y")?)
    }

    /// `x + y - xy`.
    pub fn multiplicative(ring: &Ring, trunc: u32) -> Result<FormalGroupLaw> {
        let s = xy_space(ring, trunc)?;
        FormalGroupLaw::from_polynomial(s.parse("x + y - x*y")?)
    }

    /// `l^{-1}(l(x) + l(y))` for a strict logarithm `l` over a Q-algebra.
    pub fn from_log(l: &MultiSeries) -> Result<FormalGroupLaw> {
        let ring = l.ring();
        if !ring.is_q_algebra() {
            return Err(Error::NotQAlgebra(format!("logarithms need rational coefficients, got {ring}")));
        }
        if l.space().nvars() != 1 {
            return Err(Error::InvalidInput("a logarithm is a univariate series".into()));
        }
        if !ring.is_zero(&l.constant_term()) || !ring.is_one(&l.coefficient(&[1])?) {
            return Err(Error::InvalidInput("a logarithm needs l(0) = 0 and l'(0) = 1".into()));
        }
        let s = xy_space(ring, l.trunc())?;
        let lx = l.substitute(&[(&l.space().vars()[0], &s.var("x")?)], &s)?;
        let ly = l.substitute(&[(&l.space().vars()[0], &s.var("y")?)], &s)?;
        let e = l.reversion()?;
        let law = e.substitute(&[(&e.space().vars()[0], &lx.add(&ly)?)], &s)?;
        FormalGroupLaw::from_series(law)
    }

    /// Validates a bivariate series in `(x, y)` as a group law.
    pub fn from_series(law: MultiSeries) -> Result<FormalGroupLaw> {
        let f = FormalGroupLaw { law, exact: false };
        f.validate()?;
        Ok(f)
    }

    /// Validates an exactly known polynomial group law.
    pub fn from_polynomial(law: MultiSeries) -> Result<FormalGroupLaw> {
        let f = FormalGroupLaw { law, exact: true };
        f.validate()?;
        Ok(f)
    }

    pub fn law(&self) -> &MultiSeries {
        &self.law
    }
    pub fn ring(&self) -> &Ring {
        self.law.ring()
    }
    pub fn trunc(&self) -> u32 {
        self.law.trunc()
    }
    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn check_space(&self) -> Result<()> {
        let vars = self.law.space().vars();
        if vars.len() != 2 || vars[0] != "x" || vars[1] != "y" {
            return Err(Error::InvalidInput("a group law is a series in (x, y)".into()));
        }
        Ok(())
    }

    /// Unit, commutativity and associativity, coefficientwise at the truncation.
    pub fn validate(&self) -> Result<()> {
        self.check_space()?;
        let s = self.law.space();
        let x = s.var("x")?;
        let y = s.var("y")?;
        let zero = s.zero();
        let fx0 = self.sum(&x, &zero)?;
        if fx0 != x {
            return Err(Error::AxiomFailure(format!("F(x,0) = {fx0}")));
        }
        let f0y = self.sum(&zero, &y)?;
        if f0y != y {
            return Err(Error::AxiomFailure(format!("F(0,y) = {f0y}")));
        }
        let swapped = self.sum(&y, &x)?;
        if swapped != self.law {
            return Err(Error::AxiomFailure("F(x,y) != F(y,x)".into()));
        }
        let s3 = SeriesSpace::new(self.ring(), &["x", "y", "z"], self.trunc())?;
        let (x3, y3, z3) = (s3.var("x")?, s3.var("y")?, s3.var("z")?);
        let left = self.sum(&self.sum(&x3, &y3)?, &z3)?;
        let right = self.sum(&x3, &self.sum(&y3, &z3)?)?;
        let defect = left.sub(&right)?;
        if !defect.is_zero() {
            return Err(Error::AxiomFailure(format!("associativity defect {defect}")));
        }
        Ok(())
    }

    /// `F(a, b)` for series in a common space.
    pub fn sum(&self, a: &MultiSeries, b: &MultiSeries) -> Result<MultiSeries> {
        if a.space() != b.space() {
            return Err(Error::ContextMismatch("formal sum of series from different spaces".into()));
        }
        evaluate(&self.law, self.exact, &[a, b], a.space())
    }

    /// The formal inverse series `iota(x)` with `F(x, iota(x)) = 0`.
    pub fn inverse_series(&self) -> Result<MultiSeries> {
        let s = x_space(self.ring(), self.trunc())?;
        let x = s.var("x")?;
        let fy = FormalGroupLaw { law: self.law.derivative(1), exact: self.exact };
        let mut y = x.neg();
        let mut correct = 1u32;
        while correct <= self.trunc() {
            let residual = evaluate(&self.law, self.exact, &[&x, &y], &s)?;
            let slope = evaluate(&fy.law, self.exact, &[&x, &y], &s)?;
            y = y.sub(&residual.mul(&slope.inverse()?)?)?;
            correct *= 2;
        }
        Ok(y)
    }

    /// `iota(a)`.
    pub fn inverse(&self, a: &MultiSeries) -> Result<MultiSeries> {
        let iota = self.inverse_series()?;
        evaluate(&iota, false, &[a], a.space())
    }

    /// `[k]_F(x)` by a binary addition chain.
    pub fn n_series(&self, k: i64) -> Result<MultiSeries> {
        let s = x_space(self.ring(), self.trunc())?;
        let x = s.var("x")?;
        let positive = self.multiple(&x, k.unsigned_abs())?;
        if k < 0 {
            self.inverse(&positive)
        } else {
            Ok(positive)
        }
    }

    fn multiple(&self, a: &MultiSeries, mut n: u64) -> Result<MultiSeries> {
        let mut result = a.space().zero();
        let mut base = a.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = self.sum(&result, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.sum(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// Strict logarithm: integral of `1 / F_y(x, 0)`.
    pub fn log(&self) -> Result<MultiSeries> {
        let ring = self.ring();
        if !ring.is_q_algebra() {
            return Err(Error::NotQAlgebra(format!("logarithm over {ring}")));
        }
        let s = x_space(ring, self.trunc())?;
        let mut coeffs = vec![ring.zero(); self.trunc() as usize];
        for (m, c) in self.law.terms() {
            if m[1] == 1 && (m[0] as usize) < coeffs.len() {
                coeffs[m[0] as usize] = c.clone();
            }
        }
        let dy = s.from_coeffs(&coeffs)?;
        dy.inverse()?.integrate(0)
    }

    /// Compositional inverse of the logarithm.
    pub fn exp(&self) -> Result<MultiSeries> {
        self.log()?.reversion()
    }

    /// `G(x, y) = theta(F(theta^{-1} x, theta^{-1} y))` with the isomorphism `theta: F -> G`.
    pub fn transport(&self, theta: &MultiSeries) -> Result<(FormalGroupLaw, Isomorphism)> {
        if theta.space().nvars() != 1 {
            return Err(Error::InvalidInput("a coordinate change is a univariate series".into()));
        }
        let ring = self.ring();
        if theta.ring() != ring {
            return Err(Error::RingMismatch(format!("law over {ring}, coordinate change over {}", theta.ring())));
        }
        if !ring.is_zero(&theta.constant_term()) {
            return Err(Error::ConstantTerm("a coordinate change needs theta(0) = 0".into()));
        }
        let lin = theta.coefficient(&[1])?;
        if !ring.is_unit(&lin) {
            return Err(Error::NotAUnit(format!("linear coefficient {} of theta", ring.format(&lin))));
        }
        let trunc = self.trunc().min(theta.trunc());
        let theta = theta.truncate(trunc)?;
        let inv = theta.reversion()?;
        let s = xy_space(ring, trunc)?;
        let tv = &theta.space().vars()[0];
        let a = inv.substitute(&[(tv, &s.var("x")?)], &s)?;
        let b = inv.substitute(&[(tv, &s.var("y")?)], &s)?;
        let inner = self.sum(&a, &b)?;
        let law = theta.substitute(&[(tv, &inner)], &s)?;
        let linear = theta.terms().keys().all(|m| m[0] == 1);
        let g = if self.exact && linear {
            FormalGroupLaw::from_polynomial(law)?
        } else {
            FormalGroupLaw::from_series(law)?
        };
        let iso = Isomorphism { theta, source: self.clone(), target: g.clone() };
        Ok((g, iso))
    }

    /// `F(a, b)` for ring elements, which must be nilpotent or topologically
    /// nilpotent unless the law is an exact polynomial.
    pub fn sum_elements(&self, ring: &Ring, a: &Value, b: &Value) -> Result<Value> {
        let s = SeriesSpace::new(ring, &[], 0)?;
        let r = self.sum(&s.constant(a.clone()), &s.constant(b.clone()))?;
        Ok(r.constant_term())
    }

    /// `iota(a)` for a ring element. Exact laws linear in `y` use `-A(a)/B(a)`.
    pub fn inverse_element(&self, ring: &Ring, a: &Value) -> Result<Value> {
        let s = SeriesSpace::new(ring, &[], 0)?;
        let arg = s.constant(a.clone());
        if self.exact && self.law.terms().keys().all(|m| m[1] <= 1) {
            let sx = x_space(self.ring(), self.law.trunc())?;
            let mut a_part = sx.zero();
            let mut b_part = sx.zero();
            for (m, c) in self.law.terms() {
                let t = sx.monomial(vec![m[0]], c.clone());
                if m[1] == 0 {
                    a_part = a_part.add(&t)?;
                } else {
                    b_part = b_part.add(&t)?;
                }
            }
            let av = evaluate(&a_part, true, &[&arg], &s)?.constant_term();
            let bv = evaluate(&b_part, true, &[&arg], &s)?.constant_term();
            return ring.div(&ring.neg(&av), &bv);
        }
        let iota = self.inverse_series()?;
        Ok(evaluate(&iota, false, &[&arg], &s)?.constant_term())
    }

    /// `[k]_F(a)` for a ring element.
    pub fn n_element(&self, ring: &Ring, k: i64, a: &Value) -> Result<Value> {
        let s = SeriesSpace::new(ring, &[], 0)?;
        let m = self.multiple(&s.constant(a.clone()), k.unsigned_abs())?.constant_term();
        if k < 0 {
            self.inverse_element(ring, &m)
        } else {
            Ok(m)
        }
    }

    /// Same law over another ring along the natural coefficient map.
    pub fn change_ring(&self, ring: &Ring) -> Result<FormalGroupLaw> {
        let law = self.law.change_ring(ring)?;
        Ok(FormalGroupLaw { law, exact: self.exact })
    }

    /// Same law at a lower truncation (or a higher one for exact laws).
    pub fn with_trunc(&self, trunc: u32) -> Result<FormalGroupLaw> {
        let law = if self.exact { self.law.extend_exact(trunc) } else { self.law.truncate(trunc)? };
        Ok(FormalGroupLaw { law, exact: self.exact })
    }
}

impl fmt::Display for FormalGroupLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.law)
    }
}
