use crate::coefficients::{Ring, Value};
use crate::equivariant::EquivariantContext;
use crate::error::{Error, Result};
use crate::fgl::{evaluate, x_space, FormalGroupLaw};
use crate::polyseries::{MultiSeries, SeriesSpace};

/// The renormalized product `x * prod_{0<|k|<=N} (x +_F [k]qhat) / [k]qhat`.
#[derive(Clone, Debug)]
pub struct ThetaSeries {
    pub law: FormalGroupLaw,
    pub n: u32,
    pub series: MultiSeries,
    /// The product is a polynomial of degree at most the truncation, so
    /// the series is known in full.
    pub exact: bool,
}

/// Series ring bounds as `(order, tail)` in the form the constructors take.
pub(crate) fn series_bounds(ring: &Ring) -> Option<(i64, u32)> {
    let cap = ring.series_cap()?;
    let floor = ring.series_floor()?;
    match ring.kind() {
        crate::RingKind::Laurent { .. } => Some((cap - 1, (-floor) as u32)),
        _ => Some((cap, 0)),
    }
}

/// Coerces every coefficient of `s` into `ring`.
pub(crate) fn narrow(s: &MultiSeries, ring: &Ring) -> Result<MultiSeries> {
    let from = s.ring().clone();
    s.map_coeffs(ring, |c| ring.coerce(&from, c))
}

/// Computes the product at cutoff `n`. The factors are formed with a few extra
/// orders of the series variable so that dividing by `[k]qhat` costs no
/// precision in the declared ring.
pub fn theta(ctx: &EquivariantContext, n: u32) -> Result<ThetaSeries> {
    if n == 0 {
        return Err(Error::InvalidInput("cutoff must be positive".into()));
    }
    let work = match series_bounds(ctx.ring()) {
        Some((order, tail)) => ctx.with_qorder(order + n as i64 + 1, tail + n)?,
        None => ctx.clone(),
    };
    let ring = work.ring();
    let s = x_space(ring, ctx.trunc())?;
    let x = s.var("x")?;
    let mut acc = x.clone();
    for k in (1..=n as i64).flat_map(|k| [k, -k]) {
        let c = work.n_qhat(k)?;
        let cinv = ring
            .inverse(&c)
            .map_err(|_| Error::NotAUnit(format!("[{k}](qhat) = {} in {ring}", ring.format(&c))))?;
        let factor = work.law().sum(&x, &s.constant(c))?.scale(&cinv)?;
        acc = acc.mul(&factor)?;
    }
    let law = ctx.law();
    let exact = law.is_exact() && {
        let dx = law.law().terms().keys().map(|m| m[0]).max().unwrap_or(1);
        1 + 2 * n * dx <= ctx.trunc()
    };
    Ok(ThetaSeries { law: law.clone(), n, series: narrow(&acc, ctx.ring())?, exact })
}

impl ThetaSeries {
    pub fn ring(&self) -> &Ring {
        self.series.ring()
    }

    /// `Theta(a)` for a ring element `a`.
    pub fn eval(&self, a: &Value) -> Result<Value> {
        let ring = self.ring();
        let s = SeriesSpace::new(ring, &[], 0)?;
        Ok(evaluate(&self.series, self.exact, &[&s.constant(a.clone())], &s)?.constant_term())
    }

    /// `Theta([k]qhat)`, which vanishes for `0 < |k| <= N`.
    pub fn kernel_value(&self, ctx: &EquivariantContext, k: i64) -> Result<Value> {
        self.eval(&ctx.n_qhat(k)?)
    }

    /// Linear coefficient minus one: zero modulo the maximal ideal.
    pub fn strictness_defect(&self) -> Result<Value> {
        let r = self.ring();
        Ok(r.sub(&self.series.coefficient(&[1])?, &r.one()))
    }
}
