use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::coefficients::{Ring, Value};
use crate::error::{Error, Result};
use crate::polyseries::MultiSeries;

/// Where the exact values of `sin(pi r)` and `cos(pi r)` live.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrigField {
    /// Multiples of `pi/2`.
    Rational,
    /// Multiples of `pi/6`: `Q[w]/(w^2 = 3)`.
    Sqrt3,
    /// Odd multiples of `pi/4`: `Q[w]/(w^2 = 2)`.
    Sqrt2,
    /// `Q[s, c]/(c^2 = 1 - s^2)` with `s = sin(pi r)`, `c = cos(pi r)`.
    Symbolic,
}

impl TrigField {
    pub fn ring(self) -> Ring {
        let q = Ring::rationals();
        match self {
            TrigField::Rational => q,
            TrigField::Sqrt3 => Ring::presented(&q, &["w"], &[("w", 2, "3")]).expect("valid presentation"),
            TrigField::Sqrt2 => Ring::presented(&q, &["w"], &[("w", 2, "2")]).expect("valid presentation"),
            TrigField::Symbolic => Ring::presented(&q, &["s", "c"], &[("c", 2, "1 - s^2")]).expect("valid presentation"),
        }
    }
}

/// `alpha * sin(t x)/t + beta * cos(t x)/t` with `t = pi/qhat` a formal unit.
#[derive(Clone, Debug)]
pub struct TrigForm {
    pub field: TrigField,
    pub alpha: Value,
    pub beta: Value,
}

fn twelfths(r: &BigRational) -> Option<i64> {
    let n = r * BigRational::from_integer(BigInt::from(12));
    n.is_integer().then(|| n.to_integer().to_i64()).flatten()
}

/// `(field, sin(pi r), cos(pi r))` when both are representable.
pub fn sin_cos_pi(r: &BigRational) -> Result<(TrigField, Value, Value)> {
    let unrep = || Error::Unrepresentable(format!("sin and cos of pi*{r} need a larger field"));
    let n = twelfths(r).ok_or_else(unrep)?.rem_euclid(24);
    let field = if n % 6 == 0 {
        TrigField::Rational
    } else if n % 2 == 0 {
        TrigField::Sqrt3
    } else if n % 3 == 0 {
        TrigField::Sqrt2
    } else {
        return Err(unrep());
    };
    let k = field.ring();
    // reference angle in the first quadrant, in units of pi/12
    let quadrant = n / 6;
    let m = n % 6;
    let (s, c) = match m {
        0 => ("0", "1"),
        2 => ("1/2", "w/2"),
        3 => ("w/2", "w/2"),
        4 => ("w/2", "1/2"),
        _ => unreachable!(),
    };
    let (s, c) = (k.parse(s)?, k.parse(c)?);
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, k.neg(&s)),
        2 => (k.neg(&s), k.neg(&c)),
        _ => (k.neg(&c), s),
    };
    Ok((field, s, c))
}

impl TrigForm {
    /// `sin(t x - pi r)/t`; `Unrepresentable` unless `12 r` is an integer whose
    /// angle has exact sine and cosine in a quadratic field.
    pub fn modified_sine(r: &BigRational) -> Result<TrigForm> {
        let (field, s, c) = sin_cos_pi(r)?;
        let k = field.ring();
        Ok(TrigForm { field, alpha: c, beta: k.neg(&s) })
    }

    /// The same with `sin(pi r)`, `cos(pi r)` adjoined as symbols.
    pub fn modified_sine_symbolic() -> TrigForm {
        let k = TrigField::Symbolic.ring();
        TrigForm { field: TrigField::Symbolic, alpha: k.gen_by_name("c").unwrap(), beta: k.neg(&k.gen_by_name("s").unwrap()) }
    }

    pub fn ring(&self) -> Ring {
        self.field.ring()
    }

    /// Substitutes `x -> x + qhat`, that is `t x -> t x + pi`, by angle addition.
    pub fn shift_by_qhat(&self) -> Result<TrigForm> {
        let k = self.ring();
        let (_, sp, cp) = sin_cos_pi(&BigRational::one())?;
        let (sp, cp) = (k.coerce(&Ring::rationals(), &sp)?, k.coerce(&Ring::rationals(), &cp)?);
        let alpha = k.sub(&k.mul(&self.alpha, &cp)?, &k.mul(&self.beta, &sp)?);
        let beta = k.add(&k.mul(&self.alpha, &sp)?, &k.mul(&self.beta, &cp)?);
        Ok(TrigForm { field: self.field, alpha, beta })
    }

    pub fn same_as(&self, other: &TrigForm) -> bool {
        let k = self.ring();
        self.field == other.field && k.eq(&self.alpha, &other.alpha) && k.eq(&self.beta, &other.beta)
    }

    /// Series in `x` through degree `trunc`, coefficients Laurent in `t`.
    pub fn expand(&self, trunc: u32) -> Result<MultiSeries> {
        let k = self.ring();
        let tr = t_ring(&k, trunc)?;
        let sin = sine_series(&k, trunc)?;
        let cos = cos_over_t_series(&k, trunc)?;
        sin.scale(&tr.embed_base(&self.alpha)?)?.add(&cos.scale(&tr.embed_base(&self.beta)?)?)
    }
}

/// Laurent series in `t` over `k`, wide enough for every coefficient through
/// `x^trunc` to be exact.
pub fn t_ring(k: &Ring, trunc: u32) -> Result<Ring> {
    Ring::laurent(k, "t", trunc as i64 + 1, 1)
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// `coeff(j) * t^{texp(j)} * x^j` for `j <= trunc`.
fn t_series(k: &Ring, trunc: u32, f: impl Fn(u32) -> Option<(BigRational, i64)>) -> Result<MultiSeries> {
    let tr = t_ring(k, trunc)?;
    let s = crate::fgl::x_space(&tr, trunc)?;
    let mut coeffs = Vec::new();
    for j in 0..=trunc {
        let c = match f(j) {
            Some((c, e)) if !c.is_zero() => tr.monomial(&k.from_rational(&c)?, e)?,
            _ => tr.zero(),
        };
        coeffs.push(c);
    }
    s.from_coeffs(&coeffs)
}

/// `sin(t x)/t`.
pub fn sine_series(k: &Ring, trunc: u32) -> Result<MultiSeries> {
    t_series(k, trunc, |j| {
        (j % 2 == 1).then(|| {
            let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
            (BigRational::new(BigInt::from(sign), factorial(j)), j as i64 - 1)
        })
    })
}

/// `cos(t x)/t`.
pub fn cos_over_t_series(k: &Ring, trunc: u32) -> Result<MultiSeries> {
    t_series(k, trunc, |j| {
        (j % 2 == 0).then(|| {
            let sign = if (j / 2) % 2 == 0 { 1 } else { -1 };
            (BigRational::new(BigInt::from(sign), factorial(j)), j as i64 - 1)
        })
    })
}
