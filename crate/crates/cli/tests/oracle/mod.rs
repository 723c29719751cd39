//! Reference arithmetic on plain rational vectors, written without the
//! library so that its results can be compared against the library's.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Univariate series `sum c[j] x^j`, always of length `trunc + 1`.
pub type Series = Vec<BigRational>;

pub fn zero(trunc: usize) -> Series {
    vec![BigRational::zero(); trunc + 1]
}

pub fn one(trunc: usize) -> Series {
    let mut s = zero(trunc);
    s[0] = BigRational::one();
    s
}

pub fn mul(a: &Series, b: &Series) -> Series {
    let n = a.len().min(b.len());
    let mut out = zero(n - 1);
    for i in 0..n {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += &a[i] * &b[j];
        }
    }
    out
}

pub fn pow(a: &Series, e: u32) -> Series {
    let mut out = one(a.len() - 1);
    for _ in 0..e {
        out = mul(&out, a);
    }
    out
}

/// Inverse of a series with constant term one, by the recursion
/// `b[n] = -sum_{k>=1} a[k] b[n-k]`.
pub fn inv(a: &Series) -> Series {
    assert!(a[0].is_one(), "oracle inverse expects constant term 1");
    let mut b = zero(a.len() - 1);
    b[0] = BigRational::one();
    for n in 1..a.len() {
        let mut acc = BigRational::zero();
        for k in 1..=n {
            acc -= &a[k] * &b[n - k];
        }
        b[n] = acc;
    }
    b
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `h / (1 - e^{-h})`.
pub fn todd(trunc: usize) -> Series {
    // (1 - e^{-h}) / h = sum (-1)^j h^j / (j+1)!
    let s: Series = (0..=trunc)
        .map(|j| {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            BigRational::new(BigInt::from(sign), factorial(j as u32 + 1))
        })
        .collect();
    inv(&s)
}

/// `(h/2) / sinh(h/2)`.
pub fn ahat(trunc: usize) -> Series {
    let mut s = zero(trunc);
    for j in (0..=trunc).step_by(2) {
        s[j] = BigRational::new(BigInt::one(), factorial(j as u32 + 1) * BigInt::from(2).pow(j as u32));
    }
    inv(&s)
}

/// Coefficient of `h^n` in `Q(h)^{n+1}`: the genus of `CP^n`.
pub fn projective_genus(q: &Series, n: usize) -> BigRational {
    pow(&q[..=n].to_vec(), n as u32 + 1)[n].clone()
}

/// Bernoulli numbers `B_0..B_n` with `B_1 = -1/2`.
pub fn bernoulli(n: usize) -> Vec<BigRational> {
    let mut b = vec![BigRational::zero(); n + 1];
    b[0] = BigRational::one();
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for k in 0..m {
            acc += BigRational::from_integer(binomial(m as i64 + 1, k as i64)) * &b[k];
        }
        b[m] = -acc / int(m as i64 + 1);
    }
    b
}

pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for i in 0..k {
        out = out * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    out
}

pub fn divisor_power_sum(n: u64, p: u32) -> BigInt {
    (1..=n).filter(|d| n % d == 0).map(|d| BigInt::from(d).pow(p)).sum()
}

/// Power series in `h` whose coefficients are power series in `q`:
/// `c[j][m]` is the coefficient of `h^j q^m`.
pub type Bi = Vec<Vec<BigRational>>;

fn bi_zero(h: usize, q: usize) -> Bi {
    vec![vec![BigRational::zero(); q + 1]; h + 1]
}

fn bi_mul(a: &Bi, b: &Bi) -> Bi {
    let (h, q) = (a.len() - 1, a[0].len() - 1);
    let mut out = bi_zero(h, q);
    for i in 0..=h {
        for j in 0..=h - i {
            for m in 0..=q {
                if a[i][m].is_zero() {
                    continue;
                }
                for n in 0..=q - m {
                    out[i + j][m + n] += &a[i][m] * &b[j][n];
                }
            }
        }
    }
    out
}

/// `exp(s)` for `s` without `h^0` term.
fn bi_exp(s: &Bi) -> Bi {
    let (h, q) = (s.len() - 1, s[0].len() - 1);
    let mut out = bi_zero(h, q);
    out[0][0] = BigRational::one();
    let mut term = out.clone();
    for k in 1..=h {
        term = bi_mul(&term, s);
        let f = BigRational::from_integer(factorial(k as u32));
        for (o, t) in out.iter_mut().zip(&term) {
            for (x, y) in o.iter_mut().zip(t) {
                *x += y / &f;
            }
        }
    }
    out
}

/// `log Q(h) = sum_k 2 G_{2k} h^{2k} / (2k)!` with
/// `G_{2k} = -B_{2k}/(4k) + sum_n sigma_{2k-1}(n) q^n`, evaluated at `scale * h`.
fn witten_log(h: usize, q: usize, scale: i64) -> Bi {
    let b = bernoulli(h);
    let mut s = bi_zero(h, q);
    for k in 1..=h / 2 {
        let j = 2 * k;
        let w = int(2) * BigRational::from_integer(BigInt::from(scale).pow(j as u32))
            / BigRational::from_integer(factorial(j as u32));
        s[j][0] = -&b[j] / int(4 * k as i64) * &w;
        for n in 1..=q {
            s[j][n] = BigRational::from_integer(divisor_power_sum(n as u64, j as u32 - 1)) * &w;
        }
    }
    s
}

/// Witten genus of a degree `e` hypersurface of dimension `n` with `e = n + 2`,
/// through `q^qorder`, from the Eisenstein series form of its characteristic
/// series.
pub fn witten_hypersurface(n: usize, e: i64, qorder: usize) -> Vec<BigRational> {
    // tangent + O(e) = (n+2) O(1): Q(h)^{n+2} / Q(e h)
    let mut log = bi_zero(n, qorder);
    let a = witten_log(n, qorder, 1);
    let b = witten_log(n, qorder, e);
    for j in 0..=n {
        for m in 0..=qorder {
            log[j][m] = int(n as i64 + 2) * &a[j][m] - &b[j][m];
        }
    }
    let total = bi_exp(&log);
    total[n].iter().map(|c| c * int(e)).collect()
}

/// Laurent polynomials in `L` with coefficients truncated in `q`:
/// keys `(L exponent, q exponent)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Lq {
    pub terms: BTreeMap<(i64, i64), BigRational>,
    pub qorder: i64,
}

impl Lq {
    pub fn monomial(c: BigRational, l: i64, q: i64, qorder: i64) -> Lq {
        let mut terms = BTreeMap::new();
        if q <= qorder && !c.is_zero() {
            terms.insert((l, q), c);
        }
        Lq { terms, qorder }
    }

    pub fn add(&self, other: &Lq) -> Lq {
        let mut terms = self.terms.clone();
        for (k, v) in &other.terms {
            let e = terms.entry(*k).or_insert_with(BigRational::zero);
            *e += v;
        }
        terms.retain(|_, v| !v.is_zero());
        Lq { terms, qorder: self.qorder }
    }

    pub fn mul(&self, other: &Lq) -> Lq {
        let mut out = Lq { terms: BTreeMap::new(), qorder: self.qorder };
        for ((l1, q1), a) in &self.terms {
            for ((l2, q2), b) in &other.terms {
                if q1 + q2 <= self.qorder {
                    out = out.add(&Lq::monomial(a * b, l1 + l2, q1 + q2, self.qorder));
                }
            }
        }
        out
    }

    pub fn coeff(&self, l: i64, q: i64) -> BigRational {
        self.terms.get(&(l, q)).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn l_range(&self) -> (i64, i64) {
        let lo = self.terms.keys().map(|k| k.0).min().unwrap_or(0);
        let hi = self.terms.keys().map(|k| k.0).max().unwrap_or(0);
        (lo, hi)
    }
}

/// `(1 - L) prod_{n>=1} (1 - q^n L)(1 - q^n / L) / (1 - q^n)^2` through `q^qorder`.
pub fn sigma(qorder: i64) -> Lq {
    let m = |c: i64, l: i64, q: i64| Lq::monomial(int(c), l, q, qorder);
    let mut acc = m(1, 0, 0).add(&m(-1, 1, 0));
    for n in 1..=qorder {
        acc = acc.mul(&m(1, 0, 0).add(&m(-1, 1, n)));
        acc = acc.mul(&m(1, 0, 0).add(&m(-1, -1, n)));
        // 1 / (1 - q^n) = sum_j q^{nj}
        let mut geo = m(0, 0, 0);
        for j in 0..=qorder / n {
            geo = geo.add(&m(1, 0, n * j));
        }
        acc = acc.mul(&geo).mul(&geo);
    }
    acc
}

/// `sigma(1 - x)` as a series in `x` through `x^trunc`; entry `[j][m]` is the
/// coefficient of `x^j q^m`.
pub fn sigma_at_one_minus_x(s: &Lq, trunc: usize) -> Vec<Vec<BigRational>> {
    let q = s.qorder as usize;
    let mut out = vec![vec![BigRational::zero(); q + 1]; trunc + 1];
    for ((l, qe), c) in &s.terms {
        for (j, row) in out.iter_mut().enumerate() {
            // coefficient of x^j in (1 - x)^l
            let b = if *l >= 0 {
                binomial(*l, j as i64)
            } else {
                binomial(-l + j as i64 - 1, j as i64)
            };
            let sign = if *l >= 0 && j % 2 == 1 { -1 } else { 1 };
            row[*qe as usize] += c * BigRational::from_integer(b * BigInt::from(sign));
        }
    }
    out
}
