use num_bigint::BigInt;
use num_rational::BigRational;

use super::*;
use crate::coefficients::Ring;
use crate::equivariant::EquivariantContext;
use crate::fgl::{x_space, FormalGroupLaw};

fn rat(s: &str) -> BigRational {
    s.parse().unwrap()
}

#[test]
fn theta_additive_first_factor() {
    let ctx = EquivariantContext::additive(4, 4, 5).unwrap();
    let th = theta(&ctx, 1).unwrap();
    let s = x_space(ctx.ring(), 5).unwrap();
    assert_eq!(th.series, s.parse("x - qhat^-2*x^3").unwrap());
    assert!(th.exact);
}

#[test]
fn theta_additive_partial_zeta_sums() {
    let ctx = EquivariantContext::additive(4, 8, 7).unwrap();
    let th = theta(&ctx, 3).unwrap();
    let r = ctx.ring();
    assert_eq!(th.series.coefficient(&[3]).unwrap(), r.parse("-49/36*qhat^-2").unwrap());
    for k in -3..=3 {
        assert!(r.is_zero(&th.kernel_value(&ctx, k).unwrap()), "k = {k}");
    }
    assert!(!r.is_zero(&th.kernel_value(&ctx, 4).unwrap()));
}

#[test]
fn theta_multiplicative_kernel_and_strictness() {
    let ctx = EquivariantContext::multiplicative(6, 6, 5).unwrap();
    let th = theta(&ctx, 2).unwrap();
    let r = ctx.ring();
    assert!(th.exact);
    assert!(r.is_exact_zero(&th.strictness_defect().unwrap()) || r.is_zero(&th.strictness_defect().unwrap()));
    for c in th.series.terms().values() {
        if let crate::Value::Series(sv) = c {
            assert!(sv.prec.map_or(true, |p| p >= 7), "precision {:?}", sv.prec);
        }
    }
    for k in [-2, -1, 1, 2] {
        assert!(r.is_zero(&th.kernel_value(&ctx, k).unwrap()), "k = {k}");
    }
    assert!(!r.is_zero(&th.kernel_value(&ctx, 3).unwrap()));
}

#[test]
fn theta_needs_units() {
    let borel = EquivariantContext::borel(&FormalGroupLaw::additive(&Ring::rationals(), 3).unwrap(), 4).unwrap();
    assert!(matches!(theta(&borel, 1), Err(crate::Error::NotAUnit(_))));
}

fn lp(ring: &Ring, pairs: &[(i64, &str)]) -> LaurentPoly {
    LaurentPoly::new(ring, pairs.iter().map(|(e, c)| (*e, ring.parse(c).unwrap())).collect())
}

#[test]
fn sigma_low_orders() {
    let r0 = sigma_ring(0, 2).unwrap();
    assert!(sigma(&r0).unwrap().eq(&lp(&r0, &[(0, "1"), (1, "-1")])));

    let r2 = sigma_ring(2, 4).unwrap();
    let s = sigma(&r2).unwrap();
    let one_minus_l = lp(&r2, &[(0, "1"), (1, "-1")]);
    let full = lp(&r2, &[(-1, "-q - 3*q^2"), (0, "1 + 2*q + 6*q^2"), (1, "-q - 3*q^2")]);
    assert!(s.eq(&one_minus_l.mul(&full).unwrap()));
    // only the k = 1 factor: the q^2 coefficient is 4 - 2L - 2/L
    let first = lp(&r2, &[(-1, "-q"), (0, "1 + q^2"), (1, "-q")]).mul(&lp(&r2, &[(0, "1 + 2*q + 3*q^2")])).unwrap();
    let partial = lp(&r2, &[(-1, "-q - 2*q^2"), (0, "1 + 2*q + 4*q^2"), (1, "-q - 2*q^2")]);
    assert!(first.eq(&partial));
    assert!(r2.is_zero(&s.at_one()));
}

#[test]
fn sigma_identities() {
    let orders = SigmaOrders { qorder: 6, lbound: 4 };
    assert!(functional_equation_check(orders).unwrap());
    for r in ["1/2", "0", "-3/2", "5/2", "7/3"] {
        assert!(modified_identity_check(&rat(r), orders).unwrap(), "r = {r}");
    }
}

#[test]
fn sigma_modified_values() {
    let ring = sigma_ring(4, 8).unwrap();
    let s = sigma(&ring).unwrap();
    assert!(sigma_modified(&s, flat(&rat("1/2"))).unwrap().eq(&s));
    let expected = s.shift(1).neg().scale(&ring.parse("q^-1").unwrap()).unwrap();
    assert!(sigma_modified(&s, flat(&rat("1"))).unwrap().eq(&expected));
    let narrow = sigma_ring(2, 0).unwrap();
    let sn = sigma(&narrow).unwrap();
    assert!(matches!(sigma_modified(&sn, 1), Err(crate::Error::TailOverflow { .. })));
}

#[test]
fn modified_sine_values() {
    let s0 = TrigForm::modified_sine(&rat("0")).unwrap();
    let k = s0.ring();
    let e0 = s0.expand(5).unwrap();
    let tr = t_ring(&k, 5).unwrap();
    let expected = x_space(&tr, 5).unwrap().parse("x - 1/6*t^2*x^3 + 1/120*t^4*x^5").unwrap();
    assert_eq!(e0, expected);

    let half = TrigForm::modified_sine(&rat("1/2")).unwrap();
    assert_eq!(half.expand(6).unwrap(), cos_over_t_series(&half.ring(), 6).unwrap().neg());

    let third = TrigForm::modified_sine(&rat("1/3")).unwrap();
    assert_eq!(third.field, TrigField::Sqrt3);
    let k3 = third.ring();
    assert!(k3.eq(&third.alpha, &k3.parse("1/2").unwrap()));
    assert!(k3.eq(&third.beta, &k3.parse("-w/2").unwrap()));

    let quarter = TrigForm::modified_sine(&rat("-3/4")).unwrap();
    let k2 = quarter.ring();
    assert!(k2.eq(&quarter.alpha, &k2.parse("-w/2").unwrap()));
    assert!(k2.eq(&quarter.beta, &k2.parse("w/2").unwrap()));

    assert!(matches!(TrigForm::modified_sine(&rat("1/12")), Err(crate::Error::Unrepresentable(_))));
    assert!(matches!(TrigForm::modified_sine(&rat("1/5")), Err(crate::Error::Unrepresentable(_))));
}

#[test]
fn sin_cos_satisfy_pythagoras() {
    for n in 0..24 {
        let r = BigRational::new(BigInt::from(n), BigInt::from(12));
        if let Ok((field, s, c)) = sin_cos_pi(&r) {
            let k = field.ring();
            let sum = k.add(&k.mul(&s, &s).unwrap(), &k.mul(&c, &c).unwrap());
            assert!(k.is_one(&sum), "n = {n}");
        }
    }
}

#[test]
fn modified_sine_periodicity() {
    for r in ["0", "1/2", "1/3", "3/4", "-5/6", "2", "7/4"] {
        let r = rat(r);
        let lhs = TrigForm::modified_sine(&(&r + BigRational::from_integer(1.into()))).unwrap().shift_by_qhat().unwrap();
        let rhs = TrigForm::modified_sine(&r).unwrap();
        assert!(lhs.same_as(&rhs), "r = {r}");
        assert_eq!(lhs.expand(6).unwrap(), rhs.expand(6).unwrap());
    }
    let sym = TrigForm::modified_sine_symbolic();
    let k = sym.ring();
    let shifted = sym.shift_by_qhat().unwrap();
    assert!(k.eq(&shifted.alpha, &k.neg(&sym.alpha)) && k.eq(&shifted.beta, &k.neg(&sym.beta)));
    assert!(shifted.shift_by_qhat().unwrap().same_as(&sym));
}

fn eps_ring(m: i64) -> Ring {
    Ring::presented(&Ring::integers_mod(m).unwrap(), &["eps"], &[("eps", 2, "0")]).unwrap()
}

#[test]
fn tate_products() {
    let a = eps_ring(9);
    let ga = FormalGroupLaw::additive(&Ring::integers(), 4).unwrap();
    let t = TateGroup::new(&ga, &a, a.parse("3*eps").unwrap()).unwrap();
    let p = t.parse_point("eps", "1/4").unwrap();
    let q = t.parse_point("2*eps", "1/2").unwrap();
    let pq = t.mul(&p, &q).unwrap();
    assert_eq!(t.format_point(&pq), "(3*eps, 3/4)");
    let q2 = t.parse_point("2*eps", "2/3").unwrap();
    let p2 = t.parse_point("eps", "1/2").unwrap();
    assert_eq!(t.format_point(&t.mul(&p2, &q2).unwrap()), "(0, 1/6)");
    assert!(t.eq(&t.mul(&p, &t.identity()).unwrap(), &p));
    for pt in [&p, &q, &q2] {
        assert!(t.is_identity(&t.mul(pt, &t.inv(pt).unwrap()).unwrap()));
    }
    assert!(t.parse_point("eps", "1").is_err());
    assert!(t.parse_point("1 + eps", "0").is_err());
}

#[test]
fn torsion_orders() {
    let a = eps_ring(9);
    let ga = FormalGroupLaw::additive(&Ring::integers(), 4).unwrap();
    let t = TateGroup::new(&ga, &a, a.parse("3*eps").unwrap()).unwrap();
    let n = t.torsion_order(&t.parse_point("eps", "0").unwrap(), 20).unwrap().unwrap();
    assert_eq!(9 % n, 0);
    assert_eq!(t.torsion_order(&t.identity(), 5).unwrap(), Some(1));

    let t0 = TateGroup::new(&ga, &eps_ring(5), eps_ring(5).zero()).unwrap();
    assert_eq!(t0.torsion_order(&t0.parse_point("0", "1/3").unwrap(), 10).unwrap(), Some(3));

    let a4 = eps_ring(4);
    let gm = FormalGroupLaw::multiplicative(&Ring::integers(), 4).unwrap();
    let t4 = TateGroup::new(&gm, &a4, a4.parse("2*eps").unwrap()).unwrap();
    let p = t4.parse_point("eps", "1/2").unwrap();
    let order = t4.torsion_order(&p, 50).unwrap().unwrap();
    let mut acc = t4.identity();
    for i in 1..=order {
        acc = t4.mul(&acc, &p).unwrap();
        assert_eq!(t4.is_identity(&acc), i == order);
    }
}

#[test]
fn exact_sequence() {
    let a = eps_ring(9);
    let ga = FormalGroupLaw::additive(&Ring::integers(), 4).unwrap();
    let t = TateGroup::new(&ga, &a, a.parse("3*eps").unwrap()).unwrap();
    let samples: Vec<_> = [("eps", "1/3"), ("2*eps", "5/4"), ("0", "-7/2"), ("4*eps", "0")]
        .iter()
        .map(|(g, r)| (a.parse(g).unwrap(), rat(r)))
        .collect();
    let rep = t.exact_sequence_check(&samples).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    let one = t.from_pair(t.qhat(), &rat("1")).unwrap();
    assert!(t.is_identity(&one));

    let a4 = eps_ring(4);
    let gm = FormalGroupLaw::multiplicative(&Ring::integers(), 4).unwrap();
    let t4 = TateGroup::new(&gm, &a4, a4.parse("2*eps").unwrap()).unwrap();
    let samples: Vec<_> = [("eps", "1/2"), ("3*eps", "3/2"), ("2*eps", "-1/3")]
        .iter()
        .map(|(g, r)| (a4.parse(g).unwrap(), rat(r)))
        .collect();
    let rep = t4.exact_sequence_check(&samples).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    assert!(rep.checked > 0);
}
