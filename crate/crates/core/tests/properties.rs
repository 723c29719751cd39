use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use tatefgl::equivariant::EquivariantContext;
use tatefgl::fgl::x_space;
use tatefgl::genus::{self, ChernData};
use tatefgl::tate::{self, SigmaOrders, TateGroup, TrigForm};
use tatefgl::{FormalGroupLaw, Ring};

fn qq() -> Ring {
    Ring::rationals()
}

fn coordinate(c: &[i64]) -> String {
    let mut s = String::from("x");
    for (i, a) in c.iter().enumerate() {
        s.push_str(&format!(" + ({a})*x^{}", i + 2));
    }
    s
}

fn eps9() -> Ring {
    Ring::presented(&Ring::integers_mod(9).unwrap(), &["eps"], &[("eps", 2, "0")]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn transported_laws_are_laws(c in prop::collection::vec(-3i64..4, 1..4)) {
        let gm = FormalGroupLaw::multiplicative(&qq(), 6).unwrap();
        let theta = x_space(&qq(), 6).unwrap().parse(&coordinate(&c)).unwrap();
        let (g, iso) = gm.transport(&theta).unwrap();
        prop_assert!(iso.is_strict());
        prop_assert!(g.validate().is_ok());
        // theta carries the sum of F to the sum of G
        let s = g.law().space().clone();
        let th = |v: &str| theta.substitute(&[("x", &s.var(v).unwrap())], &s).unwrap();
        let lhs = g.law().substitute(&[("x", &th("x")), ("y", &th("y"))], &s).unwrap();
        let rhs = theta.substitute(&[("x", gm.law())], &s).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn log_and_exp_are_inverse(c in prop::collection::vec(-3i64..4, 1..4)) {
        let l = x_space(&qq(), 7).unwrap().parse(&coordinate(&c)).unwrap();
        let f = FormalGroupLaw::from_log(&l).unwrap();
        prop_assert_eq!(f.log().unwrap(), l.clone());
        prop_assert_eq!(f.exp().unwrap().compose(&l).unwrap(), x_space(&qq(), 7).unwrap().var("x").unwrap());
    }

    #[test]
    fn n_series_is_additive(a in -4i64..5, b in -4i64..5) {
        let gm = FormalGroupLaw::multiplicative(&qq(), 6).unwrap();
        let na = gm.n_series(a).unwrap();
        let nb = gm.n_series(b).unwrap();
        prop_assert_eq!(gm.sum(&na, &nb).unwrap(), gm.n_series(a + b).unwrap());
    }

    #[test]
    fn tate_products_associate(
        g in prop::collection::vec(0i64..9, 3),
        a in prop::collection::vec((0i64..12, 1i64..13), 3),
    ) {
        let ring = eps9();
        let ga = FormalGroupLaw::additive(&Ring::integers(), 4).unwrap();
        let t = TateGroup::new(&ga, &ring, ring.parse("3*eps").unwrap()).unwrap();
        let pts: Vec<_> = g
            .iter()
            .zip(&a)
            .map(|(g, (n, d))| {
                let r = BigRational::new(BigInt::from(n % d), BigInt::from(*d));
                t.point(ring.parse(&format!("{g}*eps")).unwrap(), r).unwrap()
            })
            .collect();
        let l = t.mul(&t.mul(&pts[0], &pts[1]).unwrap(), &pts[2]).unwrap();
        let r = t.mul(&pts[0], &t.mul(&pts[1], &pts[2]).unwrap()).unwrap();
        prop_assert!(t.eq(&l, &r));
        prop_assert!(t.is_identity(&t.mul(&pts[0], &t.inv(&pts[0]).unwrap()).unwrap()));
    }

    #[test]
    fn modified_sigma_shifts(n in -12i64..13, d in prop::sample::select(vec![1i64, 2, 3, 4, 6])) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        let orders = SigmaOrders { qorder: 4, lbound: 3 };
        prop_assert!(tate::modified_identity_check(&r, orders).unwrap());
    }

    #[test]
    fn modified_sine_shifts(n in -24i64..25, d in prop::sample::select(vec![1i64, 2, 3, 4, 6])) {
        let r = BigRational::new(BigInt::from(n), BigInt::from(d));
        let next = &r + BigRational::from_integer(1.into());
        let lhs = TrigForm::modified_sine(&next).unwrap().shift_by_qhat().unwrap();
        prop_assert!(lhs.same_as(&TrigForm::modified_sine(&r).unwrap()));
    }
}

#[test]
fn genera_are_multiplicative_on_products() {
    let gm = FormalGroupLaw::multiplicative(&qq(), 6).unwrap();
    let td = genus::todd_series_of(&gm).unwrap();
    let ah = genus::ahat_series(5).unwrap();
    let x = ChernData::hypersurface("a", 2, 3);
    let y = ChernData::projective("b", 3);
    let xy = x.product(&y).unwrap();
    for q in [&td, &ah] {
        let lhs = genus::genus_eval(&xy, q).unwrap();
        let rhs = qq().mul(&genus::genus_eval(&x, q).unwrap(), &genus::genus_eval(&y, q).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn theta_kernel_contains_the_cyclic_subgroup() {
    for ctx in [
        EquivariantContext::additive(4, 12, 7).unwrap(),
        // x^7 at 1 - q^-3 costs 21 orders of q
        EquivariantContext::multiplicative(30, 30, 7).unwrap(),
    ] {
        let th = tate::theta(&ctx, 3).unwrap();
        for k in [-3, -2, -1, 1, 2, 3] {
            assert!(ctx.ring().is_zero(&th.kernel_value(&ctx, k).unwrap()), "k = {k}");
        }
    }
}

#[test]
fn loop_genus_of_a_product_with_gm() {
    let ctx = EquivariantContext::multiplicative(4, 16, 3).unwrap();
    let x = ChernData::projective("a", 1).product(&ChernData::projective("b", 1)).unwrap();
    assert!(genus::loop_vs_quotient_check(&x, &ctx, 2).unwrap());
}
