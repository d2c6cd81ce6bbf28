use lforge::cocomplete::{binom_mod2_at, d_generator_dyadic, d_generator_dyadic_naive};
use lforge::{
    adem_rewrite_pair_dyadic, binom_mod2_dyadic, n_of, orbit_rep, DyadicElement, DyadicMonomial, DyadicRational, Lambda, Monomial,
};
use proptest::prelude::*;

fn q(a: i64, k: u32) -> DyadicRational {
    DyadicRational::new(a, k)
}

fn rational() -> impl Strategy<Value = DyadicRational> {
    (-200i64..200, 0u32..6).prop_map(|(a, k)| q(a, k))
}

/// A monomial of level ≤ 3 whose scaled form has internal degree ≤ 20·2^level.
fn dyadic_monomial() -> impl Strategy<Value = DyadicMonomial> {
    (0u32..=3, prop::collection::vec(0u16..40, 1..=3)).prop_filter_map("degree", |(level, subs)| {
        let m = Monomial::new(&subs);
        (m.internal_degree() <= 20 << level).then(|| DyadicMonomial::from_integer(&m).scale(-(level as i32)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rationals_round_trip(a in rational()) {
        prop_assert_eq!(a.to_string().parse::<DyadicRational>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<DyadicRational>(&json).unwrap(), a);
        prop_assert_eq!(a.mul_pow2(3).mul_pow2(-3), a);
        prop_assert_eq!(a.theta(2).theta(-2), a);
    }

    #[test]
    fn arithmetic_is_exact(a in rational(), b in rational()) {
        prop_assert_eq!(a + b - b, a);
        prop_assert_eq!(a < b, a.scaled_numerator(8).unwrap() < b.scaled_numerator(8).unwrap());
        let n = n_of(a, b);
        prop_assert!(a.scaled_numerator(n).is_some() && b.scaled_numerator(n).is_some());
    }

    #[test]
    fn binomials_are_stable_under_refinement(a in rational(), b in rational()) {
        let n = n_of(a, b);
        prop_assert_eq!(binom_mod2_at(a, b, n), binom_mod2_at(a, b, n + 1));
        prop_assert_eq!(binom_mod2_dyadic(a, b), binom_mod2_at(a, b, n + 2));
    }

    #[test]
    fn operations_commute_with_theta(x in dyadic_monomial(), y in dyadic_monomial(), k in -2i32..=3) {
        let lam = Lambda::new();
        let (x, y): (DyadicElement, DyadicElement) = (x.into(), y.into());
        let n = lam.normalize_dyadic(&x).unwrap();
        prop_assert_eq!(lam.normalize_dyadic(&x.scale(k)).unwrap(), n.scale(k));
        prop_assert_eq!(lam.normalize_dyadic_direct(&x).unwrap(), n);
        let d = lam.d_dyadic(&x).unwrap();
        prop_assert_eq!(lam.d_dyadic(&x.scale(k)).unwrap(), d.scale(k));
        prop_assert_eq!(lam.d_dyadic_direct(&x).unwrap(), d.clone());
        prop_assert!(lam.d_dyadic(&d).unwrap().is_zero());
        let p = lam.multiply_dyadic(&x, &y).unwrap();
        prop_assert_eq!(lam.multiply_dyadic(&x.scale(k), &y.scale(k)).unwrap(), p.scale(k));
    }

    #[test]
    fn orbit_representatives(a in -64i64..=64, k in 0u32..=4) {
        let n = q(a, k);
        prop_assume!(n > q(-1, 0));
        let r = orbit_rep(n).unwrap();
        let v = r.as_integer().unwrap();
        prop_assert!(v >= 0 && v % 2 == 0);
        prop_assert_eq!(orbit_rep(n.theta(1)).unwrap(), r);
        prop_assert_eq!(orbit_rep(r.theta(3)).unwrap(), r);
    }
}

#[test]
fn dyadic_generator_formula_matches_scaling() {
    let lam = Lambda::new();
    for k in 0..=3 {
        for a in 0..(40 << k) {
            let n = q(a, k);
            let x = DyadicElement::monomial(&[n]).unwrap();
            assert_eq!(d_generator_dyadic(n), lam.d_dyadic(&x).unwrap(), "d(λ{n})");
        }
    }
}

#[test]
fn naive_coefficients_break_equivariance() {
    let half = q(1, 1);
    assert!(d_generator_dyadic_naive(half).is_zero());
    assert!(!d_generator_dyadic(half).is_zero());
}

#[test]
fn dyadic_relations_are_relations() {
    let lam = Lambda::new();
    for k in 0..=2 {
        for a in -3..(12 << k) {
            for b in -3..(40 << k) {
                let (i, j) = (q(a, k), q(b, k));
                let Ok(rhs) = adem_rewrite_pair_dyadic(i, j) else { continue };
                let lhs: DyadicElement = DyadicMonomial::new(vec![i, j]).unwrap().into();
                assert_eq!(lam.normalize_dyadic(&rhs).unwrap(), lam.normalize_dyadic(&lhs).unwrap(), "λ{i}λ{j}");
            }
        }
    }
}

#[test]
fn even_generators_are_not_cycles() {
    let lam = Lambda::new();
    for m in 1..=32 {
        let x = DyadicElement::monomial(&[q(2 * m, 0)]).unwrap();
        assert!(!lam.d_dyadic(&x).unwrap().is_zero());
    }
}

#[test]
fn first_line_of_the_localization() {
    let lam = Lambda::new();
    let r = lam.localized_ext(1, q(3, 1), 3).unwrap();
    assert_eq!(r.levels.iter().map(|l| l.t).collect::<Vec<_>>(), [3, 6, 12, 24]);
    assert_eq!(r.composite_rank, 0);
    let r = lam.localized_ext(1, q(1, 2), 4).unwrap();
    assert!(r.levels.iter().all(|l| l.dim == 1) && r.stabilized && r.composite_rank == 1);
    assert!(lam.localized_ext(1, q(0, 0), 2).is_err());
}

#[test]
fn parsing() {
    let e: DyadicElement = "(0,1/2) + (-1/4,3/4)".parse().unwrap();
    assert_eq!(e.terms().len(), 2);
    assert!(!e.is_admissible());
    assert!("(-1)".parse::<DyadicElement>().is_err());
    assert!("(1/3)".parse::<DyadicElement>().is_err());
}
