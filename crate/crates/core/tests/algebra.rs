use lforge::{symmetric_differential, symmetric_relation, Element, Lambda, Monomial};
use proptest::prelude::*;

fn word(max_len: usize, max_sub: u16) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0..=max_sub, 1..=max_len).prop_map(|v| Monomial::new(&v))
}

fn admissible_word(max_len: usize, max_sub: u16) -> impl Strategy<Value = Monomial> {
    word(max_len, max_sub).prop_filter("admissible", Monomial::is_admissible)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn normalize_is_a_projection_onto_the_basis(w in word(5, 16)) {
        let lam = Lambda::new();
        let n = lam.normalize(&Element::from(w.clone())).unwrap();
        prop_assert!(n.is_admissible());
        prop_assert_eq!(lam.normalize(&n).unwrap(), n.clone());
        for m in n.iter() {
            prop_assert_eq!(m.bidegree(), w.bidegree());
            prop_assert_eq!(m.even_count() % 2, w.even_count() % 2);
        }
    }

    #[test]
    fn admissible_words_are_fixed(w in admissible_word(5, 20)) {
        let lam = Lambda::new();
        prop_assert_eq!(lam.normalize(&Element::from(w.clone())).unwrap(), Element::from(w));
    }

    #[test]
    fn multiplication_is_associative(a in word(2, 10), b in word(2, 10), c in word(2, 10)) {
        let lam = Lambda::new();
        let (a, b, c) = (Element::from(a), Element::from(b), Element::from(c));
        let left = lam.multiply(&lam.multiply(&a, &b).unwrap(), &c).unwrap();
        let right = lam.multiply(&a, &lam.multiply(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn d_is_a_derivation(a in word(3, 12), b in word(3, 12)) {
        let lam = Lambda::new();
        let (a, b) = (Element::from(a), Element::from(b));
        let lhs = lam.d(&lam.multiply(&a, &b).unwrap()).unwrap();
        let rhs = lam.multiply(&lam.d(&a).unwrap(), &b).unwrap().add(&lam.multiply(&a, &lam.d(&b).unwrap()).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn d_squares_to_zero(w in word(4, 16)) {
        let lam = Lambda::new();
        let dw = lam.d(&Element::from(w)).unwrap();
        prop_assert!(lam.d(&dw).unwrap().is_zero());
    }

    #[test]
    fn d_agrees_with_its_leibniz_expansion(w in admissible_word(4, 16)) {
        let lam = Lambda::new();
        let raw = Element::from_monomials(lam.d_unnormalized(&w));
        prop_assert_eq!(lam.normalize(&raw).unwrap(), lam.d(&Element::from(w)).unwrap());
    }

    #[test]
    fn theta_is_a_multiplicative_chain_map(a in word(3, 10), b in word(3, 10), k in 1u32..=2) {
        let lam = Lambda::new();
        let (a, b) = (Element::from(a), Element::from(b));
        let a = lam.normalize(&a).unwrap();
        prop_assert_eq!(lam.d(&lam.theta_pow(&a, k)).unwrap(), lam.theta_pow(&lam.d(&a).unwrap(), k));
        let ab = lam.multiply(&a, &b).unwrap();
        let b = lam.normalize(&b).unwrap();
        prop_assert_eq!(lam.theta_pow(&ab, k), lam.multiply(&lam.theta_pow(&a, k), &lam.theta_pow(&b, k)).unwrap());
        prop_assert_eq!(lam.theta_unpow(&lam.theta_pow(&a, k), k).unwrap(), a);
    }

    #[test]
    fn leading_integer_bound(w in admissible_word(5, 24)) {
        // Every term of (dλ_{n1})·rest starts below n1.
        let lam = Lambda::new();
        let n1 = w.subscripts()[0];
        let rest = Element::from(Monomial::new(&w.subscripts()[1..]));
        let x = lam.multiply(&lam.d_generator(n1), &rest).unwrap();
        prop_assert!(x.iter().all(|m| m.subscripts()[0] < n1));
    }
}

#[test]
fn symmetric_form_of_d_matches_the_admissible_form() {
    let lam = Lambda::new();
    for n in 0..=60 {
        let sym = lam.normalize(&symmetric_differential(n)).unwrap();
        assert_eq!(sym, lam.d_generator(n), "d(λ{n})");
    }
}

#[test]
fn symmetric_relations_generate_an_ideal_of_zeros() {
    let lam = Lambda::new();
    for m in 1..=6u32 {
        for n in 0..=(24 - 3 * m) {
            let r = symmetric_relation(m, n);
            assert!(lam.normalize(&r).unwrap().is_zero(), "R({m},{n})");
            for a in 0..6 {
                let x = Element::monomial(&[a]);
                assert!(lam.multiply(&x, &r).unwrap().is_zero());
                assert!(lam.multiply(&r, &x).unwrap().is_zero());
            }
        }
    }
}

#[test]
fn small_differentials() {
    let lam = Lambda::new();
    let d = |s: &str| lam.d(&s.parse().unwrap()).unwrap().to_string();
    assert_eq!(d("(0)"), "0");
    assert_eq!(d("(1)"), "0");
    assert_eq!(d("(2)"), "(1,0)");
    assert_eq!(d("(3)"), "0");
    assert_eq!(d("(1,1,2)"), "(1,1,1,0)");
}

#[test]
fn generators_of_the_form_two_to_the_k_minus_one_are_cycles() {
    let lam = Lambda::new();
    for k in 0..7 {
        assert!(lam.d_generator((1 << k) - 1).is_zero(), "λ{}", (1 << k) - 1);
    }
}

#[test]
fn step_budget_is_enforced() {
    let lam = Lambda::with_step_budget(1);
    let x: Element = "(0,4,10,22)".parse().unwrap();
    assert!(matches!(lam.normalize(&x), Err(lforge::Error::StepBudget { .. })));
}

#[test]
fn generator_differentials() {
    let lam = Lambda::new();
    assert!(lam.d_generator(0).is_zero());
    assert_eq!(lam.d_generator(2).to_string(), "(1,0)");
    assert_eq!(lam.d_generator(4).to_string(), "(3,0) + (2,1)");
    assert_eq!(lam.d(&"(2,2,1)".parse().unwrap()).unwrap().to_string(), "(1,1,1,1)");
}

#[test]
fn raw_differential_terms_keep_even_count_parity() {
    let lam = Lambda::new();
    for t in 1..=20 {
        for s in 1..=4 {
            for m in lforge::enumerate_basis(s, t, lforge::ComplexKind::Lambda) {
                for w in lam.d_unnormalized(&m) {
                    assert_eq!(w.even_count() % 2, m.even_count() % 2, "{m} -> {w}");
                }
            }
        }
    }
}

#[test]
fn differential_matrices() {
    use lforge::{ComplexKind, DifferentialMatrixRequest};
    let lam = Lambda::new();
    let m = lam.d_matrix(DifferentialMatrixRequest { s: 1, t: 3, kind: ComplexKind::Lambda }).unwrap();
    assert_eq!((m.matrix.nrows(), m.matrix.ncols()), (1, 1));
    assert!(m.matrix.get(0, 0));
    let m = lam.d_matrix(DifferentialMatrixRequest { s: 1, t: 1, kind: ComplexKind::Lambda }).unwrap();
    assert!(m.matrix.is_zero());
    let req = DifferentialMatrixRequest { s: 3, t: 8, kind: ComplexKind::LambdaPrime };
    let m = lam.d_matrix(req).unwrap();
    let j = lam.basis(ComplexKind::LambdaPrime, 3, 8).index_of(&Monomial::new(&[2, 2, 1])).unwrap();
    assert!(m.matrix.column(j).is_zero());
}

#[test]
fn symmetric_relation_expansions() {
    assert_eq!(symmetric_relation(1, 0).to_string(), "(0,1)");
    // i = 0 gives λ0λ2 and i = 1 gives λ1λ1.
    assert_eq!(symmetric_relation(1, 1), "(0,2) + (1,1)".parse().unwrap());
    assert_eq!(symmetric_relation(2, 0).to_string(), "(1,3)");
}
