use lforge::bockstein::last_page;
use lforge::{ComplexKind, Element, Lambda, Monomial};

/// dim H^{s,t}(Λ) for s ≤ 2 from the classical answer: h_i in degree 2^i,
/// and products h_i h_j with i ≤ j, j ≠ i + 1.
fn known_dim(s: u32, t: u32) -> usize {
    match s {
        1 => t.is_power_of_two() as usize,
        2 => (0..6u32)
            .flat_map(|i| (i..6).map(move |j| (i, j)))
            .filter(|&(i, j)| j != i + 1 && (1 << i) + (1 << j) == t)
            .count(),
        _ => unreachable!(),
    }
}

#[test]
fn low_lines_agree_with_the_classical_answer() {
    let lam = Lambda::new();
    for s in 1..=2 {
        for t in s..=40 {
            assert_eq!(lam.cohomology(ComplexKind::Lambda, s, t).unwrap().dim(), known_dim(s, t), "({s},{t})");
        }
    }
}

#[test]
fn differentials_compose_to_zero() {
    let lam = Lambda::new();
    for kind in [ComplexKind::Lambda, ComplexKind::LambdaPrime, ComplexKind::ThetaImage(1)] {
        for t in 0..=24 {
            for s in 0..=5u32.min(t) {
                let a = lam.d_sparse(kind, s, t).unwrap().to_dense();
                let b = lam.d_sparse(kind, s + 1, t).unwrap().to_dense();
                assert!(b.mul(&a).is_zero(), "{kind} ({s},{t})");
            }
        }
    }
}

#[test]
fn classes_and_coboundaries() {
    let lam = Lambda::new();
    let h = lam.cohomology(ComplexKind::Lambda, 1, 4).unwrap();
    assert_eq!(h.labels(), ["3"]);
    let x = Element::monomial(&[3]);
    assert!(!lam.class_of(&x, &h).unwrap().is_zero());
    // h0h1 = 0, so λ1λ0 = d(λ2).
    assert!(lam.is_coboundary(ComplexKind::Lambda, &Element::monomial(&[1, 0])).unwrap());
    let pre = lam.coboundary_preimage(ComplexKind::Lambda, &Element::monomial(&[1, 0])).unwrap().unwrap();
    assert_eq!(lam.d(&pre).unwrap(), Element::monomial(&[1, 0]));
    assert!(lam.class_of(&Element::monomial(&[2]), &h).is_err());
}

#[test]
fn h0_powers_survive_in_the_quotient() {
    let lam = Lambda::new();
    for s in 1..=10u32 {
        let h = lam.cohomology(ComplexKind::LambdaPrime, s, s).unwrap();
        assert_eq!(h.dim(), 1);
        assert_eq!(h.reps()[0], Element::from(Monomial::new(&vec![0; s as usize])));
    }
}

#[test]
fn first_page_is_the_quotient_cohomology() {
    let lam = Lambda::new();
    for n in 1..=6 {
        for u in n..=40 {
            let e1 = lam.page(1, n, u).unwrap();
            assert_eq!(e1.dim, lam.cohomology(ComplexKind::LambdaPrime, n, u).unwrap().dim(), "E1({n},{u})");
        }
    }
}

#[test]
fn differential_sources_satisfy_the_divisibility_condition() {
    let lam = Lambda::new();
    for line in 1..=3 {
        let report = lam.bss_run(line, 40).unwrap();
        for d in report.differentials() {
            assert_eq!(d.u % (1 << d.r), 0);
            assert!(d.u >> d.r > d.n);
            assert!(d.r <= last_page(d.n, d.u));
            assert_eq!(lam.d(&d.witness).unwrap(), lam.theta_pow(&d.abutment, d.r));
        }
        assert!(lam.consistency_of(&report).ok());
    }
}

#[test]
fn last_page_bounds() {
    assert_eq!(last_page(3, 8), 1);
    assert_eq!(last_page(1, 8), 2);
    assert_eq!(last_page(2, 7), 0);
    assert_eq!(last_page(0, 16), 4);
}

#[test]
fn odd_ending_representatives() {
    let lam = Lambda::new();
    for stem in 1..=8u32 {
        for s in 1..=6u32 {
            let p = lam.cohomology(ComplexKind::LambdaPrime, s, s + stem).unwrap();
            for rep in p.reps() {
                let y = lam.odd_ending_reduce(rep).unwrap();
                assert!(y.iter().all(|m| m.subscripts().last().unwrap() % 2 == 1), "{y}");
                assert_eq!(lam.class_of(&y, &p).unwrap(), lam.class_of(rep, &p).unwrap());
            }
        }
    }
}

#[test]
fn sq0_doubles_degree_on_h_i() {
    let lam = Lambda::new();
    for i in 0..5 {
        let map = lam.sq0_map(1, 1 << i).unwrap();
        assert_eq!(map.matrix.rank(), 1, "Sq0 h{i}");
    }
    assert!(lam.sq0_kernel(4, 4).unwrap().kernel.len() == 1);
}
