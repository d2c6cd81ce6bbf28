use lforge::linalg::{kernel_basis, rref, solve, BitMatrix, SparseMatrix, Subspace};
use lforge::BitVec;
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec(any::<bool>(), c), r)
            .prop_map(move |rows| BitMatrix::from_rows(c, rows.iter().map(|b| BitVec::from_bools(b)).collect()))
    })
}

fn sparse_of(m: &BitMatrix) -> SparseMatrix {
    let mut s = SparseMatrix::new(m.nrows());
    for j in 0..m.ncols() {
        s.push_column(m.column(j).iter_ones().map(|i| i as u32).collect());
    }
    s
}

fn vectors(n: usize, count: usize) -> impl Strategy<Value = Vec<BitVec>> {
    prop::collection::vec(prop::collection::vec(any::<bool>(), n), 0..=count)
        .prop_map(|vs| vs.iter().map(|b| BitVec::from_bools(b)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rank_nullity(m in matrix(12, 70)) {
        let k = kernel_basis(&m);
        prop_assert_eq!(m.rank() + k.dim(), m.ncols());
        for v in k.rows() {
            prop_assert!(m.mul_vec(v).is_zero());
        }
    }

    #[test]
    fn sparse_and_dense_agree(m in matrix(20, 20)) {
        let s = sparse_of(&m);
        prop_assert_eq!(s.to_dense(), m.clone());
        let red = s.reduce();
        prop_assert_eq!(red.rank, m.rank());
        prop_assert_eq!(red.kernel.len(), m.ncols() - m.rank());
        for v in &red.kernel {
            prop_assert!(s.apply(v).is_zero());
        }
        prop_assert_eq!(s.kernel_echelon().dim(), red.kernel.len());
    }

    #[test]
    fn rref_is_canonical(m in matrix(10, 40), seed in any::<u64>()) {
        // Shuffling and combining rows leaves the reduced form unchanged.
        let mut rows: Vec<BitVec> = m.rows().to_vec();
        let n = rows.len();
        rows.rotate_left(seed as usize % n);
        if n > 1 {
            let src = rows[1].clone();
            rows[0].xor_assign(&src);
        }
        let shuffled = BitMatrix::from_rows(m.ncols(), rows);
        let (a, ra) = rref(&m);
        let (b, rb) = rref(&shuffled);
        prop_assert_eq!(ra, rb);
        prop_assert_eq!(&a.rows()[..ra], &b.rows()[..rb]);
    }

    #[test]
    fn solve_round_trip(m in matrix(12, 30), x in prop::collection::vec(any::<bool>(), 30)) {
        let x = BitVec::from_bools(&x[..m.ncols()]);
        let b = m.mul_vec(&x);
        let y = solve(&m, &b).expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y), b);
    }

    #[test]
    fn sum_and_intersection_dimensions(a in vectors(24, 10), b in vectors(24, 10)) {
        let u = Subspace::from_generators(24, a);
        let w = Subspace::from_generators(24, b);
        let sum = u.sum(&w).unwrap();
        let cap = u.intersection(&w).unwrap();
        prop_assert_eq!(sum.dim() + cap.dim(), u.dim() + w.dim());
        prop_assert!(cap.is_subspace_of(&u) && cap.is_subspace_of(&w));
        prop_assert!(u.is_subspace_of(&sum) && w.is_subspace_of(&sum));
    }
}

#[test]
fn mismatched_ambient_is_an_error() {
    let u = Subspace::full(3);
    let w = Subspace::zero(4);
    assert!(u.sum(&w).is_err());
}
