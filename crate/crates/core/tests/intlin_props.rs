mod common;

use affmon::intlin::{
    cokernel_invariants, hermite_normal_form, kernel_basis, rational_rank, smith_normal_form,
    solve_linear,
};
use affmon::IntegerMatrix;
use common::big;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn matrix(max_rows: usize, max_cols: usize, entry: i64) -> impl Strategy<Value = IntegerMatrix> {
    (1..=max_rows, 1..=max_cols).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-entry..=entry, r * c).prop_map(move |e| {
            IntegerMatrix::new(r, c, e.into_iter().map(BigInt::from).collect()).unwrap()
        })
    })
}

/// All integer vectors of length `d` with entries in `[-r, r]`.
fn box_points(d: usize, r: i64) -> Vec<Vec<BigInt>> {
    let mut out = vec![Vec::new()];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-r..=r).map(move |x| {
                    let mut q = p.clone();
                    q.push(BigInt::from(x));
                    q
                })
            })
            .collect();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn hermite_transform(a in matrix(5, 5, 9)) {
        let (h, u) = hermite_normal_form(&a);
        prop_assert_eq!(&u * &a, h);
        prop_assert!(u.determinant().abs().is_one());
    }

    #[test]
    fn smith_reconstruction(a in matrix(5, 5, 9)) {
        let snf = smith_normal_form(&a);
        prop_assert_eq!(&(&snf.u * &snf.s) * &snf.v, a);
        let d = snf.diagonal();
        for w in d.windows(2) {
            prop_assert!(w[1].is_zero() || (!w[0].is_zero() && (&w[1] % &w[0]).is_zero()));
        }
    }

    #[test]
    fn kernel_is_a_lattice_basis(a in matrix(3, 3, 3)) {
        let k = kernel_basis(&a);
        for v in &k {
            prop_assert!(a.mul_vec(v).iter().all(Zero::is_zero));
        }
        prop_assert_eq!(k.len(), a.cols() - rational_rank(&a));
        if !k.is_empty() {
            let km = IntegerMatrix::from_columns(a.cols(), &k).unwrap();
            prop_assert_eq!(rational_rank(&km), k.len());
            for x in box_points(a.cols(), 3) {
                if a.mul_vec(&x).iter().all(Zero::is_zero) {
                    prop_assert!(solve_linear(&km, &x).unwrap().is_some(), "{:?} not in the span", x);
                }
            }
        }
    }

    #[test]
    fn solve_against_box(a in matrix(3, 3, 4), b in proptest::collection::vec(-6i64..=6, 3)) {
        let b = big(&b[..a.rows()]);
        match solve_linear(&a, &b).unwrap() {
            Some(x) => prop_assert_eq!(a.mul_vec(&x), b),
            None => {
                for x in box_points(a.cols(), 5) {
                    prop_assert_ne!(a.mul_vec(&x), b.clone());
                }
            }
        }
    }

    #[test]
    fn rank_plus_cokernel_rank(a in matrix(6, 6, 9)) {
        prop_assert_eq!(rational_rank(&a) + cokernel_invariants(&a).free_rank, a.rows());
    }
}
