use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use tatecoh::exactla::{cokernel_invariants, kernel_basis, snf, solve};
use tatecoh::IntMatrix;

fn matrix(max_dim: usize, bound: i64) -> impl Strategy<Value = IntMatrix> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(move |(r, c)| {
        proptest::collection::vec(-bound..=bound, r * c).prop_map(move |v| {
            let rows: Vec<Vec<i64>> = v.chunks(c).map(<[i64]>::to_vec).collect();
            IntMatrix::from_i64_rows(&rows)
        })
    })
}

fn is_unit(d: &BigInt) -> bool {
    d.abs().is_one()
}

/// Determinant by cofactor expansion; independent of the elimination code.
fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut total = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn smith_form_certificate(m in matrix(8, 20)) {
        let r = snf(&m);
        let prod = r.u.mul(&m).unwrap().mul(&r.v).unwrap();
        prop_assert_eq!(&prod, &r.s);
        prop_assert!(is_unit(&r.u.determinant().unwrap()));
        prop_assert!(is_unit(&r.v.determinant().unwrap()));
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    prop_assert!(r.s[(i, j)].is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            prop_assert!(!w[0].is_negative());
            if w[0].is_zero() {
                prop_assert!(w[1].is_zero());
            } else {
                prop_assert!(w[1].is_multiple_of(&w[0]));
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn square_cokernel_order_is_determinant(m in matrix(5, 9)) {
        prop_assume!(m.is_square());
        let det = cofactor_det(&m.to_rows());
        let inv = cokernel_invariants(&m, m.cols()).unwrap();
        if det.is_zero() {
            prop_assert!(!inv.is_finite());
        } else {
            prop_assert_eq!(inv.order().unwrap(), det.abs());
        }
    }

    #[test]
    fn kernel_basis_is_annihilated(m in matrix(6, 5)) {
        let k = kernel_basis(&m);
        prop_assert!(m.mul(&k).unwrap().is_zero());
        let snf_rank = snf(&m).diagonal().iter().filter(|d| !d.is_zero()).count();
        prop_assert_eq!(k.cols(), m.cols() - snf_rank);
    }

    #[test]
    fn solve_recovers_consistent_systems(m in matrix(6, 7), seed in proptest::collection::vec(-5i64..=5, 6)) {
        let x: Vec<BigInt> = (0..m.cols()).map(|i| BigInt::from(seed[i])).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve(&m, &b, None).unwrap();
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }
}
