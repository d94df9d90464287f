use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use twisted_burnside::linalg::{cokernel_order, lattice_member, smith_normal_form, IntMatrix};
use twisted_burnside::ExtendedCount;

/// Laplace expansion along the first row.
fn cofactor_det(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    if n == 1 {
        return BigInt::from(m[0][0]);
    }
    let mut total = BigInt::zero();
    for col in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let term = BigInt::from(m[0][col]) * cofactor_det(&minor);
        if col % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn to_i64_rows(m: &IntMatrix) -> Vec<Vec<i64>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| i64::try_from(x).unwrap()).collect())
        .collect()
}

fn matrix(max_dim: usize) -> impl Strategy<Value = (usize, usize, Vec<i64>)> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(r, c)| {
        (Just(r), Just(c), prop::collection::vec(-9i64..=9, r * c))
    })
}

fn square(max_dim: usize) -> impl Strategy<Value = (usize, Vec<i64>)> {
    (1..=max_dim).prop_flat_map(|n| (Just(n), prop::collection::vec(-9i64..=9, n * n)))
}

fn build(rows: usize, cols: usize, entries: &[i64]) -> IntMatrix {
    IntMatrix::from_entries(rows, cols, entries.iter().map(|&x| BigInt::from(x)).collect())
        .unwrap()
}

/// Whether `b` is an integer combination of the columns of `m` with
/// coefficients in [-20, 20].
fn brute_member(m: &[Vec<i64>], cols: usize, b: &[i64]) -> bool {
    fn rec(m: &[Vec<i64>], col: usize, cols: usize, acc: &mut Vec<i64>, b: &[i64]) -> bool {
        if col == cols {
            return acc.as_slice() == b;
        }
        for c in -20i64..=20 {
            for (i, row) in m.iter().enumerate() {
                acc[i] += c * row[col];
            }
            let hit = rec(m, col + 1, cols, acc, b);
            for (i, row) in m.iter().enumerate() {
                acc[i] -= c * row[col];
            }
            if hit {
                return true;
            }
        }
        false
    }
    let mut acc = vec![0i64; m.len()];
    rec(m, 0, cols, &mut acc, b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn smith_decomposition_reconstructs((rows, cols, entries) in matrix(6)) {
        let m = build(rows, cols, &entries);
        let snf = smith_normal_form(&m);
        prop_assert_eq!(&(&snf.u * &m) * &snf.v, snf.s.clone());
        prop_assert_eq!(cofactor_det(&to_i64_rows(&snf.u)).abs(), BigInt::from(1));
        prop_assert_eq!(cofactor_det(&to_i64_rows(&snf.v)).abs(), BigInt::from(1));
        for w in snf.invariant_factors.windows(2) {
            prop_assert!(w[1].is_multiple_of(&w[0]));
        }
        for i in 0..rows {
            for j in 0..cols {
                if i != j || i >= snf.rank() {
                    prop_assert!(snf.s[(i, j)].is_zero());
                } else {
                    prop_assert!(snf.s[(i, j)].is_positive());
                }
            }
        }
    }

    #[test]
    fn cokernel_of_nonsingular_is_abs_det((n, entries) in square(4)) {
        let m = build(n, n, &entries);
        let rows: Vec<Vec<i64>> = entries.chunks(n).map(|c| c.to_vec()).collect();
        let det = cofactor_det(&rows);
        prop_assert_eq!(m.determinant().unwrap(), det.clone());
        let coker = cokernel_order(&m, &[]).unwrap();
        if det.is_zero() {
            prop_assert_eq!(coker, ExtendedCount::Infinite);
        } else {
            prop_assert_eq!(coker, ExtendedCount::Finite(det.abs().to_biguint().unwrap()));
        }
    }

    #[test]
    fn membership_matches_bounded_search(
        (rows, cols, entries) in (1usize..=3, 1usize..=2).prop_flat_map(|(r, c)| {
            (Just(r), Just(c), prop::collection::vec(-2i64..=2, r * c))
        }),
        b in prop::collection::vec(-3i64..=3, 3),
    ) {
        let m = build(rows, cols, &entries);
        let b = &b[..rows];
        let nested: Vec<Vec<i64>> = entries.chunks(cols).map(|c| c.to_vec()).collect();
        let target: Vec<BigInt> = b.iter().map(|&x| BigInt::from(x)).collect();
        let fast = lattice_member(&m, &target).unwrap();
        // Small entries keep every member's coefficients inside the box,
        // so the bounded search is exact here.
        prop_assert_eq!(fast, brute_member(&nested, cols, b));
    }
}

#[test]
fn membership_of_zero_vector() {
    let m = build(2, 2, &[3, 1, -4, 7]);
    assert!(lattice_member(&m, &[BigInt::zero(), BigInt::zero()]).unwrap());
}
