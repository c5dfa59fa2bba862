//! Property tests for the exact linear algebra layer: canonicality of the
//! reduced echelon form, the subspace dimension law, agreement of ranks
//! across fields, and solver consistency.

use modspace::matrix::{kernel_right, rank, rref, solve_right, Matrix};
use modspace::scalar::Field;
use modspace::subspace::Subspace;
use proptest::prelude::*;

/// Small integer matrices, handed to both fields.
fn entries(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-3i64..=3, cols), rows)
}

fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 1usize..=5)
}

fn to_matrix(field: Field, rows: &[Vec<i64>]) -> Matrix {
    let refs: Vec<&[i64]> = rows.iter().map(Vec::as_slice).collect();
    Matrix::from_i64(field, &refs)
}

const FIELDS: [Field; 3] = [Field::Q, Field::Fp(2), Field::Fp(7)];

proptest! {
    #[test]
    fn rref_is_idempotent((r, c) in dims(), data in entries(5, 5)) {
        for field in FIELDS {
            let m = to_matrix(field, &data).select_rows(&(0..r).collect::<Vec<_>>())
                .select_cols(&(0..c).collect::<Vec<_>>());
            let once = rref(&m);
            let twice = rref(&once.mat);
            prop_assert_eq!(&twice.mat, &once.mat);
            prop_assert_eq!(&twice.pivots, &once.pivots);
        }
    }

    #[test]
    fn subspace_canonicalization_is_stable((r, c) in dims(), data in entries(5, 5)) {
        for field in FIELDS {
            let m = to_matrix(field, &data).select_rows(&(0..r).collect::<Vec<_>>())
                .select_cols(&(0..c).collect::<Vec<_>>());
            let u = Subspace::from_matrix(&m);
            let again = Subspace::from_matrix(u.basis());
            prop_assert_eq!(&again, &u);
        }
    }

    #[test]
    fn modular_rank_matches_rational_rank((r, c) in dims(), data in entries(5, 5)) {
        let idx_r: Vec<usize> = (0..r).collect();
        let idx_c: Vec<usize> = (0..c).collect();
        let over_q = to_matrix(Field::Q, &data).select_rows(&idx_r).select_cols(&idx_c);
        let rq = rank(&over_q);
        // Reduction can only lose rank, and only at primes dividing some
        // nonzero maximal minor; with entries this small, most of the
        // primes below must agree exactly.
        let primes = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47];
        let mut hits = 0usize;
        for p in primes {
            let over_p = to_matrix(Field::Fp(p), &data).select_rows(&idx_r).select_cols(&idx_c);
            let rp = rank(&over_p);
            prop_assert!(rp <= rq, "rank grew after reduction mod {}", p);
            if rp == rq {
                hits += 1;
            }
        }
        prop_assert!(hits > 0, "no prime certified the rational rank");
    }

    #[test]
    fn sum_and_intersection_dimensions_balance(
        a in entries(3, 4),
        b in entries(3, 4),
    ) {
        for field in FIELDS {
            let u = Subspace::from_matrix(&to_matrix(field, &a));
            let v = Subspace::from_matrix(&to_matrix(field, &b));
            let s = u.sum(&v);
            let i = u.intersect(&v);
            prop_assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
            prop_assert!(s.contains(&u) && s.contains(&v));
            prop_assert!(u.contains(&i) && v.contains(&i));
        }
    }

    #[test]
    fn solver_answers_are_certificates(
        (r, c) in dims(),
        data in entries(5, 5),
        x0 in prop::collection::vec(-3i64..=3, 5),
    ) {
        for field in FIELDS {
            let a = to_matrix(field, &data).select_rows(&(0..r).collect::<Vec<_>>())
                .select_cols(&(0..c).collect::<Vec<_>>());
            // A planted solution must be recovered (as some solution).
            let planted: Vec<_> = x0[..c].iter().map(|&v| field.from_i64(v)).collect();
            let b: Vec<_> = (0..r)
                .map(|i| {
                    let mut acc = field.zero();
                    for j in 0..c {
                        acc = acc.add(&a[(i, j)].mul(&planted[j]));
                    }
                    acc
                })
                .collect();
            let sol = solve_right(&a, &b).unwrap();
            let x = sol.particular.expect("planted system is consistent");
            for i in 0..r {
                let mut acc = field.zero();
                for j in 0..c {
                    acc = acc.add(&a[(i, j)].mul(&x[j]));
                }
                prop_assert_eq!(acc, b[i].clone());
            }
            // Kernel rows really solve the homogeneous system.
            let k = kernel_right(&a);
            for row in 0..k.rows() {
                for i in 0..r {
                    let mut acc = field.zero();
                    for j in 0..c {
                        acc = acc.add(&a[(i, j)].mul(&k[(row, j)]));
                    }
                    prop_assert!(acc.is_zero());
                }
            }
            prop_assert_eq!(rank(&a) + k.rows(), c);
        }
    }
}

#[test]
fn kron_matches_its_defining_blocks() {
    let f2 = Field::Fp(2);
    let i2 = Matrix::identity(f2, 2);
    let i3 = Matrix::identity(f2, 3);
    assert!(i2.kron(&i3).is_identity());
    let z = Matrix::zero(f2, 2, 2);
    assert!(z.kron(&i3).is_zero());
    let a = Matrix::from_i64(f2, &[&[1, 1]]);
    let b = Matrix::from_i64(f2, &[&[1], &[1]]);
    assert_eq!(a.kron(&b), Matrix::from_i64(f2, &[&[1, 1], &[1, 1]]));
}
