//! The small worked examples used throughout the test suites.
//!
//! * [`t2`] — upper-triangular 2x2 matrices over F2, basis `e11, e12, e22`.
//!   Its module category has exactly two simples: the projective simple
//!   `e22 * A` and the non-projective simple quotient of `e11 * A`.
//! * [`kk`] — the split product `F2 x F2`.
//! * [`dual`] — the dual numbers `F2[eps]/(eps^2)`, self-injective.
//!
//! Graded fixtures (polynomial and two-variable graded algebras, truncated
//! at a degree bound) live in [`crate::graded`]'s test helpers; the JSON
//! files shipped under `fixtures/` mirror all of these.

use crate::algebra::Algebra;
use crate::scalar::Field;

/// Build an algebra from integer structure constants, panicking on invalid
/// data (fixtures are trusted).
pub fn algebra_from_i64(
    field: Field,
    labels: &[&str],
    table: &[&[&[i64]]],
    unit: &[i64],
) -> Algebra {
    let n = labels.len();
    let mut t = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            assert_eq!(table[i][j].len(), n, "fixture table shape");
            t[i][j] = table[i][j].iter().map(|&c| field.from_i64(c)).collect();
        }
    }
    Algebra::new(
        field,
        labels.iter().map(|s| s.to_string()).collect(),
        t,
        unit.iter().map(|&c| field.from_i64(c)).collect(),
    )
    .expect("fixture algebra is valid")
}

/// Upper-triangular 2x2 matrices over `field`, basis `e11, e12, e22`.
pub fn t2_over(field: Field) -> Algebra {
    algebra_from_i64(
        field,
        &["e11", "e12", "e22"],
        &[
            // e11 * (e11, e12, e22)
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 0]],
            // e12 * (e11, e12, e22)
            &[&[0, 0, 0], &[0, 0, 0], &[0, 1, 0]],
            // e22 * (e11, e12, e22)
            &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 1]],
        ],
        &[1, 0, 1],
    )
}

/// Upper-triangular 2x2 matrices over F2.
pub fn t2() -> Algebra {
    t2_over(Field::Fp(2))
}

/// The split product F2 x F2.
pub fn kk() -> Algebra {
    algebra_from_i64(
        Field::Fp(2),
        &["f1", "f2"],
        &[
            &[&[1, 0], &[0, 0]],
            &[&[0, 0], &[0, 1]],
        ],
        &[1, 1],
    )
}

/// The dual numbers F2[eps]/(eps^2): local, self-injective, not semisimple.
pub fn dual() -> Algebra {
    algebra_from_i64(
        Field::Fp(2),
        &["one", "eps"],
        &[
            &[&[1, 0], &[0, 1]],
            &[&[0, 1], &[0, 0]],
        ],
        &[1, 0],
    )
}
