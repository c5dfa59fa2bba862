//! Dense exact matrices and reduced row-echelon computations.
//!
//! Matrices are row-major over a single [`Field`].  Throughout the crate
//! module elements are *row* vectors and linear maps act *on the right*, so
//! the composite of `F: U -> V` and `G: V -> W` is the product `F * G`.
//!
//! Shape mismatches in the arithmetic operators are programming errors and
//! panic; the fallible entry points ([`solve_right`], [`Matrix::from_rows`])
//! return [`Error`] so malformed external input can be reported.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{add_mod, inv_mod, mul_mod, Field, Scalar};

/// A dense `rows x cols` matrix over an exact field.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    field: Field,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zero(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            field,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zero(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    /// Build from explicit rows, checking that the shape is rectangular and
    /// every entry lies in `field`.
    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            if row.len() != c {
                return Err(Error::Shape(format!(
                    "ragged rows: {} vs {}",
                    row.len(),
                    c
                )));
            }
            for x in row {
                if x.field() != field {
                    return Err(Error::FieldMismatch(field, x.field()));
                }
                data.push(x.clone());
            }
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            field,
            data,
        })
    }

    /// Build from integer entries — the workhorse for fixtures and tests.
    pub fn from_i64(field: Field, rows: &[&[i64]]) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Matrix::zero(field, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = field.from_i64(x);
            }
        }
        m
    }

    pub fn from_fn(field: Field, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Matrix {
        let mut m = Matrix::zero(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// A `1 x n` matrix holding one row vector.
    pub fn row_vector(field: Field, v: Vec<Scalar>) -> Matrix {
        let cols = v.len();
        Matrix {
            rows: 1,
            cols,
            field,
            data: v,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_to_vec(&self, i: usize) -> Vec<Scalar> {
        self.row(i).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[Scalar]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self[(i, j)].is_one()
                    } else {
                        self[(i, j)].is_zero()
                    }
                })
            })
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.field, self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self[(i, j)].add(&other[(i, j)])
        })
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in sub");
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| {
            self[(i, j)].sub(&other[(i, j)])
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self[(i, j)].neg())
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.field, self.rows, self.cols, |i, j| self[(i, j)].mul(c))
    }

    /// Matrix product `self * other`.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        assert_eq!(self.field, other.field, "field mismatch in mul");
        let mut out = Matrix::zero(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(i, j)] = out[(i, j)].add(&a.mul(b));
                }
            }
        }
        out
    }

    /// Apply to a row vector: `v * self`.
    pub fn apply_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows, "shape mismatch in apply_row");
        let mut out = vec![self.field.zero(); self.cols];
        for (k, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let b = &self[(k, j)];
                if !b.is_zero() {
                    out[j] = out[j].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "trace of a non-square matrix");
        let mut t = self.field.zero();
        for i in 0..self.rows {
            t = t.add(&self[(i, i)]);
        }
        t
    }

    /// Stack side by side: `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in hstack");
        Matrix::from_fn(self.field, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Stack on top of each other.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "shape mismatch in vstack");
        Matrix::from_fn(self.field, self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    /// Stack many matrices with equal column counts.
    pub fn vstack_all(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|m| m.rows).sum();
        let mut out = Matrix::zero(field, rows, cols);
        let mut at = 0;
        for m in parts {
            assert_eq!(m.cols, cols, "shape mismatch in vstack_all");
            for i in 0..m.rows {
                for j in 0..cols {
                    out[(at + i, j)] = m[(i, j)].clone();
                }
            }
            at += m.rows;
        }
        out
    }

    /// Kronecker product, blocks of `other` scaled by entries of `self`.
    pub fn kron(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.field, other.field, "field mismatch in kron");
        Matrix::from_fn(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
            |i, j| {
                let a = &self[(i / other.rows, j / other.cols)];
                let b = &other[(i % other.rows, j % other.cols)];
                a.mul(b)
            },
        )
    }

    /// Copy of the listed rows, in order.
    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, idx.len(), self.cols, |i, j| self[(idx[i], j)].clone())
    }

    /// Copy of the listed columns, in order.
    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(self.field, self.rows, idx.len(), |i, j| self[(i, idx[j])].clone())
    }

    /// Flatten row-major into one long row vector (used to linearise
    /// matrix equations).
    pub fn vectorize(&self) -> Vec<Scalar> {
        self.data.clone()
    }

    /// Inverse of the row-major flattening.
    pub fn from_vectorized(field: Field, rows: usize, cols: usize, v: &[Scalar]) -> Matrix {
        assert_eq!(v.len(), rows * cols, "shape mismatch in from_vectorized");
        Matrix {
            rows,
            cols,
            field,
            data: v.to_vec(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Reduced row echelon form
// ---------------------------------------------------------------------------

/// The result of full Gauss–Jordan reduction.
#[derive(Clone, Debug)]
pub struct Rref {
    /// The reduced row-echelon form (same shape as the input).
    pub mat: Matrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Columns that carry no pivot, in increasing order.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut piv = self.pivots.iter().copied().peekable();
        let mut free = Vec::new();
        for c in 0..self.mat.cols() {
            if piv.peek() == Some(&c) {
                piv.next();
            } else {
                free.push(c);
            }
        }
        free
    }
}

/// Reduced row-echelon form, exact over either field.
///
/// The result is the canonical RREF: pivots are 1, pivot columns are cleared
/// above and below, rows ordered by pivot column.  Over a prime field the
/// elimination runs on raw residues for speed.
pub fn rref(m: &Matrix) -> Rref {
    match m.field() {
        Field::Fp(p) => rref_fp(m, p),
        Field::Q => rref_generic(m),
    }
}

fn rref_fp(m: &Matrix, p: u64) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a: Vec<u64> = m
        .data
        .iter()
        .map(|s| match s {
            Scalar::Fp { v, .. } => *v,
            Scalar::Q(_) => unreachable!("field tag lied"),
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = inv_mod(a[r * cols + c], p);
        for j in c..cols {
            a[r * cols + j] = mul_mod(a[r * cols + j], inv, p);
        }
        for i in 0..rows {
            if i == r || a[i * cols + c] == 0 {
                continue;
            }
            let f = p - a[i * cols + c];
            for j in c..cols {
                let add = mul_mod(f, a[r * cols + j], p);
                a[i * cols + j] = add_mod(a[i * cols + j], add, p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    let data = a.into_iter().map(|v| Scalar::Fp { p, v }).collect();
    Rref {
        mat: Matrix {
            rows,
            cols,
            field: m.field(),
            data,
        },
        pivots,
    }
}

fn rref_generic(m: &Matrix) -> Rref {
    let (rows, cols) = (m.rows(), m.cols());
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !a[(i, c)].is_zero()) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                let x = a[(pr, j)].clone();
                let y = a[(r, j)].clone();
                a[(pr, j)] = y;
                a[(r, j)] = x;
            }
        }
        let inv = a[(r, c)].inv();
        for j in c..cols {
            a[(r, j)] = a[(r, j)].mul(&inv);
        }
        for i in 0..rows {
            if i == r || a[(i, c)].is_zero() {
                continue;
            }
            let f = a[(i, c)].clone();
            for j in c..cols {
                let sub = f.mul(&a[(r, j)]);
                a[(i, j)] = a[(i, j)].sub(&sub);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Rref { mat: a, pivots }
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

/// Basis of the right kernel `{x : m x = 0}`, returned as rows of a matrix
/// in canonical (RREF) form.
pub fn kernel_right(m: &Matrix) -> Matrix {
    let red = rref(m);
    let free = red.free_columns();
    if free.is_empty() {
        return Matrix::zero(m.field(), 0, m.cols());
    }
    let mut rows = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![m.field().zero(); m.cols()];
        v[f] = m.field().one();
        for (row, &pc) in red.pivots.iter().enumerate() {
            v[pc] = red.mat[(row, f)].neg();
        }
        rows.push(v);
    }
    let raw = Matrix::from_rows(m.field(), rows).expect("kernel rows are rectangular");
    rref(&raw).mat_trimmed()
}

/// Basis of the left kernel `{v : v m = 0}`, as rows in canonical form.
pub fn kernel_left(m: &Matrix) -> Matrix {
    kernel_right(&m.transpose())
}

impl Rref {
    /// The nonzero rows of the reduced form.
    pub fn mat_trimmed(&self) -> Matrix {
        let idx: Vec<usize> = (0..self.pivots.len()).collect();
        self.mat.select_rows(&idx)
    }
}

/// Outcome of solving `a x = b` for a column vector `x`.
#[derive(Clone, Debug)]
pub struct Solution {
    /// One solution, if any exists.
    pub particular: Option<Vec<Scalar>>,
    /// Canonical basis of the homogeneous solutions, as matrix rows.
    pub kernel: Matrix,
}

/// Solve `a x = b` exactly.  Shape and field mismatches are reported as
/// errors; an inconsistent system yields `particular: None`.
pub fn solve_right(a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!(
            "solve: {} equations but rhs has length {}",
            a.rows(),
            b.len()
        )));
    }
    for x in b {
        if x.field() != a.field() {
            return Err(Error::FieldMismatch(a.field(), x.field()));
        }
    }
    let bmat = Matrix::from_rows(a.field(), b.iter().map(|x| vec![x.clone()]).collect())?;
    let aug = a.hstack(&bmat);
    let red = rref(&aug);
    let n = a.cols();
    // A pivot in the appended column certifies inconsistency.
    let consistent = !red.pivots.contains(&n);
    let particular = if consistent {
        let mut x = vec![a.field().zero(); n];
        for (row, &pc) in red.pivots.iter().enumerate() {
            x[pc] = red.mat[(row, n)].clone();
        }
        Some(x)
    } else {
        None
    };
    Ok(Solution {
        particular,
        kernel: kernel_right(a),
    })
}

/// Solve `x a = b` for a row vector `x` (used to lift along surjections).
pub fn solve_left(a: &Matrix, b: &[Scalar]) -> Result<Solution> {
    solve_right(&a.transpose(), b)
}

/// Inverse of a square matrix, or `None` if singular.
pub fn inverse(m: &Matrix) -> Option<Matrix> {
    assert_eq!(m.rows(), m.cols(), "inverse of a non-square matrix");
    let n = m.rows();
    let aug = m.hstack(&Matrix::identity(m.field(), n));
    let red = rref(&aug);
    if red.rank() < n || red.pivots[n - 1] >= n {
        return None;
    }
    let idx: Vec<usize> = (n..2 * n).collect();
    Some(red.mat.select_cols(&idx))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Q
    }

    fn f2() -> Field {
        Field::Fp(2)
    }

    #[test]
    fn solve_identity_is_direct() {
        let a = Matrix::identity(q(), 3);
        let b = vec![q().from_i64(1), q().from_i64(2), q().from_i64(3)];
        let sol = solve_right(&a, &b).unwrap();
        assert_eq!(sol.particular.unwrap(), b);
        assert_eq!(sol.kernel.rows(), 0);
    }

    #[test]
    fn solve_zero_matrix_has_full_kernel() {
        let a = Matrix::zero(f2(), 2, 2);
        let b = vec![f2().zero(), f2().zero()];
        let sol = solve_right(&a, &b).unwrap();
        assert_eq!(rank(&a), 0);
        assert_eq!(sol.kernel.rows(), 2);
        assert!(sol.kernel.is_identity());
    }

    #[test]
    fn inconsistent_system_reports_none() {
        // Over F2: x + y = 1 and x + y = 0 cannot both hold.
        let a = Matrix::from_i64(f2(), &[&[1, 1], &[1, 1]]);
        let b = vec![f2().one(), f2().zero()];
        let sol = solve_right(&a, &b).unwrap();
        assert!(sol.particular.is_none());
        let expect = Matrix::from_i64(f2(), &[&[1, 1]]);
        assert_eq!(sol.kernel, expect);
    }

    #[test]
    fn kron_of_identities() {
        let k = Matrix::identity(q(), 2).kron(&Matrix::identity(q(), 3));
        assert!(k.is_identity());
        assert_eq!(k.rows(), 6);
    }

    #[test]
    fn kron_rank_one_blocks() {
        let a = Matrix::from_i64(f2(), &[&[1, 1]]);
        let b = Matrix::from_i64(f2(), &[&[1], &[1]]);
        let k = a.kron(&b);
        assert_eq!(k, Matrix::from_i64(f2(), &[&[1, 1], &[1, 1]]));
    }

    #[test]
    fn rref_is_canonical_and_idempotent() {
        let m = Matrix::from_i64(q(), &[&[2, 4, 6], &[1, 2, 4], &[3, 6, 10]]);
        let r1 = rref(&m);
        let r2 = rref(&r1.mat);
        assert_eq!(r1.mat, r2.mat);
        assert_eq!(r1.pivots, r2.pivots);
        for (row, &pc) in r1.pivots.iter().enumerate() {
            assert!(r1.mat[(row, pc)].is_one());
            for other in 0..r1.mat.rows() {
                if other != row {
                    assert!(r1.mat[(other, pc)].is_zero());
                }
            }
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(q(), &[&[1, 2], &[3, 5]]);
        let inv = inverse(&m).unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
        let singular = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert!(inverse(&singular).is_none());
    }

    #[test]
    fn exact_rationals_do_not_drift() {
        // A Hilbert-style matrix would defeat floating point; exact
        // arithmetic inverts it on the nose.
        let h = Matrix::from_fn(q(), 5, 5, |i, j| {
            q().one().div(&q().from_i64((i + j + 1) as i64))
        });
        let inv = inverse(&h).unwrap();
        assert!(h.mul(&inv).is_identity());
    }
}
