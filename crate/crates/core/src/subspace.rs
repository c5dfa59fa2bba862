//! Subspaces of a fixed coordinate space, in canonical form.
//!
//! A [`Subspace`] stores the reduced row-echelon basis of its span, so
//! structural equality *is* mathematical equality and every lattice
//! operation (sum, intersection, containment) lands back in canonical form.
//! The RREF basis also gives canonical coset representatives and canonical
//! coordinates on the quotient: the pivot columns parametrise the subspace,
//! the free columns parametrise the quotient.

use crate::error::{Error, Result};
use crate::matrix::{kernel_left, rref, Matrix};
use crate::scalar::{Field, Scalar};

/// A linear subspace of `k^ambient`, held as an RREF basis.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    field: Field,
    /// RREF basis, one row per basis vector; no zero rows.
    basis: Matrix,
    /// Pivot column of each basis row, strictly increasing.
    pivots: Vec<usize>,
}

impl Subspace {
    /// The zero subspace.
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            field,
            basis: Matrix::zero(field, 0, ambient),
            pivots: Vec::new(),
        }
    }

    /// The whole coordinate space.
    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace::from_matrix(&Matrix::identity(field, ambient))
    }

    /// Span of the rows of `m`.
    pub fn from_matrix(m: &Matrix) -> Subspace {
        let red = rref(m);
        Subspace {
            ambient: m.cols(),
            field: m.field(),
            basis: red.mat_trimmed(),
            pivots: red.pivots.clone(),
        }
    }

    /// Span of explicit vectors; errors if fields or lengths disagree.
    pub fn from_vectors(field: Field, ambient: usize, vs: &[Vec<Scalar>]) -> Result<Subspace> {
        for v in vs {
            if v.len() != ambient {
                return Err(Error::Shape(format!(
                    "vector of length {} in ambient dimension {}",
                    v.len(),
                    ambient
                )));
            }
        }
        let m = Matrix::from_rows(field, vs.to_vec())?;
        if vs.is_empty() {
            return Ok(Subspace::zero(field, ambient));
        }
        Ok(Subspace::from_matrix(&m))
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    /// The canonical basis, one row per vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim()).map(|i| self.basis.row_to_vec(i)).collect()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Ambient coordinates without a pivot, in increasing order; these index
    /// the canonical coordinates on the quotient.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut piv = self.pivots.iter().copied().peekable();
        let mut free = Vec::new();
        for c in 0..self.ambient {
            if piv.peek() == Some(&c) {
                piv.next();
            } else {
                free.push(c);
            }
        }
        free
    }

    /// Canonical representative of `v`'s coset: subtract the unique basis
    /// combination matching `v` on the pivot columns.  The result is zero
    /// exactly when `v` lies in the subspace.
    pub fn reduce_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient, "ambient mismatch in reduce_vec");
        let mut w = v.to_vec();
        for (row, &pc) in self.pivots.iter().enumerate() {
            if w[pc].is_zero() {
                continue;
            }
            let f = w[pc].clone();
            for j in 0..self.ambient {
                let s = f.mul(&self.basis[(row, j)]);
                w[j] = w[j].sub(&s);
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        self.reduce_vec(v).iter().all(Scalar::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in contains");
        (0..other.dim()).all(|i| self.contains_vec(other.basis.row(i)))
    }

    /// Coordinates of `v` in the canonical basis.  Because the basis is in
    /// RREF these are just `v`'s entries at the pivot columns.  Panics if
    /// `v` is not in the subspace.
    pub fn coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        debug_assert!(self.contains_vec(v), "coords of a vector outside the subspace");
        self.pivots.iter().map(|&pc| v[pc].clone()).collect()
    }

    /// Rebuild an ambient vector from coordinates in the canonical basis.
    pub fn from_coords(&self, c: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(c.len(), self.dim(), "coordinate count mismatch");
        let mut v = vec![self.field.zero(); self.ambient];
        for (row, coeff) in c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            for j in 0..self.ambient {
                let s = coeff.mul(&self.basis[(row, j)]);
                v[j] = v[j].add(&s);
            }
        }
        v
    }

    /// Canonical coordinates of `v + self` on the quotient space: reduce,
    /// then read the free columns.
    pub fn quotient_coords(&self, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.reduce_vec(v);
        self.free_columns().iter().map(|&c| w[c].clone()).collect()
    }

    /// The canonical section of the quotient: place the coordinates at the
    /// free columns.  Composing with [`Self::quotient_coords`] is the
    /// identity on quotient coordinates.
    pub fn quotient_section(&self, c: &[Scalar]) -> Vec<Scalar> {
        let free = self.free_columns();
        assert_eq!(c.len(), free.len(), "quotient coordinate count mismatch");
        let mut v = vec![self.field.zero(); self.ambient];
        for (k, &col) in free.iter().enumerate() {
            v[col] = c[k].clone();
        }
        v
    }

    /// Matrix of the quotient projection `k^ambient -> k^{ambient - dim}`
    /// acting on row vectors.
    pub fn quotient_matrix(&self) -> Matrix {
        let free = self.free_columns();
        Matrix::from_fn(self.field, self.ambient, free.len(), |i, j| {
            let mut e = vec![self.field.zero(); self.ambient];
            e[i] = self.field.one();
            let w = self.reduce_vec(&e);
            w[free[j]].clone()
        })
    }

    /// Matrix of the canonical quotient section acting on row vectors.
    pub fn section_matrix(&self) -> Matrix {
        let free = self.free_columns();
        Matrix::from_fn(self.field, free.len(), self.ambient, |i, j| {
            if free[i] == j {
                self.field.one()
            } else {
                self.field.zero()
            }
        })
    }

    /// Sum of subspaces.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in sum");
        assert_eq!(self.field, other.field, "field mismatch in sum");
        Subspace::from_matrix(&self.basis.vstack(&other.basis))
    }

    /// Intersection of subspaces, via the left kernel of the stacked bases:
    /// a relation `alpha * U + beta * V = 0` exhibits `alpha * U` as an
    /// element of the intersection, and every element arises this way.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "ambient mismatch in intersect");
        assert_eq!(self.field, other.field, "field mismatch in intersect");
        if self.is_zero() || other.is_zero() {
            return Subspace::zero(self.field, self.ambient);
        }
        let stacked = self.basis.vstack(&other.basis);
        let rels = kernel_left(&stacked);
        let alpha: Vec<usize> = (0..self.dim()).collect();
        let img = rels.select_cols(&alpha).mul(&self.basis);
        Subspace::from_matrix(&img)
    }

    /// Image of this subspace under a linear map on row vectors.
    pub fn apply(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.rows(), self.ambient, "shape mismatch in apply");
        Subspace::from_matrix(&self.basis.mul(m))
    }

    /// Preimage under a linear map on row vectors: `{v : v m in self}`.
    pub fn preimage(&self, m: &Matrix) -> Subspace {
        assert_eq!(m.cols(), self.ambient, "shape mismatch in preimage");
        // v * m lies in the span iff it reduces to zero, i.e. iff v kills
        // the composite of m with the quotient projection.
        let q = self.quotient_matrix();
        Subspace::from_matrix(&kernel_left(&m.mul(&q)))
    }
}

/// Every subspace of `k^ambient` over a small prime field, enumerated via
/// canonical RREF matrices (choose pivot columns, then fill the free
/// positions in every possible way).  Errors if the count would exceed
/// `budget` or the field is infinite.
pub fn enumerate_subspaces(field: Field, ambient: usize, budget: usize) -> Result<Vec<Subspace>> {
    let Field::Fp(p) = field else {
        return Err(Error::BadInput(
            "cannot enumerate subspaces over an infinite field".into(),
        ));
    };
    // Free positions of a pivot-column set: entries right of a pivot, in a
    // non-pivot column.
    let free_count = |pivots: &[usize]| -> usize {
        pivots
            .iter()
            .map(|&pc| ((pc + 1)..ambient).filter(|c| !pivots.contains(c)).count())
            .sum()
    };
    let mut total: usize = 0;
    let mut subsets: Vec<Vec<usize>> = Vec::new();
    for mask in 0u64..(1u64 << ambient) {
        let pivots: Vec<usize> = (0..ambient).filter(|&c| mask >> c & 1 == 1).collect();
        let f = free_count(&pivots);
        let count = (p as usize)
            .checked_pow(f as u32)
            .ok_or_else(|| Error::BudgetExceeded("subspace enumeration overflow".into()))?;
        total = total
            .checked_add(count)
            .ok_or_else(|| Error::BudgetExceeded("subspace enumeration overflow".into()))?;
        subsets.push(pivots);
    }
    if total > budget {
        return Err(Error::BudgetExceeded(format!(
            "{total} subspaces exceed budget {budget}"
        )));
    }
    let mut out = Vec::with_capacity(total);
    for pivots in subsets {
        let free_pos: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                let pivots = pivots.clone();
                ((pc + 1)..ambient)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (r, c))
            })
            .collect();
        let mut values = vec![0u64; free_pos.len()];
        loop {
            let mut m = Matrix::zero(field, pivots.len(), ambient);
            for (r, &pc) in pivots.iter().enumerate() {
                m[(r, pc)] = field.one();
            }
            for (k, &(r, c)) in free_pos.iter().enumerate() {
                m[(r, c)] = field.from_i64(values[k] as i64);
            }
            out.push(Subspace::from_matrix(&m));
            // Odometer increment over F_p values.
            let mut k = 0;
            loop {
                if k == values.len() {
                    break;
                }
                values[k] += 1;
                if values[k] < p {
                    break;
                }
                values[k] = 0;
                k += 1;
            }
            if k == values.len() {
                break;
            }
        }
    }
    Ok(out)
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
    fn intersect_plane_with_line() {
        let u = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[1, 0], &[0, 1]]));
        let v = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[1, 1]]));
        let w = u.intersect(&v);
        assert_eq!(w, v);
        assert_eq!(w.dim(), 1);
    }

    #[test]
    fn sum_and_intersection_dimensions() {
        let u = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
        let v = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[0, 1, 0], &[0, 0, 1]]));
        let s = u.sum(&v);
        let i = u.intersect(&v);
        assert_eq!(s.dim(), 3);
        assert_eq!(i.dim(), 1);
        assert!(i.contains_vec(&[f2().zero(), f2().one(), f2().zero()]));
        assert_eq!(s.dim() + i.dim(), u.dim() + v.dim());
    }

    #[test]
    fn canonical_equality_ignores_presentation() {
        let a = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[1, 1], &[1, -1]]));
        let b = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]));
        assert_eq!(a, b);
        assert!(a.is_full());
    }

    #[test]
    fn quotient_coordinates_are_a_section_inverse() {
        // Span{(1,2,0)} in Q^3: free columns are 1 and 2.
        let u = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[1, 2, 0]]));
        assert_eq!(u.free_columns(), vec![1, 2]);
        let v = vec![q().from_i64(3), q().from_i64(7), q().from_i64(5)];
        let c = u.quotient_coords(&v);
        // v - 3*(1,2,0) = (0,1,5).
        assert_eq!(c, vec![q().from_i64(1), q().from_i64(5)]);
        let s = u.quotient_section(&c);
        assert_eq!(u.quotient_coords(&s), c);
        // v and its section differ by an element of u.
        let mut diff = Vec::new();
        for (x, y) in v.iter().zip(&s) {
            diff.push(x.sub(y));
        }
        assert!(u.contains_vec(&diff));
    }

    #[test]
    fn preimage_of_zero_is_kernel() {
        let m = Matrix::from_i64(q(), &[&[1, 1], &[1, 1]]);
        let z = Subspace::zero(q(), 2);
        let pre = z.preimage(&m);
        assert_eq!(pre.dim(), 1);
        assert!(pre.contains_vec(&[q().one(), q().from_i64(-1)]));
    }

    #[test]
    fn coords_round_trip() {
        let u = Subspace::from_matrix(&Matrix::from_i64(q(), &[&[1, 0, 2], &[0, 1, 3]]));
        let v = u.from_coords(&[q().from_i64(2), q().from_i64(-1)]);
        assert!(u.contains_vec(&v));
        assert_eq!(u.coords(&v), vec![q().from_i64(2), q().from_i64(-1)]);
    }
}
