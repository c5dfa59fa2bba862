//! Finite-dimensional associative unital algebras over an exact field.
//!
//! An [`Algebra`] is a basis together with structure constants: `table[i][j]`
//! holds the coordinates of `b_i * b_j`.  Everything downstream — ideals,
//! radicals, quotients, corners, path algebras — works through this one
//! representation.
//!
//! Conventions, fixed crate-wide:
//! * elements are coordinate **row** vectors;
//! * [`Algebra::lmm`] and [`Algebra::rmm`] return matrices acting on row
//!   vectors, so `v * lmm(x)` is `x * v` and `v * rmm(x)` is `v * x`;
//! * in path algebras `p * q` means "`p` then `q`" (composable when the end
//!   vertex of `p` is the start vertex of `q`), which matches the
//!   matrix-unit model `e_{ij} e_{jk} = e_{ik}`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::matrix::{kernel_left, Matrix};
use crate::poly::char_coeff;
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

/// A finite-dimensional associative unital algebra, given by structure
/// constants on a distinguished basis.
#[derive(Clone, Debug)]
pub struct Algebra {
    field: Field,
    labels: Vec<String>,
    unit: Vec<Scalar>,
    /// `table[i][j]` = coordinates of `b_i * b_j`.
    table: Vec<Vec<Vec<Scalar>>>,
    /// Indices of a (greedily chosen) generating subset of the basis.
    gens: Vec<usize>,
}

impl Algebra {
    /// Build and fully validate: rectangular shapes, matching fields,
    /// associativity on all basis triples, and the two-sided unit law.
    pub fn new(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Algebra> {
        let a = Self::assemble(field, labels, table, unit)?;
        a.validate_associativity()?;
        a.validate_unit()?;
        Ok(a)
    }

    /// Build from data whose associativity holds by construction (quotients,
    /// corners, opposites, truncated path algebras).  A deterministic sample
    /// of triples is still checked so coding mistakes surface early.
    pub(crate) fn from_parts_unchecked(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Algebra {
        let a = Self::assemble(field, labels, table, unit).expect("internal algebra malformed");
        a.validate_unit().expect("internal algebra lost its unit");
        a.spot_check_associativity();
        a
    }

    fn assemble(
        field: Field,
        labels: Vec<String>,
        table: Vec<Vec<Vec<Scalar>>>,
        unit: Vec<Scalar>,
    ) -> Result<Algebra> {
        let n = labels.len();
        if table.len() != n || unit.len() != n {
            return Err(Error::Shape(format!(
                "algebra on {n} basis elements with table of {} rows and unit of length {}",
                table.len(),
                unit.len()
            )));
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::Shape("ragged multiplication table".into()));
            }
            for entry in row {
                if entry.len() != n {
                    return Err(Error::Shape("product vector of wrong length".into()));
                }
                for s in entry {
                    if s.field() != field {
                        return Err(Error::FieldMismatch(field, s.field()));
                    }
                }
            }
        }
        for s in &unit {
            if s.field() != field {
                return Err(Error::FieldMismatch(field, s.field()));
            }
        }
        let mut a = Algebra {
            field,
            labels,
            unit,
            table,
            gens: Vec::new(),
        };
        a.gens = a.compute_generators();
        Ok(a)
    }

    fn validate_associativity(&self) -> Result<()> {
        let n = self.dim();
        for i in 0..n {
            for j in 0..n {
                let ij = self.table[i][j].clone();
                for k in 0..n {
                    let left = self.mul_vec(&ij, &basis_vec(self.field, n, k));
                    let right = self.mul_vec(
                        &basis_vec(self.field, n, i),
                        &self.table[j][k],
                    );
                    if left != right {
                        return Err(Error::NotAssociative { i, j, k });
                    }
                }
            }
        }
        Ok(())
    }

    fn spot_check_associativity(&self) {
        let n = self.dim();
        if n == 0 {
            return;
        }
        let mut state = 0x243f_6a88_85a3_08d3u64 ^ (n as u64);
        for _ in 0..32 {
            let mut next = || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                ((state >> 13) % n as u64) as usize
            };
            let (i, j, k) = (next(), next(), next());
            let left = self.mul_vec(&self.table[i][j], &basis_vec(self.field, n, k));
            let right = self.mul_vec(&basis_vec(self.field, n, i), &self.table[j][k]);
            assert_eq!(left, right, "internal algebra not associative at ({i},{j},{k})");
        }
    }

    fn validate_unit(&self) -> Result<()> {
        let n = self.dim();
        for j in 0..n {
            let e = basis_vec(self.field, n, j);
            if self.mul_vec(&self.unit, &e) != e {
                return Err(Error::BadUnit(j));
            }
            if self.mul_vec(&e, &self.unit) != e {
                return Err(Error::BadUnit(j));
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn unit(&self) -> &[Scalar] {
        &self.unit
    }

    /// Coordinates of `b_i * b_j`.
    pub fn basis_product(&self, i: usize, j: usize) -> &[Scalar] {
        &self.table[i][j]
    }

    /// Indices of a generating subset of the basis (products of these,
    /// together with the unit, span the algebra).
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    /// Product of two elements in coordinates.
    pub fn mul_vec(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let n = self.dim();
        debug_assert!(x.len() == n && y.len() == n);
        let mut out = vec![self.field.zero(); n];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a.mul(b);
                for (k, c) in self.table[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] = out[k].add(&ab.mul(c));
                    }
                }
            }
        }
        out
    }

    /// Left-multiplication by `x` as a matrix on row vectors:
    /// `v * lmm(x) = x * v`.
    pub fn lmm(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for s in 0..n {
            let prod = self.mul_vec(x, &basis_vec(self.field, n, s));
            for k in 0..n {
                m[(s, k)] = prod[k].clone();
            }
        }
        m
    }

    /// Right-multiplication by `x` as a matrix on row vectors:
    /// `v * rmm(x) = v * x`.
    pub fn rmm(&self, x: &[Scalar]) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zero(self.field, n, n);
        for s in 0..n {
            let prod = self.mul_vec(&basis_vec(self.field, n, s), x);
            for k in 0..n {
                m[(s, k)] = prod[k].clone();
            }
        }
        m
    }

    /// Greedy generating subset: walk the basis, adding any element not yet
    /// in the unital subalgebra generated so far.
    fn compute_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut span =
            Subspace::from_vectors(self.field, n, &[self.unit.clone()]).expect("unit vector");
        let mut gens = Vec::new();
        for i in 0..n {
            if span.is_full() {
                break;
            }
            let e = basis_vec(self.field, n, i);
            if span.contains_vec(&e) {
                continue;
            }
            gens.push(i);
            span = self.multiplicative_closure(&span.sum(
                &Subspace::from_vectors(self.field, n, &[e]).expect("basis vector"),
            ));
        }
        gens
    }

    /// Smallest subspace containing `s` and closed under products.
    fn multiplicative_closure(&self, s: &Subspace) -> Subspace {
        let mut span = s.clone();
        loop {
            let mut next = span.clone();
            let basis = span.basis_vectors();
            for u in &basis {
                for v in &basis {
                    let p = self.mul_vec(u, v);
                    if !next.contains_vec(&p) {
                        next = next.sum(
                            &Subspace::from_vectors(self.field, self.dim(), &[p])
                                .expect("product vector"),
                        );
                    }
                }
            }
            if next.dim() == span.dim() {
                return span;
            }
            span = next;
        }
    }

    pub fn is_commutative(&self) -> bool {
        self.center().is_full()
    }

    /// The centre, as a subspace: elements commuting with every generator
    /// (hence with everything).
    pub fn center(&self) -> Subspace {
        let n = self.dim();
        if self.gens.is_empty() {
            return Subspace::full(self.field, n);
        }
        let mut constraint: Option<Matrix> = None;
        for &g in &self.gens {
            let e = basis_vec(self.field, n, g);
            let diff = self.lmm(&e).sub(&self.rmm(&e));
            constraint = Some(match constraint {
                None => diff,
                Some(c) => c.hstack(&diff),
            });
        }
        Subspace::from_matrix(&kernel_left(&constraint.unwrap()))
    }

    /// The opposite algebra: same space, reversed products.
    pub fn opposite(&self) -> Algebra {
        let n = self.dim();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = self.table[j][i].clone();
            }
        }
        Algebra::from_parts_unchecked(self.field, self.labels.clone(), table, self.unit.clone())
    }
}

/// Standard basis row vector `e_k`.
pub fn basis_vec(field: Field, n: usize, k: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[k] = field.one();
    v
}

// ---------------------------------------------------------------------------
// Ideals
// ---------------------------------------------------------------------------

/// A two-sided ideal, stored as its canonical subspace.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Ideal {
    space: Subspace,
}

impl Ideal {
    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn is_zero(&self) -> bool {
        self.space.is_zero()
    }
}

impl Algebra {
    /// Is the subspace stable under two-sided multiplication?
    pub fn is_ideal(&self, s: &Subspace) -> bool {
        let n = self.dim();
        assert_eq!(s.ambient(), n, "subspace from a different algebra");
        self.gens.iter().all(|&g| {
            let e = basis_vec(self.field, n, g);
            s.apply(&self.rmm(&e)).dim() <= s.dim()
                && s.contains(&s.apply(&self.rmm(&e)))
                && s.contains(&s.apply(&self.lmm(&e)))
        })
    }

    /// Promote a subspace already known (and checked) to be an ideal.
    pub fn as_ideal(&self, s: Subspace) -> Result<Ideal> {
        if !self.is_ideal(&s) {
            return Err(Error::NotStable(
                "subspace is not a two-sided ideal".into(),
            ));
        }
        Ok(Ideal { space: s })
    }

    /// Two-sided ideal generated by vectors: the closure of their span under
    /// multiplication by the algebra's generators on both sides.
    pub fn ideal_closure(&self, gens: &[Vec<Scalar>]) -> Result<Ideal> {
        let n = self.dim();
        let mut span = Subspace::from_vectors(self.field, n, gens)?;
        loop {
            let mut next = span.clone();
            for &g in &self.gens {
                let e = basis_vec(self.field, n, g);
                next = next.sum(&span.apply(&self.rmm(&e)));
                next = next.sum(&span.apply(&self.lmm(&e)));
            }
            if next.dim() == span.dim() {
                debug_assert!(self.is_ideal(&next));
                return Ok(Ideal { space: next });
            }
            span = next;
        }
    }

    pub fn zero_ideal(&self) -> Ideal {
        Ideal {
            space: Subspace::zero(self.field, self.dim()),
        }
    }

    pub fn unit_ideal(&self) -> Ideal {
        Ideal {
            space: Subspace::full(self.field, self.dim()),
        }
    }

    /// Ideal product: the span of pairwise products, which is again
    /// two-sided.
    pub fn ideal_product(&self, a: &Ideal, b: &Ideal) -> Ideal {
        let mut prods = Vec::new();
        for u in a.space.basis_vectors() {
            for v in b.space.basis_vectors() {
                prods.push(self.mul_vec(&u, &v));
            }
        }
        let space = Subspace::from_vectors(self.field, self.dim(), &prods)
            .expect("ideal product vectors");
        debug_assert!(self.is_ideal(&space));
        Ideal { space }
    }

    pub fn ideal_sum(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal {
            space: a.space.sum(&b.space),
        }
    }

    pub fn ideal_intersect(&self, a: &Ideal, b: &Ideal) -> Ideal {
        Ideal {
            space: a.space.intersect(&b.space),
        }
    }

    /// Power `a^k` (with `a^0` the unit ideal).
    pub fn ideal_power(&self, a: &Ideal, k: usize) -> Ideal {
        let mut acc = self.unit_ideal();
        for _ in 0..k {
            acc = self.ideal_product(&acc, a);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// The radical
// ---------------------------------------------------------------------------

impl Algebra {
    /// The Jacobson radical, computed by the descending chain of
    /// characteristic-coefficient forms on the left regular representation.
    ///
    /// Level `i` intersects the current subspace with the kernel of the
    /// bilinear form `(x, y) -> e_{p^i}(lmm(x y))`, where `e_j` is the
    /// `j`-th elementary-symmetric coefficient of the characteristic
    /// polynomial; levels run while `p^i <= dim`.  In characteristic zero
    /// (or when `p > dim`) only the trace form survives, which is the
    /// classical criterion.  The result is runtime-checked to be a
    /// two-sided nilpotent ideal.
    pub fn radical(&self) -> Ideal {
        let n = self.dim();
        if n == 0 {
            return self.zero_ideal();
        }
        let mut current = Subspace::full(self.field, n);
        let levels: Vec<u64> = match self.field {
            Field::Q => vec![1],
            Field::Fp(p) => {
                let mut ls = vec![1u64];
                let mut m = p;
                while m <= n as u64 {
                    ls.push(m);
                    m = match m.checked_mul(p) {
                        Some(next) => next,
                        None => break,
                    };
                }
                ls
            }
        };
        for &level in &levels {
            if current.is_zero() {
                break;
            }
            let basis = current.basis_vectors();
            let d = basis.len();
            let mut gram = Matrix::zero(self.field, d, d);
            for s in 0..d {
                for t in 0..d {
                    let prod = self.mul_vec(&basis[s], &basis[t]);
                    let m = self.lmm(&prod);
                    gram[(s, t)] = if level == 1 {
                        m.trace()
                    } else {
                        char_coeff(&m, level as usize)
                    };
                }
            }
            let rels = kernel_left(&gram);
            let coords_to_ambient = Matrix::from_rows(self.field, basis).expect("basis rows");
            current = Subspace::from_matrix(&rels.mul(&coords_to_ambient));
        }
        // The chain lands exactly on the radical; verify the two structural
        // facts that make everything downstream sound.
        assert!(self.is_ideal(&current), "radical candidate is not an ideal");
        let rad = Ideal { space: current };
        assert!(
            self.is_nilpotent_ideal(&rad),
            "radical candidate is not nilpotent"
        );
        rad
    }

    /// Does `a^k` vanish for some `k <= dim + 1`?
    pub fn is_nilpotent_ideal(&self, a: &Ideal) -> bool {
        let mut power = a.clone();
        for _ in 0..=self.dim() {
            if power.is_zero() {
                return true;
            }
            let next = self.ideal_product(&power, a);
            if next.dim() == power.dim() {
                return false;
            }
            power = next;
        }
        power.is_zero()
    }

    pub fn is_semisimple(&self) -> bool {
        self.radical().is_zero()
    }
}

// ---------------------------------------------------------------------------
// Quotients
// ---------------------------------------------------------------------------

/// A surjective algebra map, as a matrix on row vectors, together with a
/// distinguished linear section.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    /// `dim A x dim A/I`, acts on row vectors.
    pub proj: Matrix,
    /// `dim A/I x dim A`, the canonical linear (not multiplicative) section.
    pub section: Matrix,
}

impl QuotientMap {
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.proj.apply_row(v)
    }

    pub fn lift(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.section.apply_row(v)
    }
}

impl Algebra {
    /// The quotient algebra `A/I` on canonical coordinates (the free columns
    /// of the ideal's RREF basis), with the projection and its canonical
    /// section.
    pub fn quotient(&self, ideal: &Ideal) -> (Algebra, QuotientMap) {
        let n = self.dim();
        let space = &ideal.space;
        let free = space.free_columns();
        let labels: Vec<String> = free.iter().map(|&c| self.labels[c].clone()).collect();
        let q = space.quotient_matrix();
        let s = space.section_matrix();
        let m = free.len();
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                // Representatives of quotient basis vectors are the ambient
                // standard vectors at the free columns.
                let prod = self.mul_vec(
                    &basis_vec(self.field, n, free[i]),
                    &basis_vec(self.field, n, free[j]),
                );
                table[i][j] = q.apply_row(&prod);
            }
        }
        let unit = q.apply_row(&self.unit);
        let quotient = Algebra::from_parts_unchecked(self.field, labels, table, unit);
        (quotient, QuotientMap { proj: q, section: s })
    }
}

// ---------------------------------------------------------------------------
// Corners
// ---------------------------------------------------------------------------

/// The corner algebra `e A e` of an idempotent, together with the bimodules
/// `A e` and `e A` in coordinates, with all four side actions precomputed.
#[derive(Clone, Debug)]
pub struct Corner {
    /// `B = e A e` on its own canonical coordinates.
    pub algebra: Algebra,
    /// The idempotent, in `A` coordinates.
    pub e: Vec<Scalar>,
    /// `e A e` as a subspace of `A` (its RREF basis gives `B`'s coordinates).
    pub eae: Subspace,
    /// `A e` as a subspace of `A`.
    pub ae: Subspace,
    /// `e A` as a subspace of `A`.
    pub ea: Subspace,
    /// Left action of each `A` basis element on `A e` (coords to coords).
    pub ae_left_a: Vec<Matrix>,
    /// Right action of each `B` basis element on `A e`.
    pub ae_right_b: Vec<Matrix>,
    /// Left action of each `B` basis element on `e A`.
    pub ea_left_b: Vec<Matrix>,
    /// Right action of each `A` basis element on `e A`.
    pub ea_right_a: Vec<Matrix>,
}

impl Algebra {
    pub fn is_idempotent(&self, e: &[Scalar]) -> bool {
        self.mul_vec(e, e) == e
    }

    /// Build the corner data for an idempotent `e`.
    pub fn corner(&self, e: &[Scalar]) -> Result<Corner> {
        if !self.is_idempotent(e) {
            return Err(Error::BadElement("idempotent"));
        }
        let n = self.dim();
        let le = self.lmm(e);
        let re = self.rmm(e);
        let eae = Subspace::from_matrix(&Matrix::identity(self.field, n).mul(&le).mul(&re));
        let ae = Subspace::from_matrix(&re);
        let ea = Subspace::from_matrix(&le);

        // Structure constants of B on the RREF basis of eAe: RREF rows have
        // unit pivots, so in-subspace coordinates are just pivot entries.
        let b_basis = eae.basis_vectors();
        let bd = b_basis.len();
        let mut table = vec![vec![Vec::new(); bd]; bd];
        for s in 0..bd {
            for t in 0..bd {
                let prod = self.mul_vec(&b_basis[s], &b_basis[t]);
                table[s][t] = eae.coords(&prod);
            }
        }
        let labels: Vec<String> = (0..bd).map(|s| format!("c{s}")).collect();
        let unit = eae.coords(e);
        let algebra = Algebra::from_parts_unchecked(self.field, labels, table, unit);

        let ae_basis = ae.basis_vectors();
        let ea_basis = ea.basis_vectors();
        let action = |basis: &[Vec<Scalar>],
                      sub: &Subspace,
                      f: &dyn Fn(&[Scalar]) -> Vec<Scalar>| {
            let d = basis.len();
            Matrix::from_fn(self.field, d, d, |s, k| {
                let img = f(&basis[s]);
                debug_assert!(sub.contains_vec(&img));
                sub.coords(&img)[k].clone()
            })
        };
        let mut ae_left_a = Vec::with_capacity(n);
        let mut ea_right_a = Vec::with_capacity(n);
        for i in 0..n {
            let bi = basis_vec(self.field, n, i);
            ae_left_a.push(action(&ae_basis, &ae, &|x| self.mul_vec(&bi, x)));
            ea_right_a.push(action(&ea_basis, &ea, &|x| self.mul_vec(x, &bi)));
        }
        let mut ae_right_b = Vec::with_capacity(bd);
        let mut ea_left_b = Vec::with_capacity(bd);
        for t in 0..bd {
            let bt = &b_basis[t];
            ae_right_b.push(action(&ae_basis, &ae, &|x| self.mul_vec(x, bt)));
            ea_left_b.push(action(&ea_basis, &ea, &|x| self.mul_vec(bt, x)));
        }
        Ok(Corner {
            algebra,
            e: e.to_vec(),
            eae,
            ae,
            ea,
            ae_left_a,
            ae_right_b,
            ea_left_b,
            ea_right_a,
        })
    }
}

// ---------------------------------------------------------------------------
// Quiver presentations
// ---------------------------------------------------------------------------

/// An arrow of a quiver.
#[derive(Clone, Debug)]
pub struct Arrow {
    pub from: usize,
    pub to: usize,
    pub label: String,
}

/// A quiver with (parallel-path) relations and a path-length bound.  Paths
/// strictly longer than `bound` are declared zero, which makes the ambient
/// truncated path algebra finite-dimensional.
#[derive(Clone, Debug)]
pub struct QuiverPresentation {
    pub vertices: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Each relation is a linear combination of parallel paths, a path being
    /// a composable sequence of arrow indices.
    pub relations: Vec<Vec<(Vec<usize>, Scalar)>>,
    pub bound: usize,
}

/// The algebra of a quiver presentation, plus the images of the vertex and
/// arrow classes (handy for cross-checks: the arrow classes generate the
/// radical of an admissible presentation).
#[derive(Clone, Debug)]
pub struct PathAlgebra {
    pub algebra: Algebra,
    pub vertex_classes: Vec<Vec<Scalar>>,
    pub arrow_classes: Vec<Vec<Scalar>>,
}

/// Maximum number of truncated paths before the construction refuses.
const PATH_BUDGET: usize = 4096;

/// Compile a quiver presentation over `field` into structure constants:
/// build the truncated path algebra, close the relations into a two-sided
/// ideal, and take the quotient.
pub fn path_algebra(field: Field, q: &QuiverPresentation) -> Result<PathAlgebra> {
    let nv = q.vertices.len();
    if nv == 0 {
        return Err(Error::BadPresentation("quiver has no vertices".into()));
    }
    for a in &q.arrows {
        if a.from >= nv || a.to >= nv {
            return Err(Error::BadPresentation(format!(
                "arrow {} touches a missing vertex",
                a.label
            )));
        }
    }

    // Enumerate paths of length <= bound: ordered by length, then by start
    // vertex / arrow sequence, so indices are deterministic.
    #[derive(Clone, PartialEq, Eq, PartialOrd, Ord)]
    struct Path {
        start: usize,
        arrows: Vec<usize>,
    }
    let end_of = |p: &Path| -> usize {
        p.arrows.last().map_or(p.start, |&a| q.arrows[a].to)
    };
    let mut paths: Vec<Path> = (0..nv)
        .map(|v| Path {
            start: v,
            arrows: Vec::new(),
        })
        .collect();
    let mut frontier: Vec<Path> = paths.clone();
    for _len in 1..=q.bound {
        let mut next = Vec::new();
        for p in &frontier {
            let e = end_of(p);
            for (ai, a) in q.arrows.iter().enumerate() {
                if a.from == e {
                    let mut arrows = p.arrows.clone();
                    arrows.push(ai);
                    next.push(Path {
                        start: p.start,
                        arrows,
                    });
                }
            }
        }
        next.sort();
        paths.extend(next.iter().cloned());
        if paths.len() > PATH_BUDGET {
            return Err(Error::BudgetExceeded(format!(
                "more than {PATH_BUDGET} paths under length bound {}",
                q.bound
            )));
        }
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    let mut index: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
    for (i, p) in paths.iter().enumerate() {
        index.insert((p.start, p.arrows.clone()), i);
    }

    let multi_char = q.arrows.iter().any(|a| a.label.chars().count() > 1);
    let label_of = |p: &Path| -> String {
        if p.arrows.is_empty() {
            q.vertices[p.start].clone()
        } else {
            let parts: Vec<&str> = p.arrows.iter().map(|&a| q.arrows[a].label.as_str()).collect();
            if multi_char {
                parts.join("*")
            } else {
                parts.concat()
            }
        }
    };

    let np = paths.len();
    let mut table = vec![vec![vec![field.zero(); np]; np]; np];
    for (i, p) in paths.iter().enumerate() {
        for (j, r) in paths.iter().enumerate() {
            if end_of(p) == r.start && p.arrows.len() + r.arrows.len() <= q.bound {
                let mut arrows = p.arrows.clone();
                arrows.extend(&r.arrows);
                let k = index[&(p.start, arrows)];
                table[i][j][k] = field.one();
            }
        }
    }
    let mut unit = vec![field.zero(); np];
    for v in 0..nv {
        unit[index[&(v, Vec::new())]] = field.one();
    }
    let labels: Vec<String> = paths.iter().map(|p| label_of(p)).collect();
    let truncated = Algebra::from_parts_unchecked(field, labels, table, unit);

    // Resolve relations to vectors in the truncated path space.
    let mut rel_vecs: Vec<Vec<Scalar>> = Vec::new();
    for rel in &q.relations {
        let mut v = vec![field.zero(); np];
        let mut endpoints: Option<(usize, usize)> = None;
        for (arrow_seq, coeff) in rel {
            if arrow_seq.is_empty() {
                return Err(Error::BadPresentation(
                    "relation term with an empty path".into(),
                ));
            }
            for window in arrow_seq.windows(2) {
                if q.arrows[window[0]].to != q.arrows[window[1]].from {
                    return Err(Error::BadPresentation(
                        "relation path is not composable".into(),
                    ));
                }
            }
            let start = q.arrows[arrow_seq[0]].from;
            let end = q.arrows[*arrow_seq.last().unwrap()].to;
            match endpoints {
                None => endpoints = Some((start, end)),
                Some(ep) if ep != (start, end) => {
                    return Err(Error::BadPresentation(
                        "relation mixes non-parallel paths".into(),
                    ));
                }
                _ => {}
            }
            if coeff.field() != field {
                return Err(Error::FieldMismatch(field, coeff.field()));
            }
            if arrow_seq.len() <= q.bound {
                let k = index[&(start, arrow_seq.clone())];
                v[k] = v[k].add(coeff);
            }
            // Paths beyond the bound are already zero in the truncation.
        }
        rel_vecs.push(v);
    }

    let ideal = truncated.ideal_closure(&rel_vecs)?;
    let (algebra, map) = truncated.quotient(&ideal);
    let vertex_classes = (0..nv)
        .map(|v| map.apply(&basis_vec(field, np, index[&(v, Vec::new())])))
        .collect();
    let arrow_classes = (0..q.arrows.len())
        .map(|a| {
            map.apply(&basis_vec(
                field,
                np,
                index[&(q.arrows[a].from, vec![a])],
            ))
        })
        .collect();
    Ok(PathAlgebra {
        algebra,
        vertex_classes,
        arrow_classes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::subspace::enumerate_subspaces;

    fn f2() -> Field {
        Field::Fp(2)
    }

    #[test]
    fn triangular_fixture_is_valid_and_generated() {
        let a = fixtures::t2();
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["e11", "e12", "e22"]);
        // e11 and e12 generate (e22 = 1 - e11 comes for free).
        assert_eq!(a.generators(), &[0, 1]);
        assert!(!a.is_commutative());
    }

    #[test]
    fn associativity_validation_catches_corruption() {
        let a = fixtures::t2();
        let n = a.dim();
        let mut table = vec![vec![Vec::new(); n]; n];
        for i in 0..n {
            for j in 0..n {
                table[i][j] = a.basis_product(i, j).to_vec();
            }
        }
        // Declare e12 * e22 = e22 instead of e12.
        table[1][2] = basis_vec(f2(), 3, 2);
        let bad = Algebra::new(f2(), a.labels().to_vec(), table, a.unit().to_vec());
        assert!(matches!(bad, Err(Error::NotAssociative { .. })));
    }

    #[test]
    fn triangular_ideal_lattice_is_the_known_five() {
        let a = fixtures::t2();
        let all = enumerate_subspaces(f2(), 3, 1 << 12).unwrap();
        let ideals: Vec<&Subspace> = all.iter().filter(|s| a.is_ideal(s)).collect();
        assert_eq!(ideals.len(), 5);
        let dims: Vec<usize> = ideals.iter().map(|s| s.dim()).collect();
        // 0, span{e12}, span{e11,e12}, span{e12,e22}, A.
        assert_eq!(dims.iter().filter(|&&d| d == 0).count(), 1);
        assert_eq!(dims.iter().filter(|&&d| d == 1).count(), 1);
        assert_eq!(dims.iter().filter(|&&d| d == 2).count(), 2);
        assert_eq!(dims.iter().filter(|&&d| d == 3).count(), 1);
        let arrow_span = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[0, 1, 0]]));
        assert!(ideals.iter().any(|s| **s == arrow_span));
    }

    #[test]
    fn radical_of_triangular_is_the_arrow_span() {
        // In characteristic 2 the plain trace form is blind here (it keeps
        // the idempotent e11 in its kernel); the levelled chain is not.
        let a = fixtures::t2();
        let rad = a.radical();
        assert_eq!(rad.dim(), 1);
        assert!(rad
            .space()
            .contains_vec(&basis_vec(f2(), 3, 1)));
        assert!(a.is_nilpotent_ideal(&rad));
    }

    #[test]
    fn radical_examples_across_fields() {
        // Split semisimple: k x k over F2.
        assert!(fixtures::kk().is_semisimple());
        // Dual numbers: radical is the span of the nilpotent.
        let d = fixtures::dual();
        let rad = d.radical();
        assert_eq!(rad.dim(), 1);
        assert!(rad.space().contains_vec(&basis_vec(f2(), 2, 1)));
        // Upper triangular over Q: the trace form alone suffices.
        let t2q = fixtures::t2_over(Field::Q);
        let radq = t2q.radical();
        assert_eq!(radq.dim(), 1);
        assert!(radq.space().contains_vec(&basis_vec(Field::Q, 3, 1)));
    }

    #[test]
    fn maximal_ideal_products_are_asymmetric() {
        let a = fixtures::t2();
        let m_p = a
            .as_ideal(Subspace::from_matrix(&Matrix::from_i64(
                f2(),
                &[&[1, 0, 0], &[0, 1, 0]],
            )))
            .unwrap();
        let m_q = a
            .as_ideal(Subspace::from_matrix(&Matrix::from_i64(
                f2(),
                &[&[0, 1, 0], &[0, 0, 1]],
            )))
            .unwrap();
        let pq = a.ideal_product(&m_p, &m_q);
        let qp = a.ideal_product(&m_q, &m_p);
        assert_eq!(pq.dim(), 1);
        assert!(pq.space().contains_vec(&basis_vec(f2(), 3, 1)));
        assert!(qp.is_zero());
    }

    #[test]
    fn quotient_by_radical_is_semisimple() {
        let a = fixtures::t2();
        let (bar, map) = a.quotient(&a.radical());
        assert_eq!(bar.dim(), 2);
        assert!(bar.is_commutative());
        assert!(bar.is_semisimple());
        assert_eq!(bar.labels(), &["e11", "e22"]);
        // The projection is multiplicative on basis elements.
        for i in 0..3 {
            for j in 0..3 {
                let lhs = map.apply(&a.mul_vec(&basis_vec(f2(), 3, i), &basis_vec(f2(), 3, j)));
                let rhs = bar.mul_vec(
                    &map.apply(&basis_vec(f2(), 3, i)),
                    &map.apply(&basis_vec(f2(), 3, j)),
                );
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn corners_of_triangular() {
        let a = fixtures::t2();
        // e = e22: the corner is 1-dimensional, Ae is 2-dimensional
        // (span{e12, e22}), eA is the 1-dimensional projective simple.
        let e = basis_vec(f2(), 3, 2);
        let c = a.corner(&e).unwrap();
        assert_eq!(c.algebra.dim(), 1);
        assert_eq!(c.ae.dim(), 2);
        assert_eq!(c.ea.dim(), 1);
        assert!(c.ae.contains_vec(&basis_vec(f2(), 3, 1)));
        // e = 1 gives back the whole algebra.
        let full = a.corner(a.unit()).unwrap();
        assert_eq!(full.algebra.dim(), 3);
        // A non-idempotent is rejected.
        assert!(a.corner(&basis_vec(f2(), 3, 1)).is_err());
    }

    #[test]
    fn opposite_swaps_the_asymmetry() {
        let a = fixtures::t2();
        let op = a.opposite();
        let m_p = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
        let m_q = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[0, 1, 0], &[0, 0, 1]]));
        let ip = op.as_ideal(m_p).unwrap();
        let iq = op.as_ideal(m_q).unwrap();
        // Products reverse compared with the test above.
        assert!(op.ideal_product(&ip, &iq).is_zero());
        assert_eq!(op.ideal_product(&iq, &ip).dim(), 1);
    }

    #[test]
    fn path_algebra_of_one_arrow_matches_triangular() {
        let q = QuiverPresentation {
            vertices: vec!["e1".into(), "e2".into()],
            arrows: vec![Arrow {
                from: 0,
                to: 1,
                label: "a".into(),
            }],
            relations: vec![],
            bound: 4,
        };
        let pa = path_algebra(f2(), &q).unwrap();
        let a = pa.algebra;
        assert_eq!(a.dim(), 3);
        assert_eq!(a.labels(), &["e1", "e2", "a"]);
        // Identify e1 -> e11, e2 -> e22, a -> e12 and compare all products.
        let t2 = fixtures::t2();
        let perm = [0usize, 2, 1]; // path basis index -> t2 index
        for i in 0..3 {
            for j in 0..3 {
                let got = a.basis_product(i, j);
                let want = t2.basis_product(perm[i], perm[j]);
                for k in 0..3 {
                    assert_eq!(got[k], want[perm[k]], "mismatch at ({i},{j},{k})");
                }
            }
        }
    }

    #[test]
    fn truncated_polynomial_ring_from_a_loop() {
        let q = QuiverPresentation {
            vertices: vec!["e".into()],
            arrows: vec![Arrow {
                from: 0,
                to: 0,
                label: "x".into(),
            }],
            relations: vec![vec![(vec![0, 0, 0], f2().one())]],
            bound: 3,
        };
        let pa = path_algebra(f2(), &q).unwrap();
        assert_eq!(pa.algebra.dim(), 3); // 1, x, x^2
        let rad = pa.algebra.radical();
        assert_eq!(rad.dim(), 2);
        // The arrow class generates the radical.
        let arrow_ideal = pa
            .algebra
            .ideal_closure(&[pa.arrow_classes[0].clone()])
            .unwrap();
        assert_eq!(arrow_ideal.space(), rad.space());
    }

    #[test]
    fn path_budget_refuses_exponential_blowups() {
        let q = QuiverPresentation {
            vertices: vec!["e".into()],
            arrows: vec![
                Arrow {
                    from: 0,
                    to: 0,
                    label: "x".into(),
                },
                Arrow {
                    from: 0,
                    to: 0,
                    label: "y".into(),
                },
            ],
            relations: vec![],
            bound: 13,
        };
        assert!(matches!(
            path_algebra(f2(), &q),
            Err(Error::BudgetExceeded(_))
        ));
    }

    #[test]
    fn center_of_product_algebra_is_everything() {
        let a = fixtures::kk();
        assert!(a.is_commutative());
        let t = fixtures::t2();
        // The centre of the triangular algebra is just the scalars.
        assert_eq!(t.center().dim(), 1);
        assert!(t.center().contains_vec(t.unit()));
    }
}
