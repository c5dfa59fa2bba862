//! Degree-truncated connected graded algebras and their graded modules:
//! windowed Hilbert data, truncation and shift, bounded tails comparison,
//! central-element divisors with their four-term exact sequence, Rees
//! extensions of filtered algebras, constant point modules, endomorphism
//! blocks of consecutive degree windows, and degree-zero localization.
//!
//! Everything here is windowed.  An algebra carries per-degree bases and
//! multiplication tables only up to its bound, every module lives on an
//! explicit degree window, and each operation either answers within the
//! window or fails loudly with an insufficient-truncation error.  "True at
//! the bound" is the only claim any of these computations makes.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::matrix::{kernel_left, rank, solve_left, Matrix};
use crate::module::{Module, Rep};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

/// Structure constants of one degree pair: `[i][j]` is the coordinate
/// vector of the product of basis element `i` of the left degree with
/// basis element `j` of the right degree.
type Table = Vec<Vec<Vec<Scalar>>>;

// ---------------------------------------------------------------------------
// Graded algebras
// ---------------------------------------------------------------------------

/// A connected graded algebra known through a degree bound: per-degree
/// dimensions and multiplication tables, plus (when it was built from a
/// presentation) the canonical monomial words of each degree's basis.
#[derive(Clone, Debug)]
pub struct GradedAlgebra {
    field: Field,
    labels: Vec<String>,
    degrees: Vec<usize>,
    bound: usize,
    dims: Vec<usize>,
    /// Coordinates of generator `g` inside its degree component.
    gen_coords: Vec<Vec<Scalar>>,
    /// Canonical monomial words per degree; absent for algebras assembled
    /// from raw per-degree components.
    monomials: Option<Vec<Vec<Vec<usize>>>>,
    /// `tables[a][b]` for `a + b <= bound`.
    tables: Vec<Vec<Table>>,
}

/// A homogeneous relation: scalar-weighted words in the generators, all of
/// the same total degree.
#[derive(Clone, Debug)]
pub struct GradedRelation {
    pub terms: Vec<(Scalar, Vec<usize>)>,
}

impl GradedRelation {
    /// The commutator of two generators.
    pub fn commutator(field: Field, a: usize, b: usize) -> GradedRelation {
        GradedRelation {
            terms: vec![
                (field.one(), vec![a, b]),
                (field.one().neg(), vec![b, a]),
            ],
        }
    }
}

/// All generator words of the given total degree, in a fixed lexicographic
/// order (first letter varies slowest).
fn words_of_degree(degrees: &[usize], n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (g, &d) in degrees.iter().enumerate() {
        if d <= n {
            for tail in words_of_degree(degrees, n - d) {
                let mut w = Vec::with_capacity(tail.len() + 1);
                w.push(g);
                w.extend(tail);
                out.push(w);
            }
        }
    }
    out
}

fn word_degree(degrees: &[usize], w: &[usize]) -> usize {
    w.iter().map(|&g| degrees[g]).sum()
}

/// Build a connected graded algebra from homogeneous generators and
/// relations, with per-degree bases computed by linear algebra on words:
/// degree `n` is the span of the degree-`n` words modulo every degreewise
/// consequence of the relations, and the canonical monomials are the free
/// columns of that consequence space in the fixed word order.
pub fn graded_presentation(
    field: Field,
    gens: &[(&str, usize)],
    rels: &[GradedRelation],
    bound: usize,
) -> Result<GradedAlgebra> {
    let labels: Vec<String> = gens.iter().map(|(l, _)| (*l).to_string()).collect();
    let degrees: Vec<usize> = gens.iter().map(|(_, d)| *d).collect();
    if degrees.iter().any(|&d| d == 0) {
        return Err(Error::BadPresentation(
            "a degree-zero generator breaks connectedness".into(),
        ));
    }
    for r in rels {
        if r.terms.is_empty() {
            return Err(Error::BadPresentation("empty relation".into()));
        }
        let d0 = word_degree(&degrees, &r.terms[0].1);
        if r.terms.iter().any(|(_, w)| word_degree(&degrees, w) != d0) {
            return Err(Error::BadPresentation(
                "relation is not homogeneous".into(),
            ));
        }
        if d0 == 0 {
            return Err(Error::BadPresentation(
                "a degree-zero relation breaks connectedness".into(),
            ));
        }
        if r.terms.iter().any(|(_, w)| w.iter().any(|&g| g >= gens.len())) {
            return Err(Error::BadPresentation(
                "relation names a missing generator".into(),
            ));
        }
    }

    // Per-degree word lists, index maps, and consequence spaces.
    let mut words: Vec<Vec<Vec<usize>>> = Vec::with_capacity(bound + 1);
    let mut index: Vec<BTreeMap<Vec<usize>, usize>> = Vec::with_capacity(bound + 1);
    let mut cells = 0usize;
    for n in 0..=bound {
        let wn = words_of_degree(&degrees, n);
        cells += wn.len();
        if cells > 1 << 20 {
            return Err(Error::BudgetExceeded(
                "word basis grows past the presentation budget".into(),
            ));
        }
        let map = wn
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect::<BTreeMap<_, _>>();
        words.push(wn);
        index.push(map);
    }
    let mut spaces: Vec<Subspace> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        let mut rows: Vec<Vec<Scalar>> = Vec::new();
        for r in rels {
            let d = word_degree(&degrees, &r.terms[0].1);
            if d > n {
                continue;
            }
            for a in 0..=(n - d) {
                let c = n - d - a;
                for u in &words[a] {
                    for v in &words[c] {
                        let mut row = vec![field.zero(); words[n].len()];
                        for (coef, w) in &r.terms {
                            let mut full = u.clone();
                            full.extend(w);
                            full.extend(v);
                            let col = index[n][&full];
                            row[col] = row[col].add(coef);
                        }
                        if row.iter().any(|x| !x.is_zero()) {
                            rows.push(row);
                        }
                    }
                }
            }
        }
        spaces.push(Subspace::from_vectors(field, words[n].len(), &rows)?);
    }

    let dims: Vec<usize> = (0..=bound)
        .map(|n| words[n].len() - spaces[n].dim())
        .collect();
    let monomials: Vec<Vec<Vec<usize>>> = (0..=bound)
        .map(|n| {
            spaces[n]
                .free_columns()
                .into_iter()
                .map(|c| words[n][c].clone())
                .collect()
        })
        .collect();

    // Tables: expand each basis element into words, concatenate word pairs,
    // and project back to canonical coordinates.
    let quots: Vec<Matrix> = spaces.iter().map(Subspace::quotient_matrix).collect();
    let sects: Vec<Matrix> = spaces.iter().map(Subspace::section_matrix).collect();
    let mut tables: Vec<Vec<Table>> = Vec::with_capacity(bound + 1);
    for a in 0..=bound {
        let mut row = Vec::with_capacity(bound - a + 1);
        for b in 0..=(bound - a) {
            let n = a + b;
            let mut t: Table = vec![vec![Vec::new(); dims[b]]; dims[a]];
            for (i, ti) in t.iter_mut().enumerate() {
                let ri = sects[a].row_to_vec(i);
                for (j, tij) in ti.iter_mut().enumerate() {
                    let rj = sects[b].row_to_vec(j);
                    let mut vec_n = vec![field.zero(); words[n].len()];
                    for (wi, ci) in ri.iter().enumerate() {
                        if ci.is_zero() {
                            continue;
                        }
                        for (wj, cj) in rj.iter().enumerate() {
                            if cj.is_zero() {
                                continue;
                            }
                            let mut full = words[a][wi].clone();
                            full.extend(&words[b][wj]);
                            let col = index[n][&full];
                            vec_n[col] = vec_n[col].add(&ci.mul(cj));
                        }
                    }
                    *tij = quots[n].apply_row(&vec_n);
                }
            }
            row.push(t);
        }
        tables.push(row);
    }

    let gen_coords: Vec<Vec<Scalar>> = (0..gens.len())
        .map(|g| quots[degrees[g]].apply_row(&word_vector(field, &words[degrees[g]], &index[degrees[g]], &[g])))
        .collect();

    let out = GradedAlgebra {
        field,
        labels,
        degrees,
        bound,
        dims,
        gen_coords,
        monomials: Some(monomials),
        tables,
    };
    out.check_connected()?;
    out.check_associative()?;
    Ok(out)
}

fn word_vector(
    field: Field,
    words: &[Vec<usize>],
    index: &BTreeMap<Vec<usize>, usize>,
    w: &[usize],
) -> Vec<Scalar> {
    let mut v = vec![field.zero(); words.len()];
    v[index[w]] = field.one();
    v
}

impl GradedAlgebra {
    /// Assemble a graded algebra from raw per-degree dimensions and tables;
    /// the generators are taken to be the degree-one basis.
    fn from_components(field: Field, dims: Vec<usize>, tables: Vec<Vec<Table>>) -> Result<GradedAlgebra> {
        let bound = dims.len() - 1;
        let d1 = if bound >= 1 { dims[1] } else { 0 };
        let labels: Vec<String> = (0..d1).map(|i| format!("s{i}")).collect();
        let gen_coords: Vec<Vec<Scalar>> = (0..d1)
            .map(|i| {
                let mut v = vec![field.zero(); d1];
                v[i] = field.one();
                v
            })
            .collect();
        let out = GradedAlgebra {
            field,
            labels,
            degrees: vec![1; d1],
            bound,
            dims,
            gen_coords,
            monomials: None,
            tables,
        };
        out.check_connected()?;
        out.check_associative()?;
        Ok(out)
    }

    fn check_connected(&self) -> Result<()> {
        if self.dims.first() != Some(&1) {
            return Err(Error::BadPresentation(
                "degree zero is not one-dimensional".into(),
            ));
        }
        // The degree-zero basis element is the unit.
        for b in 0..=self.bound {
            for j in 0..self.dims[b] {
                let left = &self.tables[0][b][0][j];
                let right = &self.tables[b][0][j][0];
                let ok = left
                    .iter()
                    .enumerate()
                    .all(|(l, c)| if l == j { c.is_one() } else { c.is_zero() })
                    && right
                        .iter()
                        .enumerate()
                        .all(|(l, c)| if l == j { c.is_one() } else { c.is_zero() });
                if !ok {
                    return Err(Error::BadPresentation(
                        "degree zero does not act as the unit".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    fn check_associative(&self) -> Result<()> {
        for a in 0..=self.bound {
            for b in 0..=(self.bound - a) {
                for c in 0..=(self.bound - a - b) {
                    for i in 0..self.dims[a] {
                        for j in 0..self.dims[b] {
                            for k in 0..self.dims[c] {
                                let ab = &self.tables[a][b][i][j];
                                let mut lhs = vec![self.field.zero(); self.dims[a + b + c]];
                                for (l, cl) in ab.iter().enumerate() {
                                    if cl.is_zero() {
                                        continue;
                                    }
                                    for (m, cm) in self.tables[a + b][c][l][k].iter().enumerate() {
                                        lhs[m] = lhs[m].add(&cl.mul(cm));
                                    }
                                }
                                let bc = &self.tables[b][c][j][k];
                                let mut rhs = vec![self.field.zero(); self.dims[a + b + c]];
                                for (l, cl) in bc.iter().enumerate() {
                                    if cl.is_zero() {
                                        continue;
                                    }
                                    for (m, cm) in self.tables[a][b + c][i][l].iter().enumerate() {
                                        rhs[m] = rhs[m].add(&cl.mul(cm));
                                    }
                                }
                                if lhs != rhs {
                                    return Err(Error::BadPresentation(
                                        "multiplication tables are not associative".into(),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn generator_labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn generator_coords(&self) -> &[Vec<Scalar>] {
        &self.gen_coords
    }

    /// Dimension of one degree component; degrees past the bound are
    /// unknown, not zero.
    pub fn dim(&self, n: usize) -> Result<usize> {
        if n > self.bound {
            return Err(Error::InsufficientTruncation {
                bound: self.bound,
                reason: format!("degree {n} is past the algebra bound"),
            });
        }
        Ok(self.dims[n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Canonical monomial words of one degree, for presented algebras.
    pub fn monomials(&self, n: usize) -> Result<&[Vec<usize>]> {
        let all = self.monomials.as_ref().ok_or_else(|| {
            Error::BadInput("algebra carries no word data".into())
        })?;
        if n > self.bound {
            return Err(Error::InsufficientTruncation {
                bound: self.bound,
                reason: format!("degree {n} is past the algebra bound"),
            });
        }
        Ok(&all[n])
    }

    pub fn table(&self, a: usize, b: usize) -> Result<&Table> {
        if a + b > self.bound {
            return Err(Error::InsufficientTruncation {
                bound: self.bound,
                reason: format!("product degree {} is past the algebra bound", a + b),
            });
        }
        Ok(&self.tables[a][b])
    }

    /// Product of two homogeneous elements.
    pub fn product(&self, a: usize, x: &[Scalar], b: usize, y: &[Scalar]) -> Result<Vec<Scalar>> {
        let t = self.table(a, b)?;
        let mut out = vec![self.field.zero(); self.dims[a + b]];
        for (i, ci) in x.iter().enumerate() {
            if ci.is_zero() {
                continue;
            }
            for (j, cj) in y.iter().enumerate() {
                if cj.is_zero() {
                    continue;
                }
                let cij = ci.mul(cj);
                for (l, cl) in t[i][j].iter().enumerate() {
                    out[l] = out[l].add(&cij.mul(cl));
                }
            }
        }
        Ok(out)
    }

    /// True when every component is the product of the one below it with
    /// the degree-one component.
    pub fn is_degree_one_generated(&self) -> bool {
        for n in 1..=self.bound {
            let mut rows = Vec::new();
            for i in 0..self.dims[n - 1] {
                for j in 0..self.dims[1] {
                    rows.push(self.tables[n - 1][1][i][j].clone());
                }
            }
            let span = Subspace::from_vectors(self.field, self.dims[n], &rows)
                .expect("table rows");
            if span.dim() != self.dims[n] {
                return false;
            }
        }
        true
    }
}

/// The free graded line: one generator of degree one, no relations.
pub fn line(field: Field, bound: usize) -> GradedAlgebra {
    graded_presentation(field, &[("x", 1)], &[], bound).expect("free line presentation")
}

/// The commutative plane: two degree-one generators that commute.
pub fn plane(field: Field, bound: usize) -> GradedAlgebra {
    graded_presentation(
        field,
        &[("u", 1), ("t", 1)],
        &[GradedRelation::commutator(field, 0, 1)],
        bound,
    )
    .expect("commutative plane presentation")
}

/// Compare a presented algebra with another graded algebra through a
/// degree-one-level assignment of generator images: the map sends each
/// canonical monomial to the corresponding product of images, and is an
/// isomorphism at the bound when it is multiplicative and bijective in
/// every degree.
pub fn graded_iso_on_generators(
    src: &GradedAlgebra,
    tgt: &GradedAlgebra,
    images: &[Vec<Scalar>],
) -> Result<bool> {
    if images.len() != src.degrees.len() {
        return Err(Error::BadInput("one image per generator required".into()));
    }
    let bound = src.bound.min(tgt.bound);
    let field = src.field;
    if field != tgt.field {
        return Err(Error::FieldMismatch(field, tgt.field));
    }
    // Image of each canonical monomial.
    let mut mats: Vec<Matrix> = Vec::with_capacity(bound + 1);
    for n in 0..=bound {
        if src.dims[n] != tgt.dims[n] {
            return Ok(false);
        }
        let rows: Vec<Vec<Scalar>> = src
            .monomials(n)?
            .iter()
            .map(|w| {
                let mut cur = vec![field.one()];
                let mut deg = 0usize;
                for &g in w {
                    cur = tgt
                        .product(deg, &cur, src.degrees[g], &images[g])
                        .expect("image product stays under the bound");
                    deg += src.degrees[g];
                }
                cur
            })
            .collect();
        let m = if src.dims[n] == 0 {
            Matrix::zero(field, 0, tgt.dims[n])
        } else {
            Matrix::from_rows(field, rows)?
        };
        if rank(&m) != tgt.dims[n] {
            return Ok(false);
        }
        mats.push(m);
    }
    // Multiplicativity on basis pairs.
    for a in 0..=bound {
        for b in 0..=(bound - a) {
            for i in 0..src.dims[a] {
                for j in 0..src.dims[b] {
                    let lhs = {
                        let coords = &src.tables[a][b][i][j];
                        let mut v = vec![field.zero(); tgt.dims[a + b]];
                        for (l, c) in coords.iter().enumerate() {
                            if !c.is_zero() {
                                for (m, e) in mats[a + b].row_to_vec(l).iter().enumerate() {
                                    v[m] = v[m].add(&c.mul(e));
                                }
                            }
                        }
                        v
                    };
                    let rhs = tgt
                        .product(a, &mats[a].row_to_vec(i), b, &mats[b].row_to_vec(j))?;
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Graded modules
// ---------------------------------------------------------------------------

/// A graded right module known on an explicit degree window, with the
/// action of every homogeneous algebra basis element that stays inside the
/// window.  `vanishes_below` records whether the module is genuinely zero
/// below the window (true for everything built from presentations and
/// truncations) or merely unknown there.
#[derive(Clone, Debug)]
pub struct GradedModule {
    alg: Arc<GradedAlgebra>,
    lo: i64,
    dims: Vec<usize>,
    /// `act[k][d - 1][j]`: action of basis element `j` of degree `d`,
    /// mapping the component at `lo + k` to the one at `lo + k + d`.
    act: Vec<Vec<Vec<Matrix>>>,
    vanishes_below: bool,
}

impl GradedModule {
    pub fn new(
        alg: Arc<GradedAlgebra>,
        lo: i64,
        dims: Vec<usize>,
        act: Vec<Vec<Vec<Matrix>>>,
        vanishes_below: bool,
    ) -> Result<GradedModule> {
        let len = dims.len();
        if act.len() != len {
            return Err(Error::Shape("one action row per component".into()));
        }
        for (k, row) in act.iter().enumerate() {
            let expect = alg.bound.min(len - 1 - k);
            if row.len() != expect {
                return Err(Error::Shape(format!(
                    "component {k} should carry actions for degrees 1..={expect}"
                )));
            }
            for (di, mats) in row.iter().enumerate() {
                let d = di + 1;
                if mats.len() != alg.dims[d] {
                    return Err(Error::Shape(format!(
                        "degree-{d} action needs one matrix per basis element"
                    )));
                }
                for m in mats {
                    if m.rows() != dims[k] || m.cols() != dims[k + d] {
                        return Err(Error::Shape(format!(
                            "degree-{d} action at component {k} has the wrong shape"
                        )));
                    }
                }
            }
        }
        let out = GradedModule {
            alg,
            lo,
            dims,
            act,
            vanishes_below,
        };
        out.check_compatible()?;
        Ok(out)
    }

    /// The action must agree with the multiplication tables degreewise.
    fn check_compatible(&self) -> Result<()> {
        let len = self.dims.len();
        for k in 0..len {
            for a in 1..=self.alg.bound.min(len.saturating_sub(k + 1)) {
                for b in 1..=(self.alg.bound.min(len.saturating_sub(k + a + 1))) {
                    if a + b > self.alg.bound {
                        continue;
                    }
                    let t = &self.alg.tables[a][b];
                    for i in 0..self.alg.dims[a] {
                        for j in 0..self.alg.dims[b] {
                            let two = self.act[k][a - 1][i].mul(&self.act[k + a][b - 1][j]);
                            let mut one = Matrix::zero(self.field(), self.dims[k], self.dims[k + a + b]);
                            for (l, c) in t[i][j].iter().enumerate() {
                                if !c.is_zero() {
                                    one = one.add(&self.act[k][a + b - 1][l].scale(c));
                                }
                            }
                            if two != one {
                                return Err(Error::NotAModule(format!(
                                    "action disagrees with the tables at component {k}, degrees {a}+{b}"
                                )));
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Derive the full action from per-generator matrices; only available
    /// over presented algebras, whose basis elements carry monomial words.
    pub fn from_generator_actions(
        alg: Arc<GradedAlgebra>,
        lo: i64,
        dims: Vec<usize>,
        gen_act: &[Vec<Matrix>],
        vanishes_below: bool,
    ) -> Result<GradedModule> {
        let field = alg.field;
        let len = dims.len();
        if gen_act.len() != alg.degrees.len() {
            return Err(Error::Shape("one action list per generator".into()));
        }
        for (g, acts) in gen_act.iter().enumerate() {
            let d = alg.degrees[g];
            let expect = len.saturating_sub(d);
            if acts.len() != expect {
                return Err(Error::Shape(format!(
                    "generator {g} needs {expect} action matrices"
                )));
            }
        }
        let mut act: Vec<Vec<Vec<Matrix>>> = Vec::with_capacity(len);
        for k in 0..len {
            let reach = alg.bound.min(len - 1 - k);
            let mut row = Vec::with_capacity(reach);
            for d in 1..=reach {
                let mons = alg.monomials(d)?;
                let mats: Vec<Matrix> = mons
                    .iter()
                    .map(|w| {
                        let mut m = Matrix::identity(field, dims[k]);
                        let mut pos = k;
                        for &g in w {
                            m = m.mul(&gen_act[g][pos]);
                            pos += alg.degrees[g];
                        }
                        m
                    })
                    .collect();
                row.push(mats);
            }
            act.push(row);
        }
        GradedModule::new(alg, lo, dims, act, vanishes_below)
    }

    /// The algebra as a right module over itself, on the window `[0, N]`.
    pub fn regular(alg: &Arc<GradedAlgebra>) -> GradedModule {
        let field = alg.field;
        let len = alg.bound + 1;
        let dims = alg.dims.clone();
        let mut act = Vec::with_capacity(len);
        for k in 0..len {
            let reach = alg.bound.min(len - 1 - k);
            let mut row = Vec::with_capacity(reach);
            for d in 1..=reach {
                let t = &alg.tables[k][d];
                let mats: Vec<Matrix> = (0..alg.dims[d])
                    .map(|j| {
                        Matrix::from_fn(field, alg.dims[k], alg.dims[k + d], |i, l| {
                            t[i][j][l].clone()
                        })
                    })
                    .collect();
                row.push(mats);
            }
            act.push(row);
        }
        GradedModule {
            alg: alg.clone(),
            lo: 0,
            dims,
            act,
            vanishes_below: true,
        }
    }

    /// The zero module on a window.
    pub fn zero(alg: &Arc<GradedAlgebra>, lo: i64, hi: i64) -> GradedModule {
        let len = (hi - lo + 1).max(0) as usize;
        let field = alg.field;
        let mut act = Vec::with_capacity(len);
        for k in 0..len {
            let reach = alg.bound.min(len - 1 - k);
            act.push(
                (1..=reach)
                    .map(|d| vec![Matrix::zero(field, 0, 0); alg.dims[d]])
                    .collect(),
            );
        }
        GradedModule {
            alg: alg.clone(),
            lo,
            dims: vec![0; len],
            act,
            vanishes_below: true,
        }
    }

    pub fn algebra(&self) -> &Arc<GradedAlgebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.lo + self.dims.len() as i64 - 1
    }

    pub fn window_len(&self) -> usize {
        self.dims.len()
    }

    pub fn vanishes_below(&self) -> bool {
        self.vanishes_below
    }

    fn offset(&self, n: i64) -> Result<usize> {
        if n < self.lo || n > self.hi() {
            return Err(Error::InsufficientTruncation {
                bound: self.alg.bound,
                reason: format!(
                    "degree {n} is outside the window [{}, {}]",
                    self.lo,
                    self.hi()
                ),
            });
        }
        Ok((n - self.lo) as usize)
    }

    /// Dimension of one component.
    pub fn dim_at(&self, n: i64) -> Result<usize> {
        Ok(self.dims[self.offset(n)?])
    }

    /// The dimension sequence over a degree range.
    pub fn hilbert(&self, lo: i64, hi: i64) -> Result<Vec<usize>> {
        (lo..=hi).map(|n| self.dim_at(n)).collect()
    }

    /// The matrix by which a homogeneous element acts from one component.
    pub fn act_of(&self, n: i64, d: usize, x: &[Scalar]) -> Result<Matrix> {
        let k = self.offset(n)?;
        self.offset(n + d as i64)?;
        if d == 0 {
            let m = Matrix::identity(self.field(), self.dims[k]);
            return Ok(m.scale(&x[0]));
        }
        let mats = &self.act[k][d - 1];
        let mut out = Matrix::zero(self.field(), self.dims[k], self.dims[k + d]);
        for (j, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&mats[j].scale(c));
            }
        }
        Ok(out)
    }

    /// Shift: the component of `M(d)` in degree `n` is the component of
    /// `M` in degree `n + d`.
    pub fn shift(&self, d: i64) -> GradedModule {
        let mut out = self.clone();
        out.lo -= d;
        out
    }

    /// Restrict to a sub-window; the lower cut is a truncation, so the
    /// result vanishes below it by construction.
    pub fn restrict_window(&self, lo: i64, hi: i64) -> Result<GradedModule> {
        if lo < self.lo || hi > self.hi() || lo > hi + 1 {
            return Err(Error::InsufficientTruncation {
                bound: self.alg.bound,
                reason: format!(
                    "window [{lo}, {hi}] is not inside [{}, {}]",
                    self.lo,
                    self.hi()
                ),
            });
        }
        let off = (lo - self.lo) as usize;
        let len = (hi - lo + 1).max(0) as usize;
        let dims: Vec<usize> = self.dims[off..off + len].to_vec();
        let act: Vec<Vec<Vec<Matrix>>> = (0..len)
            .map(|k| {
                let reach = self.alg.bound.min(len - 1 - k);
                (1..=reach)
                    .map(|d| self.act[off + k][d - 1].clone())
                    .collect()
            })
            .collect();
        Ok(GradedModule {
            alg: self.alg.clone(),
            lo,
            dims,
            act,
            vanishes_below: true,
        })
    }

    /// Truncation `M_{>= n}`.
    pub fn truncate(&self, n: i64) -> Result<GradedModule> {
        if n <= self.lo {
            return Ok(self.clone());
        }
        self.restrict_window(n, self.hi())
    }

    /// The graded submodule spanned by per-degree subspaces, which must be
    /// carried into each other by the action.
    pub fn submodule(&self, parts: &[Subspace]) -> Result<GradedModule> {
        let len = self.dims.len();
        if parts.len() != len {
            return Err(Error::Shape("one subspace per component".into()));
        }
        for (k, p) in parts.iter().enumerate() {
            if p.ambient() != self.dims[k] {
                return Err(Error::Shape("subspace ambient mismatch".into()));
            }
        }
        let field = self.field();
        for k in 0..len {
            let reach = self.alg.bound.min(len - 1 - k);
            for d in 1..=reach {
                for m in &self.act[k][d - 1] {
                    let image = parts[k].apply(m);
                    for v in image.basis_vectors() {
                        if !parts[k + d].contains_vec(&v) {
                            return Err(Error::NotStable(format!(
                                "component {k} leaks out of the subspace under a degree-{d} action"
                            )));
                        }
                    }
                }
            }
        }
        let dims: Vec<usize> = parts.iter().map(Subspace::dim).collect();
        let act: Vec<Vec<Vec<Matrix>>> = (0..len)
            .map(|k| {
                let reach = self.alg.bound.min(len - 1 - k);
                (1..=reach)
                    .map(|d| {
                        self.act[k][d - 1]
                            .iter()
                            .map(|m| {
                                Matrix::from_fn(field, dims[k], dims[k + d], |i, j| {
                                    let img = m.apply_row(&parts[k].basis_vectors()[i]);
                                    parts[k + d].coords(&img)[j].clone()
                                })
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedModule::new(self.alg.clone(), self.lo, dims, act, self.vanishes_below)
    }

    /// The graded quotient by per-degree subspaces stable under the action.
    pub fn quotient(&self, parts: &[Subspace]) -> Result<GradedModule> {
        let len = self.dims.len();
        if parts.len() != len {
            return Err(Error::Shape("one subspace per component".into()));
        }
        let quots: Vec<Matrix> = parts.iter().map(Subspace::quotient_matrix).collect();
        let sects: Vec<Matrix> = parts.iter().map(Subspace::section_matrix).collect();
        let dims: Vec<usize> = (0..len).map(|k| self.dims[k] - parts[k].dim()).collect();
        let act: Vec<Vec<Vec<Matrix>>> = (0..len)
            .map(|k| {
                let reach = self.alg.bound.min(len - 1 - k);
                (1..=reach)
                    .map(|d| {
                        self.act[k][d - 1]
                            .iter()
                            .map(|m| sects[k].mul(m).mul(&quots[k + d]))
                            .collect()
                    })
                    .collect()
            })
            .collect();
        GradedModule::new(self.alg.clone(), self.lo, dims, act, self.vanishes_below)
    }
}

// ---------------------------------------------------------------------------
// Graded maps and bounded tails comparison
// ---------------------------------------------------------------------------

/// A degree-zero map between graded modules on the same window.
#[derive(Clone, Debug)]
pub struct GradedMap {
    src: GradedModule,
    tgt: GradedModule,
    mats: Vec<Matrix>,
}

impl GradedMap {
    pub fn new(src: GradedModule, tgt: GradedModule, mats: Vec<Matrix>) -> Result<GradedMap> {
        if src.lo != tgt.lo || src.dims.len() != tgt.dims.len() {
            return Err(Error::Shape("graded maps need a common window".into()));
        }
        let len = src.dims.len();
        if mats.len() != len {
            return Err(Error::Shape("one matrix per component".into()));
        }
        for k in 0..len {
            if mats[k].rows() != src.dims[k] || mats[k].cols() != tgt.dims[k] {
                return Err(Error::Shape(format!(
                    "component {k} matrix has the wrong shape"
                )));
            }
        }
        for k in 0..len {
            let reach = src.alg.bound.min(len - 1 - k);
            for d in 1..=reach {
                for j in 0..src.alg.dims[d] {
                    let lhs = src.act[k][d - 1][j].mul(&mats[k + d]);
                    let rhs = mats[k].mul(&tgt.act[k][d - 1][j]);
                    if lhs != rhs {
                        return Err(Error::NotAModuleMap(k));
                    }
                }
            }
        }
        Ok(GradedMap { src, tgt, mats })
    }

    pub fn src(&self) -> &GradedModule {
        &self.src
    }

    pub fn tgt(&self) -> &GradedModule {
        &self.tgt
    }

    pub fn matrices(&self) -> &[Matrix] {
        &self.mats
    }

    pub fn kernel_parts(&self) -> Vec<Subspace> {
        self.mats
            .iter()
            .map(|m| Subspace::from_matrix(&kernel_left(m)))
            .collect()
    }

    pub fn image_parts(&self) -> Vec<Subspace> {
        self.mats.iter().map(Subspace::from_matrix).collect()
    }

    pub fn is_iso(&self) -> bool {
        self.mats
            .iter()
            .enumerate()
            .all(|(k, m)| self.src.dims[k] == self.tgt.dims[k] && rank(m) == self.src.dims[k])
    }
}

/// A basis of the space of degree-zero maps between two modules on the
/// same window.
pub fn graded_hom_basis(m: &GradedModule, n: &GradedModule) -> Result<Vec<GradedMap>> {
    if m.lo != n.lo || m.dims.len() != n.dims.len() {
        return Err(Error::Shape("graded maps need a common window".into()));
    }
    let field = m.field();
    let len = m.dims.len();
    let offs: Vec<usize> = {
        let mut v = Vec::with_capacity(len + 1);
        let mut acc = 0;
        for k in 0..len {
            v.push(acc);
            acc += m.dims[k] * n.dims[k];
        }
        v.push(acc);
        v
    };
    let unknowns = offs[len];
    if unknowns == 0 {
        return Ok(Vec::new());
    }
    // Columns of the constraint matrix: one per scalar intertwining
    // equation.  Solutions are the left kernel.
    let mut cols: Vec<Vec<Scalar>> = Vec::new();
    for k in 0..len {
        let reach = m.alg.bound.min(len - 1 - k);
        for d in 1..=reach {
            for j in 0..m.alg.dims[d] {
                let a = &m.act[k][d - 1][j];
                let b = &n.act[k][d - 1][j];
                for r in 0..m.dims[k] {
                    for c in 0..n.dims[k + d] {
                        let mut col = vec![field.zero(); unknowns];
                        for s in 0..m.dims[k + d] {
                            let idx = offs[k + d] + s * n.dims[k + d] + c;
                            col[idx] = col[idx].add(&a[(r, s)]);
                        }
                        for t in 0..n.dims[k] {
                            let idx = offs[k] + r * n.dims[k] + t;
                            col[idx] = col[idx].sub(&b[(t, c)]);
                        }
                        if col.iter().any(|x| !x.is_zero()) {
                            cols.push(col);
                        }
                    }
                }
            }
        }
    }
    let sol_rows = if cols.is_empty() {
        Matrix::identity(field, unknowns)
    } else {
        let cmat = Matrix::from_fn(field, unknowns, cols.len(), |i, e| cols[e][i].clone());
        kernel_left(&cmat)
    };
    let mut out = Vec::with_capacity(sol_rows.rows());
    for r in 0..sol_rows.rows() {
        let flat = sol_rows.row_to_vec(r);
        let mats: Vec<Matrix> = (0..len)
            .map(|k| {
                Matrix::from_fn(field, m.dims[k], n.dims[k], |i, j| {
                    flat[offs[k] + i * n.dims[k] + j].clone()
                })
            })
            .collect();
        out.push(GradedMap {
            src: m.clone(),
            tgt: n.clone(),
            mats,
        });
    }
    Ok(out)
}

/// Search a hom space for an invertible element, exhaustively over a prime
/// field when the budget allows and by a deterministic sweep otherwise.
fn search_graded_iso(m: &GradedModule, n: &GradedModule, budget: usize) -> Result<Option<GradedMap>> {
    if m.dims != n.dims {
        return Ok(None);
    }
    if m.dims.iter().all(|&d| d == 0) {
        let mats = m.dims.iter().map(|_| Matrix::zero(m.field(), 0, 0)).collect();
        return Ok(Some(GradedMap {
            src: m.clone(),
            tgt: n.clone(),
            mats,
        }));
    }
    let basis = graded_hom_basis(m, n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let field = m.field();
    let len = m.dims.len();
    let h = basis.len();
    let combine = |coeffs: &[Scalar]| -> Vec<Matrix> {
        (0..len)
            .map(|k| {
                let mut f = Matrix::zero(field, m.dims[k], n.dims[k]);
                for (c, b) in coeffs.iter().zip(&basis) {
                    if !c.is_zero() {
                        f = f.add(&b.mats[k].scale(c));
                    }
                }
                f
            })
            .collect()
    };
    let invertible =
        |mats: &[Matrix]| -> bool { mats.iter().enumerate().all(|(k, f)| rank(f) == m.dims[k]) };
    if let Field::Fp(p) = field {
        if let Some(total) = (p as usize).checked_pow(h as u32) {
            if total <= budget {
                let mut coeffs = vec![0u64; h];
                loop {
                    let cs: Vec<Scalar> =
                        coeffs.iter().map(|&v| field.from_i64(v as i64)).collect();
                    let mats = combine(&cs);
                    if invertible(&mats) {
                        return Ok(Some(GradedMap {
                            src: m.clone(),
                            tgt: n.clone(),
                            mats,
                        }));
                    }
                    let mut k = 0;
                    loop {
                        if k == h {
                            return Ok(None);
                        }
                        coeffs[k] += 1;
                        if coeffs[k] < p {
                            break;
                        }
                        coeffs[k] = 0;
                        k += 1;
                    }
                }
            }
        }
    }
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ ((len as u64) << 17) ^ h as u64;
    for _ in 0..128 {
        let cs: Vec<Scalar> = (0..h)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                field.from_i64(((state >> 30) % 7) as i64 - 3)
            })
            .collect();
        let mats = combine(&cs);
        if invertible(&mats) {
            return Ok(Some(GradedMap {
                src: m.clone(),
                tgt: n.clone(),
                mats,
            }));
        }
    }
    Ok(None)
}

/// Bounded tails comparison: find the smallest `start <= n0` at which the
/// truncations `M_{>= start}` and `N_{>= start}` are isomorphic on the
/// common window, or `None` when no tested start works.  Running past the
/// window fails loudly rather than answering.
pub fn tails_iso_bounded(
    m: &GradedModule,
    n: &GradedModule,
    n0: i64,
    budget: usize,
) -> Result<Option<i64>> {
    let lo = m.lo.max(n.lo);
    let hi = m.hi().min(n.hi());
    if lo > hi {
        return Err(Error::InsufficientTruncation {
            bound: m.alg.bound,
            reason: "the windows do not overlap".into(),
        });
    }
    for start in lo..=n0 {
        if start > hi {
            return Err(Error::InsufficientTruncation {
                bound: m.alg.bound,
                reason: format!("the common window ends at {hi}, before the requested start {start}"),
            });
        }
        let a = m.restrict_window(start, hi)?;
        let b = n.restrict_window(start, hi)?;
        if a.dims != b.dims {
            continue;
        }
        if search_graded_iso(&a, &b, budget)?.is_some() {
            return Ok(Some(start));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Central divisors
// ---------------------------------------------------------------------------

/// A certificate that a homogeneous element is central and regular through
/// the bound.
#[derive(Clone, Debug)]
pub struct DivisorData {
    pub degree: usize,
    pub element: Vec<Scalar>,
    /// Centrality was checked against every basis element of degree at
    /// most this.
    pub central_to: usize,
    /// Left and right multiplication are injective on degrees at most
    /// this.
    pub regular_to: usize,
}

/// Certify a central regular element.
pub fn divisor_data(alg: &GradedAlgebra, degree: usize, z: &[Scalar]) -> Result<DivisorData> {
    if degree == 0 || degree > alg.bound {
        return Err(Error::BadInput(
            "divisor element must have positive degree within the bound".into(),
        ));
    }
    if z.len() != alg.dims[degree] || z.iter().all(Scalar::is_zero) {
        return Err(Error::BadElement("nonzero element of the stated degree"));
    }
    let field = alg.field;
    let top = alg.bound - degree;
    for e in 1..=top {
        for j in 0..alg.dims[e] {
            let mut b = vec![field.zero(); alg.dims[e]];
            b[j] = field.one();
            if alg.product(degree, z, e, &b)? != alg.product(e, &b, degree, z)? {
                return Err(Error::BadElement("central element"));
            }
        }
    }
    for n in 0..=top {
        let left = Matrix::from_fn(field, alg.dims[n], alg.dims[n + degree], |i, l| {
            let mut b = vec![field.zero(); alg.dims[n]];
            b[i] = field.one();
            alg.product(degree, z, n, &b).expect("within bound")[l].clone()
        });
        let right = Matrix::from_fn(field, alg.dims[n], alg.dims[n + degree], |i, l| {
            let mut b = vec![field.zero(); alg.dims[n]];
            b[i] = field.one();
            alg.product(n, &b, degree, z).expect("within bound")[l].clone()
        });
        if rank(&left) != alg.dims[n] || rank(&right) != alg.dims[n] {
            return Err(Error::BadElement("regular element"));
        }
    }
    Ok(DivisorData {
        degree,
        element: z.to_vec(),
        central_to: top,
        regular_to: top,
    })
}

/// The four-term divisor sequence of one module: kernel, the shifted
/// module, the module, and the cokernel of degreewise multiplication by a
/// certified central regular element.
#[derive(Clone, Debug)]
pub struct DivisorReport {
    pub data: DivisorData,
    /// Multiplication by the element, from the shifted module into the
    /// module, on the report window.
    pub map: GradedMap,
    /// What the divisor sends to zero, inside the shifted module.
    pub kernel: GradedModule,
    /// The fiber: the module modulo the image of the divisor.
    pub cokernel: GradedModule,
    pub kernel_hilbert: Vec<usize>,
    pub cokernel_hilbert: Vec<usize>,
    /// Asserted: the element annihilates the cokernel, so the cokernel is a
    /// module over the quotient by the element.
    pub cokernel_annihilated: bool,
    /// For torsion-free modules: the start at which the image submodule is
    /// certified isomorphic to the shifted module.
    pub shift_witness: Option<i64>,
    pub window: (i64, i64),
}

/// Run the divisor sequence for a module that vanishes below its window.
pub fn central_divisor(
    m: &GradedModule,
    degree: usize,
    z: &[Scalar],
    budget: usize,
) -> Result<DivisorReport> {
    let data = divisor_data(&m.alg, degree, z)?;
    if !m.vanishes_below {
        return Err(Error::BadInput(
            "the divisor sequence needs a module known to vanish below its window".into(),
        ));
    }
    let field = m.field();
    let len = m.dims.len();
    let d = degree;

    // The shifted module, padded with explicit zeros where the original
    // vanishes.
    let src_dims: Vec<usize> = (0..len)
        .map(|k| if k < d { 0 } else { m.dims[k - d] })
        .collect();
    let src_act: Vec<Vec<Vec<Matrix>>> = (0..len)
        .map(|k| {
            let reach = m.alg.bound.min(len - 1 - k);
            (1..=reach)
                .map(|dd| {
                    (0..m.alg.dims[dd])
                        .map(|j| {
                            if k >= d && k + dd >= d {
                                m.act[k - d][dd - 1][j].clone()
                            } else {
                                Matrix::zero(field, src_dims[k], src_dims[k + dd])
                            }
                        })
                        .collect()
                })
                .collect()
        })
        .collect();
    let src = GradedModule::new(m.alg.clone(), m.lo, src_dims, src_act, true)?;

    let mats: Vec<Matrix> = (0..len)
        .map(|k| {
            if k < d {
                Matrix::zero(field, 0, m.dims[k])
            } else {
                m.act_of(m.lo + (k - d) as i64, d, z)
                    .expect("window reaches the divisor target")
            }
        })
        .collect();
    let map = GradedMap::new(src.clone(), m.clone(), mats)?;

    let kernel_parts = map.kernel_parts();
    let kernel = src.submodule(&kernel_parts)?;
    let image_parts = map.image_parts();
    let cokernel = m.quotient(&image_parts)?;

    let mut cokernel_annihilated = true;
    for k in 0..len.saturating_sub(d) {
        let n = cokernel.lo + k as i64;
        if !cokernel.act_of(n, d, z)?.is_zero() {
            cokernel_annihilated = false;
        }
    }
    assert!(
        cokernel_annihilated,
        "the divisor fails to annihilate its own fiber"
    );

    let kernel_hilbert = kernel.dims.clone();
    let cokernel_hilbert = cokernel.dims.clone();
    let shift_witness = if kernel_hilbert.iter().all(|&x| x == 0) {
        let image = m.submodule(&image_parts)?;
        tails_iso_bounded(&src, &image, src.lo, budget)?
    } else {
        None
    };
    let window = (m.lo, m.hi());
    Ok(DivisorReport {
        data,
        map,
        kernel,
        cokernel,
        kernel_hilbert,
        cokernel_hilbert,
        cokernel_annihilated,
        shift_witness,
        window,
    })
}

// ---------------------------------------------------------------------------
// Rees extensions and point modules
// ---------------------------------------------------------------------------

/// A filtered algebra's graded extension: the degree-`n` component is the
/// span of at-most-`n`-fold products of the chosen generators, with one
/// extra central variable recording the degree.
#[derive(Clone, Debug)]
pub struct ReesAlgebra {
    pub graded: Arc<GradedAlgebra>,
    pub base: Arc<Algebra>,
    /// The filtration stages, as subspaces of the base algebra.
    pub filtration: Vec<Subspace>,
    /// First degree at which the filtration fills the base algebra.
    pub exhausted_at: usize,
    /// Coordinates of the degree-recording variable in degree one.
    pub t: Vec<Scalar>,
    pub t_certificate: DivisorData,
}

pub fn rees(base: &Arc<Algebra>, gens: &[Vec<Scalar>], bound: usize) -> Result<ReesAlgebra> {
    let field = base.field();
    let n = base.dim();
    for g in gens {
        if g.len() != n {
            return Err(Error::Shape("generator has the wrong length".into()));
        }
    }
    let mut filtration = vec![Subspace::from_vectors(field, n, &[base.unit().to_vec()])?];
    for _ in 0..bound {
        let prev = filtration.last().unwrap();
        let mut next = prev.clone();
        for g in gens {
            next = next.sum(&prev.apply(&base.rmm(g)));
        }
        filtration.push(next);
    }
    let exhausted_at = match filtration.iter().position(|s| s.dim() == n) {
        Some(k) => k,
        None => {
            return Err(Error::InsufficientTruncation {
                bound,
                reason: "the filtration does not exhaust the algebra within the bound".into(),
            })
        }
    };
    let dims: Vec<usize> = filtration.iter().map(Subspace::dim).collect();
    let mut tables: Vec<Vec<Table>> = Vec::with_capacity(bound + 1);
    for a in 0..=bound {
        let mut row = Vec::with_capacity(bound - a + 1);
        let basis_a = filtration[a].basis_vectors();
        for b in 0..=(bound - a) {
            let basis_b = filtration[b].basis_vectors();
            let mut t: Table = vec![vec![Vec::new(); dims[b]]; dims[a]];
            for (i, ti) in t.iter_mut().enumerate() {
                for (j, tij) in ti.iter_mut().enumerate() {
                    let prod = base.mul_vec(&basis_a[i], &basis_b[j]);
                    debug_assert!(filtration[a + b].contains_vec(&prod));
                    *tij = filtration[a + b].coords(&prod);
                }
            }
            row.push(t);
        }
        tables.push(row);
    }
    let graded = GradedAlgebra::from_components(field, dims, tables)?;
    let t = filtration[1].coords(base.unit());
    let t_certificate = divisor_data(&graded, 1, &t)?;
    Ok(ReesAlgebra {
        graded: Arc::new(graded),
        base: base.clone(),
        filtration,
        exhausted_at,
        t,
        t_certificate,
    })
}

/// The constant-component graded module of a simple module: each degree is
/// a copy of the module, with degree `d` acting through the `d`-th
/// filtration stage.  Asserts the constant dimension sequence and, for
/// every window degree the bound allows, that each nonzero homogeneous
/// element generates a tail of full component dimension.
pub fn point_tails(ra: &ReesAlgebra, rep: &Rep, v: &Module) -> Result<GradedModule> {
    if v.algebra().dim() != ra.base.dim() || v.field() != ra.base.field() {
        return Err(Error::Shape("module is not over the filtered algebra".into()));
    }
    let factors: usize = rep.composition_factors(v)?.iter().sum();
    if factors != 1 {
        return Err(Error::BadInput("point modules come from simple modules".into()));
    }
    let bound = ra.graded.bound;
    let len = bound + 1;
    let dims = vec![v.dim(); len];
    let act: Vec<Vec<Vec<Matrix>>> = (0..len)
        .map(|k| {
            let reach = bound.min(len - 1 - k);
            (1..=reach)
                .map(|d| {
                    ra.filtration[d]
                        .basis_vectors()
                        .iter()
                        .map(|r| v.act_of(r))
                        .collect()
                })
                .collect()
        })
        .collect();
    let tails = GradedModule::new(ra.graded.clone(), 0, dims, act, true)?;

    // Constant dimension sequence (the noetherian-ness witness).
    assert!(
        tails.dims.iter().all(|&x| x == v.dim()),
        "point module fails to have constant components"
    );
    // Bounded simplicity: every nonzero homogeneous element generates a
    // full-dimension tail once the filtration has filled up.
    let field = v.field();
    let probes: Vec<Vec<Scalar>> = match field {
        Field::Fp(p) => {
            let mut out = Vec::new();
            let total = (p as usize).pow(v.dim() as u32);
            for code in 1..total {
                let mut c = code;
                let mut vvec = Vec::with_capacity(v.dim());
                for _ in 0..v.dim() {
                    vvec.push(field.from_i64((c % p as usize) as i64));
                    c /= p as usize;
                }
                out.push(vvec);
            }
            out
        }
        Field::Q => {
            let mut out: Vec<Vec<Scalar>> = (0..v.dim())
                .map(|i| {
                    let mut b = vec![field.zero(); v.dim()];
                    b[i] = field.one();
                    b
                })
                .collect();
            out.push(vec![field.one(); v.dim()]);
            out
        }
    };
    for k in 0..=bound.saturating_sub(ra.exhausted_at) {
        let e = ra.exhausted_at;
        for w in &probes {
            let rows: Vec<Vec<Scalar>> = ra.filtration[e]
                .basis_vectors()
                .iter()
                .map(|r| v.act_of(r).apply_row(w))
                .collect();
            let span = Subspace::from_vectors(field, v.dim(), &rows)?;
            assert_eq!(
                span.dim(),
                v.dim(),
                "a homogeneous element of component {k} generates a thin tail"
            );
        }
    }
    Ok(tails)
}

// ---------------------------------------------------------------------------
// Endomorphism blocks of degree windows
// ---------------------------------------------------------------------------

/// The endomorphism algebra of the canonical projective family of the
/// single-generator graded line restricted to a window of degrees: one
/// summand per degree in `d`, each a chain of one-dimensional components
/// running from its start to the end of the window.  For consecutive
/// degrees the result is asserted to carry upper-triangular structure
/// constants.
pub fn window_block(field: Field, d: &[i64]) -> Result<Algebra> {
    if d.is_empty() {
        return Err(Error::BadInput("empty degree window".into()));
    }
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d.len() {
        return Err(Error::BadInput("repeated degrees in the window".into()));
    }
    let d0 = sorted[0];
    let d1 = *sorted.last().unwrap();
    let span = (d1 - d0) as usize;
    let gl = Arc::new(line(field, span.max(1)));
    let len = span + 1;
    let consecutive = sorted.len() == len;

    // The chain modules: one per chosen degree, supported on the chosen
    // degrees from its start onward.
    let active = |n: i64| sorted.binary_search(&n).is_ok();
    let summands: Vec<GradedModule> = sorted
        .iter()
        .map(|&start| {
            let dims: Vec<usize> = (0..len)
                .map(|k| {
                    let deg = d0 + k as i64;
                    usize::from(deg >= start && active(deg))
                })
                .collect();
            let xact: Vec<Matrix> = (0..len - 1)
                .map(|k| {
                    Matrix::from_fn(field, dims[k], dims[k + 1], |_, _| field.one())
                })
                .collect();
            GradedModule::from_generator_actions(gl.clone(), d0, dims, &[xact], true)
        })
        .collect::<Result<Vec<_>>>()?;

    // Basis of the endomorphism algebra: per-pair hom bases, ordered by
    // (target, source).
    let mut basis: Vec<(usize, usize, GradedMap)> = Vec::new();
    let mut pair_offsets: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
    for r in 0..sorted.len() {
        for c in 0..sorted.len() {
            let homs = graded_hom_basis(&summands[c], &summands[r])?;
            let start = basis.len();
            for h in homs {
                basis.push((r, c, h));
            }
            pair_offsets.insert((r, c), (start, basis.len() - start));
        }
    }
    let dim = basis.len();
    if consecutive {
        let expect = sorted.len() * (sorted.len() + 1) / 2;
        assert_eq!(dim, expect, "window maps miscounted");
        for r in 0..sorted.len() {
            for c in 0..sorted.len() {
                let (_, cnt) = pair_offsets[&(r, c)];
                assert_eq!(cnt, usize::from(r <= c), "unexpected hom dimension");
            }
        }
    }

    // Normalize each basis map so its first nonzero component entry is one.
    let basis: Vec<(usize, usize, GradedMap)> = basis
        .into_iter()
        .map(|(r, c, h)| {
            let lead = h
                .mats
                .iter()
                .find_map(|m| {
                    (0..m.rows())
                        .flat_map(|i| (0..m.cols()).map(move |j| (i, j)))
                        .find(|&(i, j)| !m[(i, j)].is_zero())
                        .map(|(i, j)| m[(i, j)].clone())
                })
                .expect("hom basis elements are nonzero");
            let inv = field.one().div(&lead);
            let mats = h.mats.iter().map(|m| m.scale(&inv)).collect();
            (
                r,
                c,
                GradedMap {
                    src: h.src,
                    tgt: h.tgt,
                    mats,
                },
            )
        })
        .collect();

    // Composition table: the product applies the right factor first.
    let vec_of = |mp: &GradedMap| -> Vec<Scalar> {
        mp.mats.iter().flat_map(|m| m.vectorize()).collect()
    };
    let mut table: Vec<Vec<Vec<Scalar>>> = vec![vec![Vec::new(); dim]; dim];
    for (i, (r1, c1, f)) in basis.iter().enumerate() {
        for (j, (r2, c2, g)) in basis.iter().enumerate() {
            let mut coords = vec![field.zero(); dim];
            if *c1 == *r2 {
                // The product applies the right factor first: rows flow
                // through g, then f, landing in the maps from g's source
                // to f's target.
                let comp: Vec<Matrix> = (0..len)
                    .map(|k| g.mats[k].mul(&f.mats[k]))
                    .collect();
                let target = vec_of(&GradedMap {
                    src: g.src.clone(),
                    tgt: f.tgt.clone(),
                    mats: comp,
                });
                let (start, cnt) = pair_offsets[&(*r1, *c2)];
                if cnt > 0 {
                    let rows: Vec<Vec<Scalar>> = (start..start + cnt)
                        .map(|b| vec_of(&basis[b].2))
                        .collect();
                    let bm = Matrix::from_rows(field, rows)?;
                    let sol = solve_left(&bm, &target)?
                        .particular
                        .expect("composites stay inside the hom space");
                    for (o, cval) in sol.into_iter().enumerate() {
                        coords[start + o] = cval;
                    }
                } else {
                    assert!(
                        target.iter().all(Scalar::is_zero),
                        "composite escapes an empty hom space"
                    );
                }
            }
            table[i][j] = coords;
        }
    }
    let mut unit = vec![field.zero(); dim];
    for (i, (r, c, h)) in basis.iter().enumerate() {
        if r == c && h.mats.iter().all(|m| m.rows() == m.cols()) {
            // The identity of each summand is the normalized diagonal map.
            unit[i] = field.one();
        }
    }
    let labels: Vec<String> = basis
        .iter()
        .map(|(r, c, _)| format!("h{r}{c}"))
        .collect();
    let out = Algebra::new(field, labels, table.clone(), unit)?;

    if consecutive {
        // Matrix-unit pattern: h(r,c) * h(r',c') = [c == r'] h(r,c').
        for (i, (r1, c1, _)) in basis.iter().enumerate() {
            for (j, (r2, c2, _)) in basis.iter().enumerate() {
                let expect: Vec<Scalar> = basis
                    .iter()
                    .map(|(r, c, _)| {
                        if c1 == r2 && *r == *r1 && *c == *c2 {
                            field.one()
                        } else {
                            field.zero()
                        }
                    })
                    .collect();
                assert_eq!(
                    table[i][j], expect,
                    "composition deviates from the triangular pattern"
                );
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Degree-zero localization
// ---------------------------------------------------------------------------

/// Presentation data for a degree-zero localization that does not
/// stabilize within the bound: variables (the degree-one complement of the
/// inverted element), degreewise relation counts among words, and how far
/// the words fall short of spanning each stage.
#[derive(Clone, Debug)]
pub struct DegreeZeroPresentation {
    pub vars: Vec<String>,
    pub var_elements: Vec<Vec<Scalar>>,
    pub stage_dims: Vec<usize>,
    /// Kernel dimension of the length-`l` word map, per length.
    pub relation_dims: Vec<usize>,
    /// How far words of length at most `n` fall short of stage `n`.
    pub span_defects: Vec<usize>,
    pub commutes: bool,
    pub bound: usize,
}

/// The degree-zero part of inverting a central regular degree-one element:
/// either the stages stabilize inside the bound and the honest
/// finite-dimensional coordinate ring is returned, or the filtered
/// presentation by the complementary degree-one variables is.
#[derive(Clone, Debug)]
pub enum DegreeZeroRing {
    Stabilized { algebra: Algebra, level: usize },
    Presented(DegreeZeroPresentation),
}

pub fn degree_zero_localization(
    alg: &GradedAlgebra,
    degree: usize,
    z: &[Scalar],
) -> Result<DegreeZeroRing> {
    divisor_data(alg, degree, z)?;
    if degree != 1 {
        return Err(Error::BadInput(
            "the localization presentation needs a degree-one element".into(),
        ));
    }
    if !alg.is_degree_one_generated() {
        return Err(Error::BadInput(
            "the algebra is not generated in degree one".into(),
        ));
    }
    let field = alg.field;
    let bound = alg.bound;

    // Multiplication by the element, one step per degree.
    let step = |n: usize| -> Matrix {
        Matrix::from_fn(field, alg.dims[n], alg.dims[n + 1], |i, l| {
            let mut b = vec![field.zero(); alg.dims[n]];
            b[i] = field.one();
            alg.product(n, &b, 1, z).expect("within bound")[l].clone()
        })
    };

    // Stabilization: the dimension sequence is nondecreasing (the element
    // is regular), so it stabilizes exactly when it reaches its final
    // value with room to witness one stable step.
    let s = (0..=bound).find(|&n| alg.dims[n] == alg.dims[bound]).unwrap();
    if s < bound {
        if 2 * s > bound {
            return Err(Error::InsufficientTruncation {
                bound,
                reason: format!("stages stabilize at {s}, but degree {} is out of reach", 2 * s),
            });
        }
        // Pull the product on stage 2s back along multiplication by the
        // element, applied s times.
        let mut phi = Matrix::identity(field, alg.dims[s]);
        for n in s..(2 * s) {
            phi = phi.mul(&step(n));
        }
        let m = alg.dims[s];
        let mut table = vec![vec![Vec::new(); m]; m];
        for i in 0..m {
            for j in 0..m {
                let mut bi = vec![field.zero(); m];
                bi[i] = field.one();
                let mut bj = vec![field.zero(); m];
                bj[j] = field.one();
                let prod = alg.product(s, &bi, s, &bj)?;
                table[i][j] = solve_left(&phi, &prod)?
                    .particular
                    .expect("stabilized stages are isomorphic");
            }
        }
        // The unit is the s-th power of the element.
        let mut unit = vec![field.one()];
        for n in 0..s {
            unit = alg.product(n, &unit, 1, z)?;
        }
        let labels: Vec<String> = (0..m).map(|i| format!("f{i}")).collect();
        let algebra = Algebra::new(field, labels, table, unit)?;
        return Ok(DegreeZeroRing::Stabilized { algebra, level: s });
    }

    // No stabilization in sight: present by the degree-one complement.
    let spanz = Subspace::from_vectors(field, alg.dims[1], &[z.to_vec()])?;
    let var_cols = spanz.free_columns();
    let vars: Vec<String> = var_cols.iter().map(|c| format!("w{c}")).collect();
    let var_elements: Vec<Vec<Scalar>> = var_cols
        .iter()
        .map(|&c| {
            let mut v = vec![field.zero(); alg.dims[1]];
            v[c] = field.one();
            v
        })
        .collect();
    let m = var_elements.len();
    let mut relation_dims = vec![0usize; bound + 1];
    let mut span_defects = vec![0usize; bound + 1];
    // Images of variable words, by exact length.
    let mut by_length: Vec<Vec<Vec<Scalar>>> = vec![vec![vec![field.one()]]];
    let mut total = 1usize;
    for l in 1..=bound {
        let mut next = Vec::new();
        for w in &by_length[l - 1] {
            for v in &var_elements {
                next.push(alg.product(l - 1, w, 1, v)?);
            }
        }
        total += next.len();
        if total > 1 << 17 {
            return Err(Error::BudgetExceeded(
                "variable words grow past the presentation budget".into(),
            ));
        }
        by_length.push(next);
    }
    for l in 0..=bound {
        let count = m.checked_pow(l as u32).unwrap_or(usize::MAX);
        let span = Subspace::from_vectors(field, alg.dims[l], &by_length[l])?;
        relation_dims[l] = count - span.dim();
    }
    for n in 0..=bound {
        // Words of every length at most n, padded up by powers of the
        // inverted element.
        let mut all: Vec<Vec<Scalar>> = Vec::new();
        for l in 0..=n {
            for w in &by_length[l] {
                let mut x = w.clone();
                for e in l..n {
                    x = alg.product(e, &x, 1, z)?;
                }
                all.push(x);
            }
        }
        let span = Subspace::from_vectors(field, alg.dims[n], &all)?;
        span_defects[n] = alg.dims[n] - span.dim();
    }
    let mut commutes = true;
    if bound >= 2 {
        for i in 0..m {
            for j in (i + 1)..m {
                let ij = alg.product(1, &var_elements[i], 1, &var_elements[j])?;
                let ji = alg.product(1, &var_elements[j], 1, &var_elements[i])?;
                if ij != ji {
                    commutes = false;
                }
            }
        }
    }
    Ok(DegreeZeroRing::Presented(DegreeZeroPresentation {
        vars,
        var_elements,
        stage_dims: alg.dims.clone(),
        relation_dims,
        span_defects,
        commutes,
        bound,
    }))
}

// ---------------------------------------------------------------------------
// Windowed two-sided line module
// ---------------------------------------------------------------------------

/// The rank-one module with every component one-dimensional and the
/// generator acting invertibly — the window of the module obtained by
/// inverting the generator.  Only defined over the single-generator line;
/// it does not vanish below its window.
pub fn laurent_window(gl: &Arc<GradedAlgebra>, lo: i64, hi: i64) -> Result<GradedModule> {
    if gl.degrees != [1] {
        return Err(Error::BadInput(
            "the two-sided window lives over the single-generator line".into(),
        ));
    }
    let field = gl.field;
    let len = (hi - lo + 1).max(0) as usize;
    let dims = vec![1usize; len];
    let xact: Vec<Matrix> = (0..len.saturating_sub(1))
        .map(|_| Matrix::from_fn(field, 1, 1, |_, _| field.one()))
        .collect();
    let mut out = GradedModule::from_generator_actions(gl.clone(), lo, dims, &[xact], false)?;
    out.vanishes_below = false;
    Ok(out)
}

/// The truncated quotient of polynomials by a power of the variable, as an
/// ordinary algebra: basis `1, x, …, x^top` with `x^(top+1) = 0`.
pub fn truncated_line_algebra(field: Field, top: usize) -> Algebra {
    let n = top + 1;
    let labels: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut table = vec![vec![vec![field.zero(); n]; n]; n];
    for (i, ti) in table.iter_mut().enumerate() {
        for (j, tij) in ti.iter_mut().enumerate() {
            if i + j < n {
                tij[i + j] = field.one();
            }
        }
    }
    let mut unit = vec![field.zero(); n];
    unit[0] = field.one();
    Algebra::new(field, labels, table, unit).expect("truncated line constants")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    const BUDGET: usize = 1 << 16;

    fn f2() -> Field {
        Field::Fp(2)
    }

    #[test]
    fn presentation_dimensions_and_errors() {
        let gl = line(f2(), 8);
        assert_eq!(gl.dims(), &[1; 9]);
        let ut = plane(f2(), 8);
        let expect: Vec<usize> = (0..=8).map(|n| n + 1).collect();
        assert_eq!(ut.dims(), expect.as_slice());
        assert!(ut.is_degree_one_generated());
        assert!(ut.dim(9).is_err());

        // Two anticommuting generators in characteristic two: the square
        // words plus one mixed word survive in degree two.
        let anti = graded_presentation(
            f2(),
            &[("x", 1), ("y", 1)],
            &[GradedRelation {
                terms: vec![
                    (f2().one(), vec![0, 1]),
                    (f2().one(), vec![1, 0]),
                ],
            }],
            4,
        )
        .unwrap();
        assert_eq!(anti.dim(2).unwrap(), 3);

        // A non-homogeneous relation is refused.
        let bad = graded_presentation(
            f2(),
            &[("x", 1)],
            &[GradedRelation {
                terms: vec![(f2().one(), vec![0]), (f2().one(), vec![0, 0])],
            }],
            4,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn module_windows_shift_truncate_hilbert() {
        let ut = Arc::new(plane(f2(), 8));
        let reg = GradedModule::regular(&ut);
        assert_eq!(reg.hilbert(0, 4).unwrap(), vec![1, 2, 3, 4, 5]);
        assert!(reg.hilbert(0, 9).is_err());

        let t = reg.truncate(3).unwrap();
        assert_eq!(t.lo(), 3);
        assert_eq!(t.hilbert(3, 5).unwrap(), vec![4, 5, 6]);
        let tt = t.truncate(3).unwrap();
        assert_eq!(tt.lo(), t.lo());
        assert_eq!(tt.dims, t.dims);

        let s = reg.shift(2);
        assert_eq!(s.lo(), -2);
        assert_eq!(s.dim_at(-2).unwrap(), 1);
        assert_eq!(s.dim_at(0).unwrap(), 3);
    }

    #[test]
    fn tails_comparison_on_the_line() {
        let gl = Arc::new(line(f2(), 8));
        let reg = GradedModule::regular(&gl);
        let shifted = reg.shift(-1);
        // The shifted copy vanishes in degree zero, so the earliest
        // matching start is one.
        let found = tails_iso_bounded(&reg, &shifted, 2, BUDGET).unwrap();
        assert_eq!(found, Some(1));
        // An early hit answers without needing the whole window.
        assert_eq!(tails_iso_bounded(&reg, &shifted, 20, BUDGET).unwrap(), Some(1));
        // When every tested start fails and the request runs past the
        // window, the comparison refuses to answer.
        let nothing = GradedModule::zero(&gl, 0, 8);
        assert_eq!(tails_iso_bounded(&reg, &nothing, 8, BUDGET).unwrap(), None);
        assert!(tails_iso_bounded(&reg, &nothing, 20, BUDGET).is_err());
    }

    #[test]
    fn divisor_sequence_on_the_line() {
        let gl = Arc::new(line(f2(), 8));
        let reg = GradedModule::regular(&gl);
        let x = vec![f2().one()];
        let report = central_divisor(&reg, 1, &x, BUDGET).unwrap();
        assert_eq!(report.kernel_hilbert, vec![0; 9]);
        // The fiber is one copy of the ground field in the bottom degree.
        assert_eq!(report.cokernel_hilbert, {
            let mut v = vec![0; 9];
            v[0] = 1;
            v
        });
        assert!(report.cokernel_annihilated);
        assert_eq!(report.shift_witness, Some(0));
    }

    #[test]
    fn divisor_sequence_on_the_plane() {
        let ut = Arc::new(plane(f2(), 8));
        let reg = GradedModule::regular(&ut);
        // The second generator: coordinates of `t` in degree one.
        let mons = ut.monomials(1).unwrap().to_vec();
        let t_idx = mons.iter().position(|w| w == &[1]).unwrap();
        let mut t = vec![f2().zero(); 2];
        t[t_idx] = f2().one();
        let report = central_divisor(&reg, 1, &t, BUDGET).unwrap();
        assert_eq!(report.kernel_hilbert, vec![0; 9]);
        assert_eq!(report.cokernel_hilbert, vec![1; 9]);
        // Hilbert bookkeeping: fiber = module minus shifted module.
        for (k, &c) in report.cokernel_hilbert.iter().enumerate() {
            let below = if k == 0 { 0 } else { reg.dims[k - 1] };
            assert_eq!(c, reg.dims[k] - below);
        }
        assert!(report.shift_witness.is_some());

        // The zero module: every term vanishes.
        let z = GradedModule::zero(&ut, 0, 8);
        let report = central_divisor(&z, 1, &t, BUDGET).unwrap();
        assert_eq!(report.kernel_hilbert, vec![0; 9]);
        assert_eq!(report.cokernel_hilbert, vec![0; 9]);

        // A non-regular element is refused: the class of `t` in the
        // quotient by `t` squared... use the anticommuting square instead.
        let nilp = graded_presentation(
            f2(),
            &[("x", 1)],
            &[GradedRelation {
                terms: vec![(f2().one(), vec![0, 0])],
            }],
            4,
        )
        .unwrap();
        let xonly = vec![f2().one()];
        assert!(divisor_data(&nilp, 1, &xonly).is_err());
    }

    #[test]
    fn rees_of_the_truncated_line_is_the_plane() {
        let base = Arc::new(truncated_line_algebra(f2(), 8));
        let x: Vec<Scalar> = {
            let mut v = vec![f2().zero(); 9];
            v[1] = f2().one();
            v
        };
        let ra = rees(&base, &[x.clone()], 8).unwrap();
        let expect: Vec<usize> = (1..=9).collect();
        assert_eq!(ra.graded.dims(), expect.as_slice());
        assert_eq!(ra.exhausted_at, 8);

        // Identify with the commutative plane through degree-one images.
        let ut = plane(f2(), 8);
        let u_image = ra.filtration[1].coords(&x);
        let t_image = ra.t.clone();
        assert!(graded_iso_on_generators(&ut, &ra.graded, &[u_image, t_image]).unwrap());
    }

    #[test]
    fn rees_of_scalars_and_of_the_self_extension() {
        // No generators: the extension is the one-variable line.
        let k = Arc::new(truncated_line_algebra(f2(), 0));
        let ra = rees(&k, &[], 8).unwrap();
        assert_eq!(ra.graded.dims(), &[1; 9]);
        let gl = line(f2(), 8);
        assert!(graded_iso_on_generators(&gl, &ra.graded, &[ra.t.clone()]).unwrap());

        // The two-dimensional self-extension algebra: stages have
        // dimension two from degree one onward.
        let dual = Arc::new(fixtures::dual());
        let eps: Vec<Scalar> = {
            let mut v = vec![f2().zero(); 2];
            v[1] = f2().one();
            v
        };
        let ra = rees(&dual, &[eps], 8).unwrap();
        let mut expect = vec![2usize; 9];
        expect[0] = 1;
        assert_eq!(ra.graded.dims(), expect.as_slice());
        assert_eq!(ra.exhausted_at, 1);
    }

    #[test]
    fn point_modules_have_constant_components() {
        // Split pair of points: the simple at the first idempotent.
        let kk = Arc::new(fixtures::kk());
        let rep = Rep::new(fixtures::kk());
        let f1: Vec<Vec<Scalar>> = vec![
            {
                let mut v = vec![f2().zero(); 2];
                v[0] = f2().one();
                v
            },
            {
                let mut v = vec![f2().zero(); 2];
                v[1] = f2().one();
                v
            },
        ];
        let ra = rees(&kk, &f1, 8).unwrap();
        let v = rep.simples().unwrap()[0].module.clone();
        let tails = point_tails(&ra, &rep, &v).unwrap();
        assert_eq!(tails.hilbert(0, 8).unwrap(), vec![1; 9]);

        // The regular module is not simple.
        assert!(point_tails(&ra, &rep, &rep.regular()).is_err());

        // Distinct simples of the two-point flag produce tails that are
        // not isomorphic at the bound.
        let t2 = Arc::new(fixtures::t2());
        let rep2 = Rep::new(fixtures::t2());
        let gens: Vec<Vec<Scalar>> = t2
            .generators()
            .iter()
            .map(|&g| {
                let mut v = vec![f2().zero(); 3];
                v[g] = f2().one();
                v
            })
            .collect();
        let ra2 = rees(&t2, &gens, 8).unwrap();
        let simples = rep2.simples().unwrap();
        let ta = point_tails(&ra2, &rep2, &simples[0].module).unwrap();
        let tb = point_tails(&ra2, &rep2, &simples[1].module).unwrap();
        assert_eq!(ta.hilbert(0, 8).unwrap(), vec![1; 9]);
        assert_eq!(tails_iso_bounded(&ta, &tb, 4, BUDGET).unwrap(), None);
        assert!(tails_iso_bounded(&ta, &ta, 0, BUDGET).unwrap().is_some());
    }

    #[test]
    fn window_blocks_match_the_flag_fixtures() {
        // One degree: the ground field.
        let b1 = window_block(f2(), &[0]).unwrap();
        assert_eq!(b1.dim(), 1);

        // Two consecutive degrees: the upper-triangular two-by-two flag.
        let b2 = window_block(f2(), &[0, 1]).unwrap();
        let t2 = fixtures::t2();
        assert_eq!(b2.dim(), t2.dim());
        for i in 0..3 {
            for j in 0..3 {
                let mut ei = vec![f2().zero(); 3];
                ei[i] = f2().one();
                let mut ej = vec![f2().zero(); 3];
                ej[j] = f2().one();
                assert_eq!(b2.mul_vec(&ei, &ej), t2.mul_vec(&ei, &ej));
            }
        }
        assert_eq!(b2.unit(), t2.unit());

        // Three consecutive degrees: dimension six, checked triangular
        // inside the constructor.
        let b3 = window_block(f2(), &[5, 6, 7]).unwrap();
        assert_eq!(b3.dim(), 6);

        // Nested windows are corners: the idempotent for the first two
        // degrees cuts the two-degree block out of the three-degree one.
        let pairs: Vec<(usize, usize)> =
            vec![(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        let mut e = vec![f2().zero(); 6];
        for (i, (r, c)) in pairs.iter().enumerate() {
            if r == c && *r < 2 {
                e[i] = f2().one();
            }
        }
        let corner = b3.corner(&e).unwrap();
        assert_eq!(corner.algebra.dim(), b2.dim());
        for i in 0..3 {
            for j in 0..3 {
                let mut ei = vec![f2().zero(); 3];
                ei[i] = f2().one();
                let mut ej = vec![f2().zero(); 3];
                ej[j] = f2().one();
                assert_eq!(
                    corner.algebra.mul_vec(&ei, &ej),
                    b2.mul_vec(&ei, &ej),
                    "corner of the larger window deviates"
                );
            }
        }

        // A gap splits the window: only five maps survive.
        let gap = window_block(f2(), &[0, 2]).unwrap();
        assert_eq!(gap.dim(), 5);
    }

    #[test]
    fn degree_zero_localizations() {
        // Inverting the generator of the line leaves the ground field.
        let gl = line(f2(), 8);
        let x = vec![f2().one()];
        match degree_zero_localization(&gl, 1, &x).unwrap() {
            DegreeZeroRing::Stabilized { algebra, level } => {
                assert_eq!(algebra.dim(), 1);
                assert_eq!(level, 0);
            }
            DegreeZeroRing::Presented(_) => panic!("the line stabilizes"),
        }

        // Inverting one variable of the plane leaves a polynomial ring in
        // the other: one variable, no relations, no spanning defects.
        let ut = plane(f2(), 8);
        let mons = ut.monomials(1).unwrap().to_vec();
        let t_idx = mons.iter().position(|w| w == &[1]).unwrap();
        let mut t = vec![f2().zero(); 2];
        t[t_idx] = f2().one();
        match degree_zero_localization(&ut, 1, &t).unwrap() {
            DegreeZeroRing::Presented(p) => {
                assert_eq!(p.vars.len(), 1);
                assert!(p.relation_dims.iter().all(|&d| d == 0));
                assert!(p.span_defects.iter().all(|&d| d == 0));
                assert!(p.commutes);
                let expect: Vec<usize> = (1..=9).collect();
                assert_eq!(p.stage_dims, expect);
            }
            DegreeZeroRing::Stabilized { .. } => panic!("the plane does not stabilize"),
        }

        // An algebra with nothing in degree one is refused.
        let deep = graded_presentation(f2(), &[("y", 2)], &[], 4).unwrap();
        let y = vec![f2().one()];
        assert!(degree_zero_localization(&deep, 2, &y).is_err());
    }

    #[test]
    fn inverted_generator_window_has_no_divisor_torsion() {
        let gl = Arc::new(line(f2(), 8));
        let lw = laurent_window(&gl, -8, 8).unwrap();
        assert!(!lw.vanishes_below());
        let x = vec![f2().one()];
        for n in -8..8 {
            let m = lw.act_of(n, 1, &x).unwrap();
            assert_eq!(rank(&m), 1, "the generator drops rank at degree {n}");
        }
    }
}
