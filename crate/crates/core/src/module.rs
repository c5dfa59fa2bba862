//! Finite-dimensional right modules and their maps.
//!
//! A [`Module`] assigns to each algebra basis element a square matrix acting
//! on row vectors; [`Module::new`] checks the assignment against every
//! structure constant.  A [`Rep`] bundles an algebra with its structure
//! analysis and (for split algebras) the table of simple modules, so the
//! layered operations — socles, tops, composition series — do not recompute
//! the block data.
//!
//! Hom spaces are cut out by intertwining constraints against the algebra's
//! *generators* only (the commutant of a generating set is the commutant of
//! the algebra), which keeps the linear systems small.

use std::sync::{Arc, OnceLock};

use crate::algebra::{basis_vec, Algebra, Ideal};
use crate::error::{Error, Result};
use crate::matrix::{kernel_left, kernel_right, rank, solve_left, Matrix};
use crate::scalar::{Field, Scalar};
use crate::structure::{analyze, StructureAnalysis};
use crate::subspace::Subspace;

/// A right module over a fixed algebra, as one action matrix per basis
/// element (row-vector convention).
#[derive(Clone, Debug)]
pub struct Module {
    alg: Arc<Algebra>,
    dim: usize,
    act: Vec<Matrix>,
}

impl Module {
    /// Build and check the full module axioms: the unit acts as the
    /// identity and every structure constant is respected.
    pub fn new(alg: Arc<Algebra>, act: Vec<Matrix>) -> Result<Module> {
        let m = Self::assemble(alg, act)?;
        m.check()?;
        Ok(m)
    }

    /// Build a module whose axioms hold by construction.
    pub(crate) fn new_unchecked(alg: Arc<Algebra>, act: Vec<Matrix>) -> Module {
        let m = Self::assemble(alg, act).expect("internal module malformed");
        debug_assert!(m.check().is_ok(), "internal module violates the algebra");
        m
    }

    fn assemble(alg: Arc<Algebra>, act: Vec<Matrix>) -> Result<Module> {
        if act.len() != alg.dim() {
            return Err(Error::Shape(format!(
                "{} action matrices for an algebra of dimension {}",
                act.len(),
                alg.dim()
            )));
        }
        let dim = act.first().map_or(0, Matrix::rows);
        for (k, m) in act.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Shape(format!(
                    "action of basis element {k} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
            if m.field() != alg.field() {
                return Err(Error::FieldMismatch(alg.field(), m.field()));
            }
        }
        Ok(Module { alg, dim, act })
    }

    /// Verify the module axioms, reporting the first violated relation.
    pub fn check(&self) -> Result<()> {
        let n = self.alg.dim();
        if !self.act_of(self.alg.unit()).is_identity() {
            return Err(Error::NotAModule("the unit does not act as the identity".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.act[i].mul(&self.act[j]);
                let rhs = self.act_of(self.alg.basis_product(i, j));
                if lhs != rhs {
                    return Err(Error::NotAModule(format!(
                        "action disagrees on the product of basis elements {i} and {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// The regular module: the algebra acting on itself on the right.
    pub fn regular(alg: &Arc<Algebra>) -> Module {
        let act = (0..alg.dim())
            .map(|j| alg.rmm(&basis_vec(alg.field(), alg.dim(), j)))
            .collect();
        Module::new_unchecked(alg.clone(), act)
    }

    pub fn zero(alg: &Arc<Algebra>) -> Module {
        let act = (0..alg.dim())
            .map(|_| Matrix::zero(alg.field(), 0, 0))
            .collect();
        Module::new_unchecked(alg.clone(), act)
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    /// Action matrix of a basis element.
    pub fn action(&self, k: usize) -> &Matrix {
        &self.act[k]
    }

    /// Action matrix of an arbitrary algebra element.
    pub fn act_of(&self, x: &[Scalar]) -> Matrix {
        let mut out = Matrix::zero(self.field(), self.dim, self.dim);
        for (k, c) in x.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.act[k].scale(c));
            }
        }
        out
    }

    /// `v * x` for a module element `v` and algebra element `x`.
    pub fn apply(&self, v: &[Scalar], x: &[Scalar]) -> Vec<Scalar> {
        self.act_of(x).apply_row(v)
    }

    /// Structural equality of the action data (same basis, same matrices).
    pub fn same_action(&self, other: &Module) -> bool {
        self.dim == other.dim && self.act == other.act
    }

    /// Direct sum, with the canonical injections and projections.
    pub fn direct_sum(parts: &[&Module]) -> (Module, Vec<ModuleMap>, Vec<ModuleMap>) {
        assert!(!parts.is_empty(), "direct sum of nothing");
        let alg = parts[0].alg.clone();
        let field = alg.field();
        let total: usize = parts.iter().map(|m| m.dim).sum();
        let mut act = Vec::with_capacity(alg.dim());
        for k in 0..alg.dim() {
            let mut block = Matrix::zero(field, total, total);
            let mut at = 0;
            for m in parts {
                for i in 0..m.dim {
                    for j in 0..m.dim {
                        block[(at + i, at + j)] = m.act[k][(i, j)].clone();
                    }
                }
                at += m.dim;
            }
            act.push(block);
        }
        let sum = Module::new_unchecked(alg, act);
        let mut injections = Vec::new();
        let mut projections = Vec::new();
        let mut at = 0;
        for m in parts {
            let inj = Matrix::from_fn(field, m.dim, total, |i, j| {
                if j == at + i {
                    field.one()
                } else {
                    field.zero()
                }
            });
            let proj = Matrix::from_fn(field, total, m.dim, |i, j| {
                if i == at + j {
                    field.one()
                } else {
                    field.zero()
                }
            });
            injections.push(ModuleMap::new_unchecked((*m).clone(), sum.clone(), inj));
            projections.push(ModuleMap::new_unchecked(sum.clone(), (*m).clone(), proj));
            at += m.dim;
        }
        (sum, injections, projections)
    }

    /// Is the subspace stable under the action (checked on generators)?
    pub fn is_stable(&self, s: &Subspace) -> bool {
        assert_eq!(s.ambient(), self.dim, "subspace from a different module");
        self.alg.generators().iter().all(|&g| {
            let a = &self.act[g];
            s.contains(&s.apply(a))
        })
    }

    /// The smallest stable subspace containing the given vectors.
    pub fn invariant_closure(&self, vectors: &[Vec<Scalar>]) -> Subspace {
        let mut span =
            Subspace::from_vectors(self.field(), self.dim, vectors).expect("closure seeds");
        loop {
            let mut next = span.clone();
            for &g in self.alg.generators() {
                next = next.sum(&span.apply(&self.act[g]));
            }
            if next.dim() == span.dim() {
                return span;
            }
            span = next;
        }
    }

    /// The submodule on a stable subspace, with its inclusion map.
    pub fn submodule(&self, s: &Subspace) -> Result<(Module, ModuleMap)> {
        if !self.is_stable(s) {
            return Err(Error::NotStable("subspace is not a submodule".into()));
        }
        let basis = s.basis().clone();
        let d = s.dim();
        let act = (0..self.alg.dim())
            .map(|k| {
                Matrix::from_fn(self.field(), d, d, |i, j| {
                    let img = self.act[k].apply_row(basis.row(i));
                    s.coords(&img)[j].clone()
                })
            })
            .collect();
        let sub = Module::new_unchecked(self.alg.clone(), act);
        let incl = ModuleMap::new_unchecked(sub.clone(), self.clone(), basis);
        Ok((sub, incl))
    }

    /// The quotient by a stable subspace, with its projection map.
    pub fn quotient(&self, s: &Subspace) -> Result<(Module, ModuleMap)> {
        if !self.is_stable(s) {
            return Err(Error::NotStable("subspace is not a submodule".into()));
        }
        let q = s.quotient_matrix();
        let sec = s.section_matrix();
        let act = (0..self.alg.dim())
            .map(|k| sec.mul(&self.act[k]).mul(&q))
            .collect();
        let quot = Module::new_unchecked(self.alg.clone(), act);
        let proj = ModuleMap::new_unchecked(self.clone(), quot.clone(), q);
        Ok((quot, proj))
    }

    /// Restrict a module along a multiplicative unital algebra map
    /// `phi: A -> B` (matrix on row vectors): the result is the same space
    /// seen as an `A`-module.
    pub fn restrict_along(alg: &Arc<Algebra>, phi: &Matrix, m: &Module) -> Module {
        let act = (0..alg.dim())
            .map(|k| m.act_of(&phi.apply_row(&basis_vec(alg.field(), alg.dim(), k))))
            .collect();
        Module::new_unchecked(alg.clone(), act)
    }
}

// ---------------------------------------------------------------------------
// Module maps
// ---------------------------------------------------------------------------

/// A homomorphism of right modules, `v -> v * mat`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    src: Module,
    tgt: Module,
    mat: Matrix,
}

impl ModuleMap {
    /// Build and check the intertwining condition on every generator.
    pub fn new(src: Module, tgt: Module, mat: Matrix) -> Result<ModuleMap> {
        if mat.rows() != src.dim() || mat.cols() != tgt.dim() {
            return Err(Error::Shape(format!(
                "map matrix is {}x{}, modules have dimensions {} and {}",
                mat.rows(),
                mat.cols(),
                src.dim(),
                tgt.dim()
            )));
        }
        for &g in src.alg.generators() {
            if src.act[g].mul(&mat) != mat.mul(&tgt.act[g]) {
                return Err(Error::NotAModuleMap(g));
            }
        }
        Ok(ModuleMap { src, tgt, mat })
    }

    pub(crate) fn new_unchecked(src: Module, tgt: Module, mat: Matrix) -> ModuleMap {
        debug_assert!(
            src.alg
                .generators()
                .iter()
                .all(|&g| src.act[g].mul(&mat) == mat.mul(&tgt.act[g])),
            "internal map does not intertwine"
        );
        ModuleMap { src, tgt, mat }
    }

    pub fn src(&self) -> &Module {
        &self.src
    }

    pub fn tgt(&self) -> &Module {
        &self.tgt
    }

    pub fn matrix(&self) -> &Matrix {
        &self.mat
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.mat.apply_row(v)
    }

    /// Composite `self` then `next`.
    pub fn then(&self, next: &ModuleMap) -> ModuleMap {
        assert_eq!(self.tgt.dim(), next.src.dim(), "composition shape mismatch");
        ModuleMap::new_unchecked(self.src.clone(), next.tgt.clone(), self.mat.mul(&next.mat))
    }

    pub fn kernel(&self) -> Subspace {
        Subspace::from_matrix(&kernel_left(&self.mat))
    }

    pub fn image(&self) -> Subspace {
        Subspace::from_matrix(&self.mat)
    }

    pub fn is_injective(&self) -> bool {
        rank(&self.mat) == self.src.dim()
    }

    pub fn is_surjective(&self) -> bool {
        rank(&self.mat) == self.tgt.dim()
    }

    pub fn is_iso(&self) -> bool {
        self.src.dim() == self.tgt.dim() && self.is_injective()
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }
}

// ---------------------------------------------------------------------------
// Hom spaces
// ---------------------------------------------------------------------------

/// A basis of `Hom(m, n)`, as matrices.  The intertwining constraints are
/// imposed for the algebra's generators, which suffices.
pub fn hom_basis(m: &Module, n: &Module) -> Vec<Matrix> {
    let field = m.field();
    let (dm, dn) = (m.dim(), n.dim());
    if dm == 0 || dn == 0 {
        return Vec::new();
    }
    let gens = m.alg.generators();
    if gens.is_empty() {
        // The algebra is spanned by its unit: every matrix intertwines.
        let mut out = Vec::new();
        for i in 0..dm {
            for j in 0..dn {
                let mut f = Matrix::zero(field, dm, dn);
                f[(i, j)] = field.one();
                out.push(f);
            }
        }
        return out;
    }
    let im = Matrix::identity(field, dm);
    let in_ = Matrix::identity(field, dn);
    let mut stacked: Option<Matrix> = None;
    for &g in gens {
        let c = m.act[g].kron(&in_).sub(&im.kron(&n.act[g].transpose()));
        stacked = Some(match stacked {
            None => c,
            Some(s) => s.vstack(&c),
        });
    }
    let ker = kernel_right(&stacked.unwrap());
    (0..ker.rows())
        .map(|r| Matrix::from_vectorized(field, dm, dn, ker.row(r)))
        .collect()
}

pub fn hom_dim(m: &Module, n: &Module) -> usize {
    hom_basis(m, n).len()
}

/// The endomorphism algebra of a module, together with the matrix basis
/// realising each abstract basis element.
pub fn end_algebra(m: &Module) -> (Algebra, Vec<Matrix>) {
    let field = m.field();
    let basis = hom_basis(m, m);
    let h = basis.len();
    let vecs: Vec<Vec<Scalar>> = basis.iter().map(Matrix::vectorize).collect();
    let coord_mat = Matrix::from_rows(field, vecs).expect("hom basis rows");
    let coords_of = |f: &Matrix| -> Vec<Scalar> {
        let sol = solve_left(&coord_mat, &f.vectorize()).expect("shape");
        sol.particular.expect("composite lies in the hom space")
    };
    let mut table = vec![vec![Vec::new(); h]; h];
    for s in 0..h {
        for t in 0..h {
            table[s][t] = coords_of(&basis[s].mul(&basis[t]));
        }
    }
    let unit = coords_of(&Matrix::identity(field, m.dim()));
    let labels = (0..h).map(|s| format!("f{s}")).collect();
    let alg = Algebra::from_parts_unchecked(field, labels, table, unit);
    (alg, basis)
}

/// Outcome of an isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoAnswer {
    /// An explicit isomorphism.
    Yes(ModuleMap),
    /// Certainly not isomorphic (dimension/hom obstruction or exhaustive
    /// search of the hom space).
    No,
    /// No isomorphism found within the search budget over an infinite
    /// field; callers must treat this as "unknown, probably not".
    ProbablyNo,
}

impl IsoAnswer {
    pub fn found(&self) -> bool {
        matches!(self, IsoAnswer::Yes(_))
    }
}

/// Search for an isomorphism inside `Hom(m, n)`.
///
/// Over a prime field the search is exhaustive (hence exact) whenever
/// `p^{hom dim}` fits inside `budget`; otherwise, and over the rationals, a
/// deterministic pseudo-random sweep runs first and the answer degrades to
/// [`IsoAnswer::ProbablyNo`] on failure.
pub fn isomorphism(m: &Module, n: &Module, budget: usize) -> IsoAnswer {
    if m.dim() != n.dim() {
        return IsoAnswer::No;
    }
    if m.dim() == 0 {
        return IsoAnswer::Yes(ModuleMap::new_unchecked(
            m.clone(),
            n.clone(),
            Matrix::zero(m.field(), 0, 0),
        ));
    }
    let basis = hom_basis(m, n);
    if basis.is_empty() {
        return IsoAnswer::No;
    }
    let h = basis.len();
    let field = m.field();
    let combine = |coeffs: &[Scalar]| -> Matrix {
        let mut f = Matrix::zero(field, m.dim(), n.dim());
        for (c, b) in coeffs.iter().zip(&basis) {
            if !c.is_zero() {
                f = f.add(&b.scale(c));
            }
        }
        f
    };
    if let Field::Fp(p) = field {
        let total = (p as usize).checked_pow(h as u32);
        if let Some(total) = total {
            if total <= budget {
                let mut coeffs = vec![0u64; h];
                loop {
                    let cs: Vec<Scalar> =
                        coeffs.iter().map(|&v| field.from_i64(v as i64)).collect();
                    let f = combine(&cs);
                    if rank(&f) == m.dim() {
                        return IsoAnswer::Yes(ModuleMap::new_unchecked(m.clone(), n.clone(), f));
                    }
                    let mut k = 0;
                    loop {
                        if k == h {
                            return IsoAnswer::No;
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
    // Deterministic pseudo-random sweep.
    let mut state: u64 = 0xd1b5_4a32_d192_ed03 ^ ((m.dim() as u64) << 24) ^ h as u64;
    for _ in 0..128 {
        let cs: Vec<Scalar> = (0..h)
            .map(|_| {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                field.from_i64(((state >> 30) % 7) as i64 - 3)
            })
            .collect();
        let f = combine(&cs);
        if rank(&f) == m.dim() {
            return IsoAnswer::Yes(ModuleMap::new_unchecked(m.clone(), n.clone(), f));
        }
    }
    match field {
        Field::Q => IsoAnswer::ProbablyNo,
        // A full enumeration was too large, but for module isomorphism over
        // a finite field the random sweep missing 128 times is still only
        // evidence, not proof.
        Field::Fp(_) => IsoAnswer::ProbablyNo,
    }
}

// ---------------------------------------------------------------------------
// The representation context
// ---------------------------------------------------------------------------

/// One simple module, tied to the primitive idempotent that produces it.
#[derive(Clone, Debug)]
pub struct SimpleInfo {
    pub module: Module,
    /// Index into the analysis' lifted idempotent family.
    pub idempotent: usize,
    pub endo_dim: usize,
}

/// An algebra bundled with its structure analysis and simple modules.
pub struct Rep {
    alg: Arc<Algebra>,
    sa: StructureAnalysis,
    simples: Option<Vec<SimpleInfo>>,
    op: OnceLock<Arc<Rep>>,
}

impl Rep {
    pub fn new(alg: Algebra) -> Rep {
        let alg = Arc::new(alg);
        let sa = analyze(&alg);
        let simples = if sa.split {
            Some(build_simples(&alg, &sa))
        } else {
            None
        };
        Rep {
            alg,
            sa,
            simples,
            op: OnceLock::new(),
        }
    }

    pub fn alg(&self) -> &Arc<Algebra> {
        &self.alg
    }

    pub fn field(&self) -> Field {
        self.alg.field()
    }

    pub fn analysis(&self) -> &StructureAnalysis {
        &self.sa
    }

    pub fn num_blocks(&self) -> usize {
        self.sa.blocks.len()
    }

    /// The simple modules, one per block; requires a split algebra.
    pub fn simples(&self) -> Result<&[SimpleInfo]> {
        match &self.simples {
            Some(s) => Ok(s),
            None => {
                self.sa.require_split()?;
                unreachable!("split analysis always builds simples")
            }
        }
    }

    pub fn regular(&self) -> Module {
        Module::regular(&self.alg)
    }

    /// The indecomposable projective `e A` for a lifted idempotent.
    pub fn projective(&self, idempotent: usize) -> Module {
        let e = &self.sa.idempotents[idempotent];
        let ea = Subspace::from_matrix(&self.alg.lmm(e));
        let (p, _) = self.regular().submodule(&ea).expect("eA is a submodule");
        p
    }

    /// The opposite representation context (built once, then cached).
    pub fn opposite(&self) -> Arc<Rep> {
        self.op
            .get_or_init(|| Arc::new(Rep::new(self.alg.opposite())))
            .clone()
    }
}

fn build_simples(alg: &Arc<Algebra>, sa: &StructureAnalysis) -> Vec<SimpleInfo> {
    let regular = Module::regular(alg);
    let mut out = Vec::new();
    for (bi, block) in sa.blocks.iter().enumerate() {
        let t = sa
            .idempotent_block
            .iter()
            .position(|&b| b == bi)
            .expect("every block has an idempotent");
        let e = &sa.idempotents[t];
        let ea = Subspace::from_matrix(&alg.lmm(e));
        let (p, _) = regular.submodule(&ea).expect("eA is a submodule");
        let rad_sub = radical_subspace_with(&p, sa);
        let (s, _) = p.quotient(&rad_sub).expect("P J is a submodule");
        assert_eq!(
            s.dim(),
            block.size * block.endo_dim,
            "simple dimension disagrees with the block data"
        );
        out.push(SimpleInfo {
            module: s,
            idempotent: t,
            endo_dim: block.endo_dim,
        });
    }
    out
}

fn radical_subspace_with(m: &Module, sa: &StructureAnalysis) -> Subspace {
    let mut span = Subspace::zero(m.field(), m.dim());
    for r in sa.radical.space().basis_vectors() {
        span = span.sum(&Subspace::from_matrix(&m.act_of(&r)));
    }
    span
}

// ---------------------------------------------------------------------------
// Socle, top, composition series
// ---------------------------------------------------------------------------

impl Rep {
    /// The socle: everything killed by the radical.
    pub fn socle(&self, m: &Module) -> Subspace {
        let rad = self.sa.radical.space();
        if rad.is_zero() || m.dim() == 0 {
            return Subspace::full(m.field(), m.dim());
        }
        let mut stacked: Option<Matrix> = None;
        for r in rad.basis_vectors() {
            let a = m.act_of(&r);
            stacked = Some(match stacked {
                None => a,
                Some(s) => s.hstack(&a),
            });
        }
        Subspace::from_matrix(&kernel_left(&stacked.unwrap()))
    }

    /// The radical submodule `m * J`.
    pub fn radical_subspace(&self, m: &Module) -> Subspace {
        radical_subspace_with(m, &self.sa)
    }

    /// The top `m / m J`, with its projection.
    pub fn top(&self, m: &Module) -> (Module, ModuleMap) {
        m.quotient(&self.radical_subspace(m))
            .expect("mJ is a submodule")
    }

    /// The part of the socle belonging to one block (an isotypic submodule),
    /// as a subspace of `m`.
    pub fn socle_block(&self, m: &Module, block: usize) -> Subspace {
        let soc = self.socle(m);
        let c = self
            .sa
            .to_semisimple
            .lift(&self.sa.central_idempotents[block]);
        // On the socle the lifted central idempotent acts as a projection;
        // its image there is the isotypic part.
        let e = m.act_of(&c);
        let img = Subspace::from_matrix(&soc.basis().mul(&e));
        debug_assert!(soc.contains(&img));
        img
    }

    /// Kernel of the projection onto one block's isotypic part of the top:
    /// quotienting by this subspace realises "largest quotient that is a sum
    /// of the block's simple".
    pub fn top_block_kernel(&self, m: &Module, block: usize) -> Subspace {
        let (t, proj) = self.top(m);
        let c = self
            .sa
            .to_semisimple
            .lift(&self.sa.central_idempotents[block]);
        let e = t.act_of(&c);
        Subspace::from_matrix(&kernel_left(&proj.matrix().mul(&e)))
    }

    /// Multiplicity of each block's simple inside a semisimple module.
    pub(crate) fn isotypic_multiplicities(&self, semisimple: &Module) -> Result<Vec<usize>> {
        let simples = self.simples()?;
        let mut counts = Vec::with_capacity(simples.len());
        for (bi, s) in simples.iter().enumerate() {
            let c = self
                .sa
                .to_semisimple
                .lift(&self.sa.central_idempotents[bi]);
            let r = rank(&semisimple.act_of(&c));
            let d = s.module.dim();
            if r % d != 0 {
                return Err(Error::NotAModule(
                    "isotypic rank is not a multiple of the simple dimension".into(),
                ));
            }
            counts.push(r / d);
        }
        Ok(counts)
    }

    /// Composition-factor multiplicities (one count per block), by peeling
    /// socles.  Requires a split algebra.
    pub fn composition_factors(&self, m: &Module) -> Result<Vec<usize>> {
        let simples = self.simples()?;
        let mut counts = vec![0usize; simples.len()];
        let mut cur = m.clone();
        while cur.dim() > 0 {
            let soc = self.socle(&cur);
            assert!(!soc.is_zero(), "nonzero module with zero socle");
            let (soc_mod, _) = cur.submodule(&soc).expect("socle is a submodule");
            for (bi, c) in self.isotypic_multiplicities(&soc_mod)?.iter().enumerate() {
                counts[bi] += c;
            }
            cur = cur.quotient(&soc).expect("socle is a submodule").0;
        }
        let total: usize = counts
            .iter()
            .zip(simples)
            .map(|(c, s)| c * s.module.dim())
            .sum();
        assert_eq!(total, m.dim(), "composition factors do not fill the module");
        Ok(counts)
    }

    /// The annihilator ideal of a module.
    pub fn annihilator(&self, m: &Module) -> Ideal {
        let n = self.alg.dim();
        if m.dim() == 0 {
            return self.alg.unit_ideal();
        }
        let rows: Vec<Vec<Scalar>> = (0..n).map(|k| m.action(k).vectorize()).collect();
        let mat = Matrix::from_rows(self.field(), rows).expect("action rows");
        let space = Subspace::from_matrix(&kernel_left(&mat));
        self.alg
            .as_ideal(space)
            .expect("annihilators are two-sided")
    }

    /// The cyclic submodule generated by one vector.
    pub fn cyclic(&self, m: &Module, v: &[Scalar]) -> Subspace {
        m.invariant_closure(std::slice::from_ref(&v.to_vec()))
    }

    /// The support of a module: the blocks whose simple occurs among its
    /// composition factors, in increasing order.
    pub fn support(&self, m: &Module) -> Result<Vec<usize>> {
        Ok(self
            .composition_factors(m)?
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(b, _)| b)
            .collect())
    }

    /// Isomorphism test with invariant pre- and post-filters: composition
    /// factors rule a pair out exactly; when the raw hom-space search comes
    /// back inconclusive, differing hom fingerprints upgrade the answer to
    /// a certain no.
    pub fn isomorphism(&self, m: &Module, n: &Module, budget: usize) -> IsoAnswer {
        if m.dim() != n.dim() {
            return IsoAnswer::No;
        }
        if self.sa.split {
            let fm = self.composition_factors(m).expect("split");
            let fn_ = self.composition_factors(n).expect("split");
            if fm != fn_ {
                return IsoAnswer::No;
            }
        }
        match isomorphism(m, n, budget) {
            IsoAnswer::Yes(f) => IsoAnswer::Yes(f),
            IsoAnswer::No => IsoAnswer::No,
            IsoAnswer::ProbablyNo => {
                let fingerprint = |x: &Module| {
                    (
                        hom_dim(x, x),
                        self.socle(x).dim(),
                        self.radical_subspace(x).dim(),
                    )
                };
                if fingerprint(m) != fingerprint(n) || hom_dim(m, n) != hom_dim(n, m) {
                    IsoAnswer::No
                } else {
                    IsoAnswer::ProbablyNo
                }
            }
        }
    }

    /// Does every nonzero cyclic submodule have the same support?
    ///
    /// Nonzero vectors are enumerated up to scalar, which suffices: every
    /// nonzero submodule contains a cyclic one and support only grows with
    /// the module.  Prime-field only.
    pub fn is_prime_module(&self, m: &Module, budget: usize) -> Result<bool> {
        let Field::Fp(p) = self.field() else {
            return Err(Error::BadInput(
                "primality enumeration needs a finite prime field".into(),
            ));
        };
        self.sa.require_split()?;
        if m.dim() == 0 {
            return Ok(false);
        }
        let d = m.dim();
        let count = ((p as u128).pow(d as u32) - 1) / (p as u128 - 1);
        if count > budget as u128 {
            return Err(Error::BudgetExceeded(format!(
                "{count} projective vectors to test"
            )));
        }
        let field = self.field();
        let mut reference: Option<Vec<usize>> = None;
        // Canonical representatives: first nonzero coordinate equals one.
        let mut digits = vec![0u64; d];
        loop {
            let mut k = 0;
            loop {
                if k == d {
                    return Ok(true);
                }
                digits[k] += 1;
                if digits[k] < p {
                    break;
                }
                digits[k] = 0;
                k += 1;
            }
            let lead = (0..d).rev().find(|&i| digits[i] != 0).unwrap();
            if digits[lead] != 1 {
                continue;
            }
            let v: Vec<Scalar> = digits.iter().map(|&x| field.from_i64(x as i64)).collect();
            let cyc = self.cyclic(m, &v);
            let (sub, _) = m.submodule(&cyc).expect("cyclic closures are stable");
            let sup = self.support(&sub)?;
            match &reference {
                None => reference = Some(sup),
                Some(r) => {
                    if *r != sup {
                        return Ok(false);
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Subquotient search
// ---------------------------------------------------------------------------

/// A successful subquotient witness: inside `g^{copies}` the stable subspace
/// `sub` modulo its stable subspace `kernel` is isomorphic to the module
/// searched for.  `sub` lives in the coordinates of the direct sum, while
/// `kernel` is written in the canonical basis coordinates of `sub`.
#[derive(Clone, Debug)]
pub struct SubquotientWitness {
    pub copies: usize,
    pub sub: Subspace,
    pub kernel: Subspace,
}

/// Outcome of a bounded subquotient search.
#[derive(Clone, Debug)]
pub struct SubquotientAnswer {
    pub witness: Option<SubquotientWitness>,
    /// Maximum number of copies of the ambient module that was searched.
    pub bound: usize,
    /// True when every candidate up to the bound was examined, so an empty
    /// `witness` is a certain no *at this bound*.
    pub exhaustive: bool,
}

/// Search for `m` as a subquotient of a direct sum of at most `bound`
/// copies of `g`, by brute-force enumeration over a prime field.
///
/// `budget` caps each subspace enumeration; blowing it marks the answer
/// non-exhaustive instead of failing.
pub fn is_subquotient(
    rep: &Rep,
    m: &Module,
    g: &Module,
    bound: usize,
    budget: usize,
) -> Result<SubquotientAnswer> {
    if matches!(m.field(), Field::Q) {
        return Err(Error::BadInput(
            "subquotient enumeration needs a finite prime field".into(),
        ));
    }
    let mut exhaustive = true;
    if m.dim() == 0 {
        // The zero module is a subquotient of anything (take W = U = 0).
        let zero = Subspace::zero(g.field(), g.dim());
        return Ok(SubquotientAnswer {
            witness: Some(SubquotientWitness {
                copies: 1,
                sub: zero.clone(),
                kernel: zero,
            }),
            bound,
            exhaustive: true,
        });
    }
    let factors_m = if rep.analysis().split {
        Some(rep.composition_factors(m)?)
    } else {
        None
    };
    for copies in 1..=bound {
        let parts: Vec<&Module> = (0..copies).map(|_| g).collect();
        let (h, _, _) = Module::direct_sum(&parts);
        if let Some(fm) = &factors_m {
            let fh = rep.composition_factors(&h)?;
            if fm.iter().zip(&fh).any(|(a, b)| a > b) {
                continue; // not even the factors fit
            }
        }
        let subs = match enumerate_submodule_spaces(&h, budget) {
            Ok(s) => s,
            Err(Error::BudgetExceeded(_)) => {
                exhaustive = false;
                continue;
            }
            Err(e) => return Err(e),
        };
        for w in &subs {
            if w.dim() < m.dim() {
                continue;
            }
            let (wmod, _) = h.submodule(w).expect("enumerated stable subspace");
            if let Some(fm) = &factors_m {
                let fw = rep.composition_factors(&wmod)?;
                if fm.iter().zip(&fw).any(|(a, b)| a > b) {
                    continue;
                }
            }
            let inner = match enumerate_submodule_spaces(&wmod, budget) {
                Ok(s) => s,
                Err(Error::BudgetExceeded(_)) => {
                    exhaustive = false;
                    continue;
                }
                Err(e) => return Err(e),
            };
            for u in inner {
                if w.dim() - u.dim() != m.dim() {
                    continue;
                }
                let (q, _) = wmod.quotient(&u).expect("enumerated stable subspace");
                if rep.isomorphism(&q, m, budget).found() {
                    return Ok(SubquotientAnswer {
                        witness: Some(SubquotientWitness {
                            copies,
                            sub: w.clone(),
                            kernel: u,
                        }),
                        bound,
                        exhaustive: true,
                    });
                }
            }
        }
    }
    Ok(SubquotientAnswer {
        witness: None,
        bound,
        exhaustive,
    })
}

// ---------------------------------------------------------------------------
// Brute-force enumeration (small prime fields)
// ---------------------------------------------------------------------------

/// Expansion of each algebra basis element as a linear combination of words
/// in the generators (the empty word standing for the unit).
fn generator_expansions(alg: &Algebra) -> Vec<Vec<(Scalar, Vec<usize>)>> {
    let field = alg.field();
    let n = alg.dim();
    let mut prods: Vec<(Vec<Scalar>, Vec<usize>)> = vec![(alg.unit().to_vec(), Vec::new())];
    let mut span = Subspace::from_vectors(field, n, &[alg.unit().to_vec()]).expect("unit");
    let mut head = 0;
    while head < prods.len() {
        let (v, w) = prods[head].clone();
        head += 1;
        for &g in alg.generators() {
            let v2 = alg.mul_vec(&v, &basis_vec(field, n, g));
            if !span.contains_vec(&v2) {
                span = span.sum(&Subspace::from_vectors(field, n, std::slice::from_ref(&v2)).unwrap());
                let mut w2 = w.clone();
                w2.push(g);
                prods.push((v2, w2));
            }
        }
    }
    assert!(span.is_full(), "generators do not generate");
    let mat = Matrix::from_rows(field, prods.iter().map(|(v, _)| v.clone()).collect())
        .expect("product rows");
    (0..n)
        .map(|k| {
            let sol = solve_left(&mat, &basis_vec(field, n, k)).expect("shape");
            let lambda = sol.particular.expect("products span the algebra");
            lambda
                .iter()
                .zip(&prods)
                .filter(|(l, _)| !l.is_zero())
                .map(|(l, (_, w))| (l.clone(), w.clone()))
                .collect()
        })
        .collect()
}

/// Every `d`-dimensional module over a small prime-field algebra, as
/// explicit action tuples (no isomorphism reduction), in a deterministic
/// order.  Errors if the raw search space exceeds `budget`.
pub fn enumerate_modules(rep: &Rep, d: usize, budget: usize) -> Result<Vec<Module>> {
    let alg = rep.alg();
    let Field::Fp(p) = alg.field() else {
        return Err(Error::BadInput(
            "cannot enumerate modules over an infinite field".into(),
        ));
    };
    let gens = alg.generators().to_vec();
    let cells = gens.len() * d * d;
    let total = (p as u128).checked_pow(cells as u32);
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => {
            return Err(Error::BudgetExceeded(format!(
                "{}^{cells} assignments of generator matrices",
                p
            )))
        }
    }
    let expansions = generator_expansions(alg);
    let field = alg.field();
    let mut out = Vec::new();
    let mut cellsv = vec![0u64; cells];
    loop {
        // Build the generator matrices for this assignment.
        let gen_mats: Vec<Matrix> = (0..gens.len())
            .map(|gi| {
                Matrix::from_fn(field, d, d, |i, j| {
                    field.from_i64(cellsv[gi * d * d + i * d + j] as i64)
                })
            })
            .collect();
        let act: Vec<Matrix> = expansions
            .iter()
            .map(|terms| {
                let mut a = Matrix::zero(field, d, d);
                for (coeff, word) in terms {
                    let mut w = Matrix::identity(field, d);
                    for &g in word {
                        let gi = gens.iter().position(|&x| x == g).unwrap();
                        w = w.mul(&gen_mats[gi]);
                    }
                    a = a.add(&w.scale(coeff));
                }
                a
            })
            .collect();
        if let Ok(m) = Module::new(alg.clone(), act) {
            out.push(m);
        }
        // Odometer.
        let mut k = 0;
        loop {
            if k == cells {
                return Ok(out);
            }
            cellsv[k] += 1;
            if cellsv[k] < p {
                break;
            }
            cellsv[k] = 0;
            k += 1;
        }
    }
}

/// All stable subspaces of a module over a small prime field.
pub fn enumerate_submodule_spaces(m: &Module, budget: usize) -> Result<Vec<Subspace>> {
    let all = crate::subspace::enumerate_subspaces(m.field(), m.dim(), budget)?;
    Ok(all.into_iter().filter(|s| m.is_stable(s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f2() -> Field {
        Field::Fp(2)
    }

    fn t2_rep() -> Rep {
        Rep::new(fixtures::t2())
    }

    /// The simple with `e11` in its annihilator (the projective one) and
    /// the other; returns (projective simple, non-projective simple).
    fn t2_simples(rep: &Rep) -> (Module, Module) {
        let simples = rep.simples().unwrap();
        assert_eq!(simples.len(), 2);
        let e11 = basis_vec(f2(), 3, 0);
        let mut proj = None;
        let mut other = None;
        for s in simples {
            if rep.annihilator(&s.module).space().contains_vec(&e11) {
                proj = Some(s.module.clone());
            } else {
                other = Some(s.module.clone());
            }
        }
        (proj.unwrap(), other.unwrap())
    }

    #[test]
    fn module_check_catches_bad_actions() {
        let rep = t2_rep();
        let reg = rep.regular();
        assert!(reg.check().is_ok());
        let mut act: Vec<Matrix> = (0..3).map(|k| reg.action(k).clone()).collect();
        act[1] = Matrix::identity(f2(), 3); // e12 acting as the identity
        assert!(matches!(
            Module::new(rep.alg().clone(), act),
            Err(Error::NotAModule(_))
        ));
    }

    #[test]
    fn triangular_has_two_simples_with_known_annihilators() {
        let rep = t2_rep();
        let (sp, sq) = t2_simples(&rep);
        assert_eq!(sp.dim(), 1);
        assert_eq!(sq.dim(), 1);
        // The projective simple is killed by e11 and e12, fixed by e22.
        assert!(sp.act_of(&basis_vec(f2(), 3, 0)).is_zero());
        assert!(sp.act_of(&basis_vec(f2(), 3, 1)).is_zero());
        assert!(sp.act_of(&basis_vec(f2(), 3, 2)).is_identity());
        // The other simple is fixed by e11, killed by e12 and e22.
        assert!(sq.act_of(&basis_vec(f2(), 3, 0)).is_identity());
        assert!(sq.act_of(&basis_vec(f2(), 3, 1)).is_zero());
        assert!(sq.act_of(&basis_vec(f2(), 3, 2)).is_zero());
    }

    #[test]
    fn composition_factors_of_the_regular_module() {
        let rep = t2_rep();
        let reg = rep.regular();
        let counts = rep.composition_factors(&reg).unwrap();
        // Two copies of the projective simple (one inside e11 A), one of
        // the other: multiset {2, 1}.
        let mut sorted = counts.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 2]);
        let (sp, _) = t2_simples(&rep);
        let sp_block = rep
            .simples()
            .unwrap()
            .iter()
            .position(|s| s.module.same_action(&sp))
            .unwrap();
        assert_eq!(counts[sp_block], 2);
    }

    #[test]
    fn socle_and_top_of_the_regular_module() {
        let rep = t2_rep();
        let reg = rep.regular();
        let soc = rep.socle(&reg);
        // Killed by right multiplication by e12: span{e12, e22}.
        assert_eq!(soc.dim(), 2);
        assert!(soc.contains_vec(&basis_vec(f2(), 3, 1)));
        assert!(soc.contains_vec(&basis_vec(f2(), 3, 2)));
        let (top, _) = rep.top(&reg);
        assert_eq!(top.dim(), 2);
        // The socle splits into blocks: both isotypic parts are inside it.
        let b0 = rep.socle_block(&reg, 0);
        let b1 = rep.socle_block(&reg, 1);
        assert_eq!(b0.dim() + b1.dim(), 2);
        assert!(b0.intersect(&b1).is_zero());
    }

    #[test]
    fn the_standard_non_split_extension() {
        // e11 A = span{e11, e12} is an extension of the non-projective
        // simple by the projective one, and it does not split.
        let rep = t2_rep();
        let reg = rep.regular();
        let e11a = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
        let (p, incl) = reg.submodule(&e11a).unwrap();
        assert!(incl.is_injective());
        let (sp, sq) = t2_simples(&rep);
        // Socle is the projective simple; top is the other.
        assert_eq!(rep.socle(&p).dim(), 1);
        let factors = rep.composition_factors(&p).unwrap();
        assert_eq!(factors.iter().sum::<usize>(), 2);
        // Not isomorphic to the direct sum of its factors.
        let (sum, _, _) = Module::direct_sum(&[&sp, &sq]);
        assert!(matches!(isomorphism(&p, &sum, 1 << 16), IsoAnswer::No));
        // End(e11 A) is one-dimensional: the extension is indecomposable.
        assert_eq!(hom_dim(&p, &p), 1);
    }

    #[test]
    fn hom_spaces_between_projectives_and_simples() {
        let rep = t2_rep();
        let (sp, sq) = t2_simples(&rep);
        assert_eq!(hom_dim(&sp, &sq), 0);
        assert_eq!(hom_dim(&sq, &sp), 0);
        assert_eq!(hom_dim(&sp, &sp), 1);
        // Hom(e11 A, sp) = sp . e11 = 0; Hom(e11 A, sq) = sq . e11 = k.
        let reg = rep.regular();
        let e11a = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
        let (p, _) = reg.submodule(&e11a).unwrap();
        assert_eq!(hom_dim(&p, &sp), 0);
        assert_eq!(hom_dim(&p, &sq), 1);
    }

    #[test]
    fn end_algebra_of_a_direct_sum() {
        let rep = t2_rep();
        let (sp, _) = t2_simples(&rep);
        let (m, _, _) = Module::direct_sum(&[&sp, &sp]);
        let (end, _) = end_algebra(&m);
        // End(S + S) = M_2(k): dimension 4, one split block of size 2.
        assert_eq!(end.dim(), 4);
        let sa = crate::structure::analyze(&end);
        assert!(sa.split);
        assert_eq!(sa.blocks.len(), 1);
        assert_eq!(sa.blocks[0].size, 2);
    }

    #[test]
    fn annihilators_recover_the_maximal_ideals() {
        let rep = t2_rep();
        let (sp, sq) = t2_simples(&rep);
        let ann_p = rep.annihilator(&sp);
        let ann_q = rep.annihilator(&sq);
        assert_eq!(ann_p.dim(), 2);
        assert_eq!(ann_q.dim(), 2);
        assert_ne!(ann_p, ann_q);
        assert!(ann_p.space().contains_vec(&basis_vec(f2(), 3, 0)));
        assert!(ann_q.space().contains_vec(&basis_vec(f2(), 3, 2)));
        // The regular module is faithful.
        assert!(rep.annihilator(&rep.regular()).is_zero());
    }

    #[test]
    fn enumeration_counts_at_small_dimension() {
        let rep = t2_rep();
        // Dimension 1: the two simples only (the arrow must act as zero).
        let d1 = enumerate_modules(&rep, 1, 1 << 20).unwrap();
        assert_eq!(d1.len(), 2);
        // Dimension 2: 8 with zero arrow action (idempotent pairs) plus
        // 3 * 2 with nonzero arrow action = 14 explicit action tuples.
        let d2 = enumerate_modules(&rep, 2, 1 << 20).unwrap();
        assert_eq!(d2.len(), 14);
        // Every enumerated tuple is a genuine module (checked by new), and
        // the non-split extension appears.
        let e11a = {
            let reg = rep.regular();
            let s = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
            reg.submodule(&s).unwrap().0
        };
        assert!(d2
            .iter()
            .any(|m| isomorphism(m, &e11a, 1 << 16).found()));
    }

    #[test]
    fn submodule_lattice_of_the_extension() {
        let rep = t2_rep();
        let reg = rep.regular();
        let e11a = Subspace::from_matrix(&Matrix::from_i64(f2(), &[&[1, 0, 0], &[0, 1, 0]]));
        let (p, _) = reg.submodule(&e11a).unwrap();
        let subs = enumerate_submodule_spaces(&p, 1 << 10).unwrap();
        // 0, the socle, and the whole: an uniserial module of length 2.
        assert_eq!(subs.len(), 3);
    }

    #[test]
    fn restriction_along_the_semisimple_quotient() {
        let rep = t2_rep();
        let sa = rep.analysis();
        let bar = Arc::new(sa.semisimple.clone());
        let bar_reg = Module::regular(&bar);
        let restricted = Module::restrict_along(rep.alg(), &sa.to_semisimple.proj, &bar_reg);
        assert_eq!(restricted.dim(), 2);
        // The radical acts as zero after restriction.
        for r in sa.radical.space().basis_vectors() {
            assert!(restricted.act_of(&r).is_zero());
        }
        assert!(restricted.check().is_ok());
    }
}
