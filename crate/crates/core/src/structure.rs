//! Semisimple structure: block decomposition, primitive idempotents, and
//! their lifts through the radical.
//!
//! [`analyze`] quotients by the radical, splits the semisimple quotient into
//! blocks by refining idempotents (minimal polynomials of well-chosen
//! elements, split into coprime factors, turned into idempotents by the
//! Chinese remainder theorem), and then lifts a complete orthogonal family
//! of primitive idempotents back to the original algebra.
//!
//! Splitting is *certified*, never assumed: the `split` flag is set only
//! when every primitive corner is one-dimensional and the block dimensions
//! check out.  Over a prime field the factorisation machinery is complete,
//! so the flag is exact (what stays unsplit is a genuine division-ring
//! block).  Over the rationals an exotic block can defeat the candidate
//! search; the flag then stays `false` and the operations that need a split
//! algebra refuse, which is the conservative direction.

use crate::algebra::{basis_vec, Algebra, Ideal, QuotientMap};
use crate::error::{Error, Result};
use crate::poly::{factor_fp, rational_roots, squarefree_decomposition, Poly};
use crate::scalar::{Field, Scalar};
use crate::subspace::Subspace;

/// One matrix block of the semisimple quotient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// Number of primitive idempotents in the block.
    pub size: usize,
    /// Dimension over the ground field of a primitive corner (1 iff split).
    pub endo_dim: usize,
    /// Total dimension of the block inside the semisimple quotient.
    pub dim: usize,
}

/// The full structure report for an algebra.
#[derive(Clone, Debug)]
pub struct StructureAnalysis {
    pub radical: Ideal,
    /// The semisimple quotient on canonical coordinates.
    pub semisimple: Algebra,
    /// Projection onto the quotient and its canonical linear section.
    pub to_semisimple: QuotientMap,
    /// Certified split over the ground field?
    pub split: bool,
    pub blocks: Vec<Block>,
    /// Central primitive idempotents of the semisimple quotient, one per
    /// block, in quotient coordinates.
    pub central_idempotents: Vec<Vec<Scalar>>,
    /// A complete orthogonal family of primitive idempotents lifted to the
    /// original algebra; they sum to 1.
    pub idempotents: Vec<Vec<Scalar>>,
    /// Block index of each lifted idempotent.
    pub idempotent_block: Vec<usize>,
    /// Kernels of the projections onto the blocks, pulled back: these are
    /// exactly the prime (maximal two-sided) ideals.
    pub primes: Vec<Ideal>,
}

impl StructureAnalysis {
    /// Error unless the algebra was certified split.
    pub fn require_split(&self) -> Result<()> {
        if self.split {
            Ok(())
        } else {
            let dims: Vec<usize> = self.blocks.iter().map(|b| b.endo_dim).collect();
            Err(Error::NotSplit(format!(
                "primitive corner dimensions {dims:?}"
            )))
        }
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// The lifted idempotents belonging to one block.
    pub fn block_idempotents(&self, block: usize) -> Vec<&Vec<Scalar>> {
        self.idempotents
            .iter()
            .zip(&self.idempotent_block)
            .filter(|&(_, &b)| b == block)
            .map(|(e, _)| e)
            .collect()
    }
}

/// Analyze an algebra: radical, blocks, idempotents, primes.
pub fn analyze(a: &Algebra) -> StructureAnalysis {
    let radical = a.radical();
    let (semisimple, to_semisimple) = a.quotient(&radical);
    let bar = &semisimple;
    let n = bar.dim();

    // Central primitive idempotents: refine the unit inside the centre.
    let center = bar.center();
    let center_basis = center.basis_vectors();
    let central_idempotents = refine_idempotent(bar, bar.unit().to_vec(), &center_basis);

    // Within each block, refine to primitive idempotents using the whole
    // algebra as the candidate pool.
    let full_basis: Vec<Vec<Scalar>> = (0..n).map(|i| basis_vec(bar.field(), n, i)).collect();
    let mut blocks = Vec::new();
    let mut bar_idempotents: Vec<Vec<Scalar>> = Vec::new();
    let mut idempotent_block = Vec::new();
    let mut split = true;
    for (bi, c) in central_idempotents.iter().enumerate() {
        let block_dim = Subspace::from_matrix(&bar.lmm(c)).dim();
        let prims = refine_idempotent(bar, c.clone(), &full_basis);
        let endo_dim = corner_dim(bar, &prims[0]);
        for e in &prims {
            debug_assert_eq!(corner_dim(bar, e), endo_dim);
            bar_idempotents.push(e.clone());
            idempotent_block.push(bi);
        }
        if endo_dim != 1 || prims.len() * prims.len() * endo_dim != block_dim {
            // Either a genuine division-ring block or an unsplit leftover;
            // both mean we cannot certify a split.
            split = false;
        }
        blocks.push(Block {
            size: prims.len(),
            endo_dim,
            dim: block_dim,
        });
    }

    // Lift the family through the radical: corner trick for orthogonality,
    // closing with 1 - (sum of the others) so the family sums exactly to 1.
    let idempotents = lift_idempotent_family(a, &to_semisimple, &bar_idempotents);

    // Prime ideals: preimage of "all other blocks" for each block.
    let mut primes = Vec::new();
    for bi in 0..blocks.len() {
        let mut gens: Vec<Vec<Scalar>> = radical.space().basis_vectors();
        for (bj, c) in central_idempotents.iter().enumerate() {
            if bj == bi {
                continue;
            }
            for row in Subspace::from_matrix(&bar.lmm(c)).basis_vectors() {
                gens.push(to_semisimple.lift(&row));
            }
        }
        let space = Subspace::from_vectors(a.field(), a.dim(), &gens).expect("prime generators");
        let ideal = a.as_ideal(space).expect("block kernel is an ideal");
        primes.push(ideal);
    }

    StructureAnalysis {
        radical,
        semisimple,
        to_semisimple,
        split,
        blocks,
        central_idempotents,
        idempotents,
        idempotent_block,
        primes,
    }
}

fn corner_dim(a: &Algebra, e: &[Scalar]) -> usize {
    Subspace::from_matrix(&a.lmm(e).mul(&a.rmm(e))).dim()
}

// ---------------------------------------------------------------------------
// Idempotent refinement in a semisimple algebra
// ---------------------------------------------------------------------------

/// Split the idempotent `c` into orthogonal idempotents summing to `c`, as
/// finely as the candidate pool allows.  Candidates are drawn from
/// `c * z * c` for `z` in `pool` (so passing the centre keeps everything
/// central), then pairwise products, then a deterministic pseudo-random
/// sequence of combinations.
fn refine_idempotent(a: &Algebra, c: Vec<Scalar>, pool: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    debug_assert!(a.is_idempotent(&c));
    let n = a.dim();
    let corner_vectors: Vec<Vec<Scalar>> = pool
        .iter()
        .map(|z| a.mul_vec(&a.mul_vec(&c, z), &c))
        .collect();
    let corner = Subspace::from_vectors(a.field(), n, &corner_vectors).expect("corner vectors");
    if corner.dim() <= 1 {
        return vec![c];
    }
    let basis = corner.basis_vectors();
    let c_span = Subspace::from_vectors(a.field(), n, std::slice::from_ref(&c)).expect("span of c");

    let try_split = |x: &Vec<Scalar>| -> Option<Vec<Vec<Scalar>>> {
        if x.iter().all(Scalar::is_zero) || c_span.contains_vec(x) {
            return None;
        }
        let mu = min_poly(a, &c, x);
        let comps = coprime_components(&mu);
        if comps.len() < 2 {
            return None;
        }
        Some(crt_idempotents(a, &c, x, &mu, &comps))
    };

    let mut found: Option<Vec<Vec<Scalar>>> = None;
    'search: {
        for x in &basis {
            if let Some(parts) = try_split(x) {
                found = Some(parts);
                break 'search;
            }
        }
        for s in 0..basis.len() {
            for t in 0..basis.len() {
                let p = a.mul_vec(&basis[s], &basis[t]);
                if let Some(parts) = try_split(&p) {
                    found = Some(parts);
                    break 'search;
                }
            }
        }
        // Deterministic pseudo-random combinations of the corner basis.
        let mut state: u64 = 0x5851_f42d_4c95_7f2d ^ ((n as u64) << 32) ^ basis.len() as u64;
        for _ in 0..256 {
            let mut x = vec![a.field().zero(); n];
            for b in &basis {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let coeff = a.field().from_i64(((state >> 33) % 5) as i64);
                for (xi, bi) in x.iter_mut().zip(b) {
                    *xi = xi.add(&coeff.mul(bi));
                }
            }
            if let Some(parts) = try_split(&x) {
                found = Some(parts);
                break 'search;
            }
        }
    }

    match found {
        None => vec![c],
        Some(parts) => parts
            .into_iter()
            .flat_map(|e| refine_idempotent(a, e, pool))
            .collect(),
    }
}

/// Minimal polynomial of `x` in the corner algebra with unit `c` (so the
/// zeroth power is `c`).
fn min_poly(a: &Algebra, c: &[Scalar], x: &[Scalar]) -> Poly {
    let n = a.dim();
    let field = a.field();
    let mut powers: Vec<Vec<Scalar>> = vec![c.to_vec()];
    let mut span = Subspace::from_vectors(field, n, &powers).expect("power span");
    loop {
        let next = a.mul_vec(powers.last().unwrap(), x);
        if span.contains_vec(&next) {
            // next = sum lambda_j * powers[j]; solve in the row space.
            let mat = crate::matrix::Matrix::from_rows(field, powers.clone()).expect("powers");
            let sol = crate::matrix::solve_left(&mat, &next).expect("consistent by membership");
            let lambda = sol.particular.expect("membership guarantees a solution");
            let k = powers.len();
            let mut coeffs = vec![field.zero(); k + 1];
            for (j, l) in lambda.iter().enumerate() {
                coeffs[j] = l.neg();
            }
            coeffs[k] = field.one();
            return Poly::new(field, coeffs);
        }
        span = span.sum(&Subspace::from_vectors(field, n, std::slice::from_ref(&next)).unwrap());
        powers.push(next);
    }
}

/// Pairwise-coprime components of a minimal polynomial, as fine as the
/// factorisation machinery goes: complete over a prime field; squarefree
/// pieces refined by rational roots over the rationals.
fn coprime_components(mu: &Poly) -> Vec<Poly> {
    match mu.field() {
        Field::Fp(_) => {
            let mut comps = Vec::new();
            for (f, m) in factor_fp(mu) {
                let mut pow = Poly::one(mu.field());
                for _ in 0..m {
                    pow = pow.mul(&f);
                }
                comps.push(pow);
            }
            comps
        }
        Field::Q => {
            let mut comps = Vec::new();
            for (g, m) in squarefree_decomposition(mu) {
                let mut pieces = Vec::new();
                let mut rest = g.clone();
                for r in rational_roots(&g) {
                    let lin = Poly::new(Field::Q, vec![r.neg(), Field::Q.one()]);
                    rest = rest.div_exact(&lin);
                    pieces.push(lin);
                }
                if rest.degree().unwrap_or(0) > 0 {
                    pieces.push(rest);
                }
                for p in pieces {
                    let mut pow = Poly::one(Field::Q);
                    for _ in 0..m {
                        pow = pow.mul(&p);
                    }
                    comps.push(pow);
                }
            }
            comps
        }
    }
}

/// Chinese-remainder idempotents: for coprime `mu = prod q_t`, evaluate at
/// `x` the polynomial that is 1 mod `q_t` and 0 mod the others.
fn crt_idempotents(
    a: &Algebra,
    c: &[Scalar],
    x: &[Scalar],
    mu: &Poly,
    comps: &[Poly],
) -> Vec<Vec<Scalar>> {
    let field = a.field();
    let mut out = Vec::with_capacity(comps.len());
    for q in comps {
        let u = mu.div_exact(q);
        let (g, s, _) = u.xgcd(q);
        assert!(g.is_one(), "components are coprime");
        let eps = s.mul(&u).rem(mu);
        out.push(eval_poly_in_corner(a, c, x, &eps));
    }
    // Runtime sanity: orthogonal family summing to c.
    let mut sum = vec![field.zero(); a.dim()];
    for e in &out {
        assert!(a.is_idempotent(e), "CRT element is not idempotent");
        for (si, ei) in sum.iter_mut().zip(e) {
            *si = si.add(ei);
        }
    }
    assert_eq!(sum, c.to_vec(), "CRT idempotents do not sum to the unit");
    for i in 0..out.len() {
        for j in 0..out.len() {
            if i != j {
                let p = a.mul_vec(&out[i], &out[j]);
                assert!(p.iter().all(Scalar::is_zero), "CRT idempotents overlap");
            }
        }
    }
    out
}

/// Evaluate a polynomial at `x` inside the corner with unit `c` (Horner,
/// with the constant term landing on `c`).
fn eval_poly_in_corner(a: &Algebra, c: &[Scalar], x: &[Scalar], p: &Poly) -> Vec<Scalar> {
    let field = a.field();
    let n = a.dim();
    let mut acc = vec![field.zero(); n];
    let deg = match p.degree() {
        None => return acc,
        Some(d) => d,
    };
    for k in (0..=deg).rev() {
        acc = a.mul_vec(&acc, x);
        let coeff = p.coeff(k);
        if !coeff.is_zero() {
            for (ai, ci) in acc.iter_mut().zip(c) {
                *ai = ai.add(&coeff.mul(ci));
            }
        }
    }
    acc
}

// ---------------------------------------------------------------------------
// Lifting through the radical
// ---------------------------------------------------------------------------

/// Lift an orthogonal family of idempotents of the semisimple quotient to
/// an orthogonal family in `a` summing to 1, by successive corner lifts.
fn lift_idempotent_family(
    a: &Algebra,
    map: &QuotientMap,
    bar_family: &[Vec<Scalar>],
) -> Vec<Vec<Scalar>> {
    let field = a.field();
    let n = a.dim();
    let m = bar_family.len();
    let mut lifted: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    let mut s = vec![field.zero(); n]; // sum of the lifts so far
    for (t, ebar) in bar_family.iter().enumerate() {
        if t + 1 == m {
            // Close the family exactly.
            let mut last = a.unit().to_vec();
            for (li, si) in last.iter_mut().zip(&s) {
                *li = li.sub(si);
            }
            lifted.push(last);
            break;
        }
        // Work inside the corner (1-s) A (1-s) so orthogonality to the
        // previous lifts is automatic.
        let mut one_minus_s = a.unit().to_vec();
        for (oi, si) in one_minus_s.iter_mut().zip(&s) {
            *oi = oi.sub(si);
        }
        let x = map.lift(ebar);
        let mut y = a.mul_vec(&a.mul_vec(&one_minus_s, &x), &one_minus_s);
        y = newton_idempotent(a, y);
        for (si, yi) in s.iter_mut().zip(&y) {
            *si = si.add(yi);
        }
        lifted.push(y);
    }
    // Verify everything we promised.
    let mut total = vec![field.zero(); n];
    for (t, e) in lifted.iter().enumerate() {
        assert!(a.is_idempotent(e), "lift {t} is not idempotent");
        assert_eq!(
            map.apply(e),
            bar_family[t],
            "lift {t} has the wrong image in the semisimple quotient"
        );
        for (ti, ei) in total.iter_mut().zip(e) {
            *ti = ti.add(ei);
        }
    }
    assert_eq!(total, a.unit().to_vec(), "lifted family does not sum to 1");
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let p = a.mul_vec(&lifted[i], &lifted[j]);
                assert!(p.iter().all(Scalar::is_zero), "lifted family overlaps");
            }
        }
    }
    lifted
}

/// Iterate an idempotent-refining polynomial map until exactly idempotent.
/// In characteristic p the Frobenius `y -> y^p` does the job inside the
/// commutative subalgebra generated by `y`; in characteristic zero the
/// Newton step `y -> 3y^2 - 2y^3` converges quadratically.
fn newton_idempotent(a: &Algebra, mut y: Vec<Scalar>) -> Vec<Scalar> {
    let bound = a.dim() + 2;
    for _ in 0..=bound {
        if a.is_idempotent(&y) {
            return y;
        }
        y = match a.field() {
            Field::Fp(p) => {
                let mut acc = y.clone();
                for _ in 1..p {
                    acc = a.mul_vec(&acc, &y);
                }
                acc
            }
            Field::Q => {
                let y2 = a.mul_vec(&y, &y);
                let y3 = a.mul_vec(&y2, &y);
                let three = Field::Q.from_i64(3);
                let two = Field::Q.from_i64(2);
                y2.iter()
                    .zip(&y3)
                    .map(|(a2, a3)| three.mul(a2).sub(&two.mul(a3)))
                    .collect()
            }
        };
    }
    panic!("idempotent lifting did not converge");
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn f2() -> Field {
        Field::Fp(2)
    }

    #[test]
    fn triangular_splits_into_two_points() {
        let a = fixtures::t2();
        let sa = analyze(&a);
        assert!(sa.split);
        assert_eq!(sa.blocks.len(), 2);
        for b in &sa.blocks {
            assert_eq!((b.size, b.endo_dim, b.dim), (1, 1, 1));
        }
        assert_eq!(sa.idempotents.len(), 2);
        assert_eq!(sa.primes.len(), 2);
        // Both primes contain the radical and have dimension 2.
        for p in &sa.primes {
            assert_eq!(p.dim(), 2);
            assert!(p.space().contains(sa.radical.space()));
        }
        assert_ne!(sa.primes[0], sa.primes[1]);
    }

    #[test]
    fn product_algebra_and_local_algebra() {
        let sa = analyze(&fixtures::kk());
        assert!(sa.split);
        assert_eq!(sa.blocks.len(), 2);
        assert!(sa.radical.is_zero());

        let sd = analyze(&fixtures::dual());
        assert!(sd.split);
        assert_eq!(sd.blocks.len(), 1);
        assert_eq!(sd.idempotents, vec![sd.to_semisimple.lift(&sd.central_idempotents[0])]);
        // The unique idempotent of a local algebra is 1.
        assert_eq!(sd.idempotents[0], fixtures::dual().unit().to_vec());
    }

    #[test]
    fn group_algebra_of_c2_depends_on_characteristic() {
        // F3[x]/(x^2-1) splits as two points; F2[x]/(x^2-1) is local.
        let f3 = Field::Fp(3);
        let a3 = fixtures::algebra_from_i64(
            f3,
            &["one", "g"],
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]],
            &[1, 0],
        );
        let sa3 = analyze(&a3);
        assert!(sa3.split);
        assert_eq!(sa3.blocks.len(), 2);
        assert!(sa3.radical.is_zero());

        let a2 = fixtures::algebra_from_i64(
            f2(),
            &["one", "g"],
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]],
            &[1, 0],
        );
        let sa2 = analyze(&a2);
        assert_eq!(sa2.blocks.len(), 1);
        assert_eq!(sa2.radical.dim(), 1);
    }

    #[test]
    fn full_matrix_algebra_is_one_split_block() {
        // M_2(F2) on the matrix-unit basis e11, e12, e21, e22.
        let a = fixtures::algebra_from_i64(
            f2(),
            &["e11", "e12", "e21", "e22"],
            &[
                &[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 0, 0], &[0, 0, 0, 0]],
                &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 1, 0, 0]],
                &[&[0, 0, 1, 0], &[0, 0, 0, 1], &[0, 0, 0, 0], &[0, 0, 0, 0]],
                &[&[0, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, 1]],
            ],
            &[1, 0, 0, 1],
        );
        let sa = analyze(&a);
        assert!(sa.split);
        assert!(sa.radical.is_zero());
        assert_eq!(sa.blocks, vec![Block { size: 2, endo_dim: 1, dim: 4 }]);
        assert_eq!(sa.idempotents.len(), 2);
        assert_eq!(sa.primes.len(), 1);
        assert!(sa.primes[0].is_zero());
    }

    #[test]
    fn field_extensions_are_reported_not_classified() {
        // F4 over F2: one block with a 2-dimensional corner.
        let f4 = fixtures::algebra_from_i64(
            f2(),
            &["one", "w"],
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 1]]],
            &[1, 0],
        );
        let sa = analyze(&f4);
        assert!(!sa.split);
        assert_eq!(sa.blocks, vec![Block { size: 1, endo_dim: 2, dim: 2 }]);

        // Q[x]/(x^2 - 2) stays whole; Q[x]/(x^2 - 1) splits rationally.
        let q = Field::Q;
        let sqrt2 = fixtures::algebra_from_i64(
            q,
            &["one", "s"],
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[2, 0]]],
            &[1, 0],
        );
        assert!(!analyze(&sqrt2).split);
        let c2 = fixtures::algebra_from_i64(
            q,
            &["one", "g"],
            &[&[&[1, 0], &[0, 1]], &[&[0, 1], &[1, 0]]],
            &[1, 0],
        );
        let sc2 = analyze(&c2);
        assert!(sc2.split);
        assert_eq!(sc2.blocks.len(), 2);
    }

    #[test]
    fn lifted_idempotents_respect_the_radical() {
        let a = fixtures::t2();
        let sa = analyze(&a);
        // Lifts are idempotent, orthogonal, sum to 1 (asserted inside), and
        // project onto distinct central idempotents of the quotient.
        let im0 = sa.to_semisimple.apply(&sa.idempotents[0]);
        let im1 = sa.to_semisimple.apply(&sa.idempotents[1]);
        assert_ne!(im0, im1);
    }
}
