//! Univariate polynomials over the ground fields, plus the factorisation
//! routines the structure theory needs.
//!
//! The crate uses polynomials in two places: characteristic-polynomial
//! coefficients feed the radical computation, and minimal polynomials of
//! algebra elements are split into coprime factors to manufacture
//! idempotents (Chinese-remainder style).  Over a prime field we factor
//! completely (squarefree + distinct-degree + equal-degree splitting); over
//! the rationals we take squarefree parts and rational roots, which is all
//! the split-algebra pipeline requires — anything that stays unsplit is
//! reported as such rather than classified.

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};

use crate::matrix::Matrix;
use crate::scalar::{Field, Scalar};

/// A polynomial `c[0] + c[1] x + ...` with no trailing zero coefficients.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Poly {
    field: Field,
    c: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut c: Vec<Scalar>) -> Poly {
        while c.last().is_some_and(Scalar::is_zero) {
            c.pop();
        }
        Poly { field, c }
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, c: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::new(field, vec![field.one()])
    }

    pub fn x(field: Field) -> Poly {
        Poly::new(field, vec![field.zero(), field.one()])
    }

    /// The monomial `a x^k`.
    pub fn monomial(field: Field, a: Scalar, k: usize) -> Poly {
        let mut c = vec![field.zero(); k + 1];
        c[k] = a;
        Poly::new(field, c)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; zero polynomial answers `None`.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn leading(&self) -> Scalar {
        self.c.last().cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i).add(&other.coeff(i)));
        }
        Poly::new(self.field, c)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            c.push(self.coeff(i).sub(&other.coeff(i)));
        }
        Poly::new(self.field, c)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                c[i + j] = c[i + j].add(&a.mul(b));
            }
        }
        Poly::new(self.field, c)
    }

    pub fn scale(&self, a: &Scalar) -> Poly {
        Poly::new(self.field, self.c.iter().map(|x| x.mul(a)).collect())
    }

    /// Monic rescaling of a nonzero polynomial.
    pub fn monic(&self) -> Poly {
        assert!(!self.is_zero(), "monic of zero");
        self.scale(&self.leading().inv())
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn divmod(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead_inv = d.leading().inv();
        let mut rem = self.c.clone();
        let mut quo = vec![self.field.zero(); self.c.len().saturating_sub(dd)];
        while rem.len() > dd || (rem.len() == dd + 1 && dd == 0 && !rem.is_empty()) {
            if rem.len() < dd + 1 {
                break;
            }
            let k = rem.len() - 1 - dd;
            let f = rem.last().unwrap().mul(&lead_inv);
            if !f.is_zero() {
                for i in 0..=dd {
                    let s = f.mul(&d.c[i]);
                    rem[k + i] = rem[k + i].sub(&s);
                }
                quo[k] = f;
            }
            // The leading term is now exactly cancelled.
            debug_assert!(rem.last().unwrap().is_zero());
            rem.pop();
        }
        (Poly::new(self.field, quo), Poly::new(self.field, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divmod(d).1
    }

    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divmod(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic greatest common divisor (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic()
        }
    }

    /// Extended gcd: returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn xgcd(&self, other: &Poly) -> (Poly, Poly, Poly) {
        let (mut a, mut b) = (self.clone(), other.clone());
        let (mut sa, mut sb) = (Poly::one(self.field), Poly::zero(self.field));
        let (mut ta, mut tb) = (Poly::zero(self.field), Poly::one(self.field));
        while !b.is_zero() {
            let (q, r) = a.divmod(&b);
            let ns = sa.sub(&q.mul(&sb));
            let nt = ta.sub(&q.mul(&tb));
            a = b;
            b = r;
            sa = sb;
            sb = ns;
            ta = tb;
            tb = nt;
        }
        if a.is_zero() {
            return (a, sa, ta);
        }
        let li = a.leading().inv();
        (a.scale(&li), sa.scale(&li), ta.scale(&li))
    }

    pub fn derivative(&self) -> Poly {
        if self.c.len() <= 1 {
            return Poly::zero(self.field);
        }
        let mut c = Vec::with_capacity(self.c.len() - 1);
        for (i, a) in self.c.iter().enumerate().skip(1) {
            c.push(a.mul(&self.field.from_i64(i as i64)));
        }
        Poly::new(self.field, c)
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for a in self.c.iter().rev() {
            acc = acc.mul(x).add(a);
        }
        acc
    }

    /// `self^e mod m` by binary exponentiation (`e` may be enormous).
    pub fn pow_mod(&self, e: &BigUint, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field);
        let bits = e.bits();
        for i in 0..bits {
            if e.bit(i) {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
        }
        acc
    }
}

// ---------------------------------------------------------------------------
// Characteristic polynomial (Hessenberg reduction, field-generic)
// ---------------------------------------------------------------------------

/// The characteristic polynomial `det(x I - m)`, exact over either field.
///
/// The matrix is first brought to upper Hessenberg form by a similarity,
/// then the determinant follows from the classical three-term recurrence on
/// leading principal blocks.
pub fn char_poly(m: &Matrix) -> Poly {
    assert_eq!(m.rows(), m.cols(), "characteristic polynomial of a non-square matrix");
    let n = m.rows();
    let field = m.field();
    if n == 0 {
        return Poly::one(field);
    }
    let mut h = m.clone();
    // Similarity reduction to upper Hessenberg form.
    for c in 0..n.saturating_sub(2) {
        let pivot_row = ((c + 1)..n).find(|&r| !h[(r, c)].is_zero());
        let Some(pr) = pivot_row else { continue };
        if pr != c + 1 {
            for j in 0..n {
                let tmp = h[(pr, j)].clone();
                let other = h[(c + 1, j)].clone();
                h[(pr, j)] = other;
                h[(c + 1, j)] = tmp;
            }
            for i in 0..n {
                let tmp = h[(i, pr)].clone();
                let other = h[(i, c + 1)].clone();
                h[(i, pr)] = other;
                h[(i, c + 1)] = tmp;
            }
        }
        let pinv = h[(c + 1, c)].inv();
        for r in (c + 2)..n {
            if h[(r, c)].is_zero() {
                continue;
            }
            let f = h[(r, c)].mul(&pinv);
            for j in 0..n {
                let s = f.mul(&h[(c + 1, j)]);
                h[(r, j)] = h[(r, j)].sub(&s);
            }
            for i in 0..n {
                let s = f.mul(&h[(i, r)]);
                h[(i, c + 1)] = h[(i, c + 1)].add(&s);
            }
        }
    }
    // p_k(x) = (x - h[k-1][k-1]) p_{k-1}(x)
    //          - sum_i h[i-1][k-1] (prod_{j=i..k-1} s_j) p_{i-1}(x),
    // where s_j = h[j][j-1] is the subdiagonal.
    let mut p: Vec<Poly> = vec![Poly::one(field)];
    for k in 1..=n {
        let lin = Poly::new(field, vec![h[(k - 1, k - 1)].neg(), field.one()]);
        let mut pk = lin.mul(&p[k - 1]);
        let mut sub_prod = field.one();
        for i in (1..k).rev() {
            // product of subdiagonal entries s_i .. s_{k-1}
            sub_prod = sub_prod.mul(&h[(i, i - 1)]);
            let coeff = h[(i - 1, k - 1)].mul(&sub_prod);
            if !coeff.is_zero() {
                pk = pk.sub(&p[i - 1].scale(&coeff));
            }
        }
        p.push(pk);
    }
    p.pop().unwrap()
}

/// The `j`-th elementary-symmetric coefficient of `m`'s eigenvalues, i.e.
/// `(-1)^j` times the coefficient of `x^{n-j}` in the characteristic
/// polynomial.  `e_1` is the trace, `e_n` the determinant.
pub fn char_coeff(m: &Matrix, j: usize) -> Scalar {
    let n = m.rows();
    assert!(j <= n, "coefficient index out of range");
    let cp = char_poly(m);
    let c = cp.coeff(n - j);
    if j % 2 == 0 {
        c
    } else {
        c.neg()
    }
}

// ---------------------------------------------------------------------------
// Factorisation over prime fields
// ---------------------------------------------------------------------------

/// Squarefree decomposition: pairwise-coprime monic `(g, multiplicity)`
/// pairs with `f = lead * prod g^m`.  Correct in characteristic `p` (the
/// `f' = 0` branch extracts `p`-th roots, which is coefficient surgery over
/// a prime field).
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let f = f.monic();
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let p = field.characteristic() as usize;
    let mut out = Vec::new();
    let df = f.derivative();
    if df.is_zero() {
        // f = g(x^p); over the prime field the p-th root just contracts
        // exponents.
        let root = pth_root(&f, p);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df);
    let mut w = f.div_exact(&c);
    let mut i = 1usize;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.div_exact(&y);
        if !z.is_one() {
            out.push((z, i));
        }
        c = c.div_exact(&y);
        w = y;
        i += 1;
    }
    if !c.is_one() {
        let root = pth_root(&c, p);
        for (g, m) in squarefree_decomposition(&root) {
            out.push((g, m * p));
        }
    }
    out
}

fn pth_root(f: &Poly, p: usize) -> Poly {
    assert!(p > 0, "p-th root in characteristic zero");
    let field = f.field();
    let deg = f.degree().unwrap_or(0);
    let mut c = Vec::with_capacity(deg / p + 1);
    for k in (0..=deg).step_by(p) {
        c.push(f.coeff(k));
    }
    // Exponents not divisible by p must vanish when f' = 0.
    debug_assert!((0..=deg).all(|k| k % p == 0 || f.coeff(k).is_zero()));
    Poly::new(field, c)
}

/// Complete factorisation over a prime field: monic irreducible factors
/// with multiplicities, deterministic for a given input.
pub fn factor_fp(f: &Poly) -> Vec<(Poly, usize)> {
    let Field::Fp(p) = f.field() else {
        panic!("factor_fp over the rationals")
    };
    let mut out: Vec<(Poly, usize)> = Vec::new();
    for (g, m) in squarefree_decomposition(f) {
        for irr in factor_squarefree_fp(&g, p) {
            out.push((irr, m));
        }
    }
    out.sort_by(|a, b| {
        a.0.degree()
            .cmp(&b.0.degree())
            .then_with(|| cmp_poly(&a.0, &b.0))
    });
    out
}

fn cmp_poly(a: &Poly, b: &Poly) -> std::cmp::Ordering {
    let da = a.degree().unwrap_or(0);
    for k in (0..=da).rev() {
        let (x, y) = (a.coeff(k), b.coeff(k));
        let (Scalar::Fp { v: xv, .. }, Scalar::Fp { v: yv, .. }) = (&x, &y) else {
            return std::cmp::Ordering::Equal;
        };
        match xv.cmp(yv) {
            std::cmp::Ordering::Equal => {}
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

fn factor_squarefree_fp(g: &Poly, p: u64) -> Vec<Poly> {
    let field = g.field();
    let mut factors = Vec::new();
    let mut g = g.monic();
    // Distinct-degree splitting: gcd with x^{p^d} - x collects all
    // irreducible factors of degree d.
    let mut h = Poly::x(field);
    let mut d = 0usize;
    while g.degree().unwrap_or(0) > 0 {
        d += 1;
        if 2 * d > g.degree().unwrap() {
            // What is left is a single irreducible factor.
            factors.push(g.clone());
            break;
        }
        h = h.pow_mod(&BigUint::from(p), &g);
        let diff = h.sub(&Poly::x(field));
        let gd = g.gcd(&diff);
        if gd.degree().unwrap_or(0) > 0 {
            for irr in split_equal_degree(&gd, d, p) {
                factors.push(irr);
            }
            g = g.div_exact(&gd);
            h = h.rem(&g);
        }
    }
    factors
}

/// Cantor–Zassenhaus equal-degree splitting, driven by a deterministic
/// sequence of trial elements so identical inputs factor identically.
fn split_equal_degree(f: &Poly, d: usize, p: u64) -> Vec<Poly> {
    let field = f.field();
    let deg = f.degree().unwrap();
    if deg == d {
        return vec![f.clone()];
    }
    let mut rng_state: u64 = 0x9e37_79b9_7f4a_7c15;
    for a in f.coeffs() {
        if let Scalar::Fp { v, .. } = a {
            rng_state = rng_state
                .wrapping_mul(0x100_0000_01b3)
                .wrapping_add(*v)
                .rotate_left(17);
        }
    }
    loop {
        // Deterministic pseudo-random trial polynomial of degree < deg.
        let mut c = Vec::with_capacity(deg);
        for _ in 0..deg {
            rng_state = rng_state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            c.push(Scalar::Fp { p, v: (rng_state >> 11) % p });
        }
        let a = Poly::new(field, c);
        if a.degree().is_none() {
            continue;
        }
        let g = if p == 2 {
            // Trace map sum_{i<d} a^{2^i} splits in characteristic 2.
            let mut t = a.rem(f);
            let mut s = t.clone();
            for _ in 1..d {
                t = t.mul(&t).rem(f);
                s = s.add(&t);
            }
            f.gcd(&s)
        } else {
            let e = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
            let b = a.pow_mod(&e, f);
            f.gcd(&b.sub(&Poly::one(field)))
        };
        let dg = g.degree().unwrap_or(0);
        if dg > 0 && dg < deg {
            let mut out = split_equal_degree(&g, d, p);
            out.extend(split_equal_degree(&f.div_exact(&g), d, p));
            return out;
        }
    }
}

// ---------------------------------------------------------------------------
// Rational roots (for splitting over Q)
// ---------------------------------------------------------------------------

/// All rational roots of `f`, each returned once.
///
/// Uses the rational-root theorem on the primitive integer form.  Divisor
/// lists come from trial division with a budget; for the small split
/// rational algebras this crate targets the budget is never reached, and a
/// miss merely leaves an algebra reported as unsplit.
pub fn rational_roots(f: &Poly) -> Vec<Scalar> {
    use num_bigint::BigInt;
    assert_eq!(f.field(), Field::Q, "rational_roots over a prime field");
    if f.is_zero() {
        return Vec::new();
    }
    // Clear denominators.
    let mut lcm = BigInt::one();
    for a in f.coeffs() {
        if let Scalar::Q(r) = a {
            let d = r.denom();
            let g = num_integer::Integer::gcd(&lcm, d);
            lcm = &lcm / g * d;
        }
    }
    let ints: Vec<BigInt> = f
        .coeffs()
        .iter()
        .map(|a| match a {
            Scalar::Q(r) => r.numer() * (&lcm / r.denom()),
            _ => unreachable!(),
        })
        .collect();
    // Strip powers of x.
    let shift = ints.iter().position(|c| !c.is_zero()).unwrap_or(0);
    let mut roots: Vec<Scalar> = Vec::new();
    if shift > 0 {
        roots.push(Field::Q.zero());
    }
    let ints = &ints[shift..];
    if ints.len() <= 1 {
        return roots;
    }
    let a0 = ints[0].abs();
    let an = ints[ints.len() - 1].abs();
    let num_divs = small_divisors(&a0);
    let den_divs = small_divisors(&an);
    for n in &num_divs {
        for d in &den_divs {
            for sign in [1i64, -1] {
                let cand = Scalar::Q(num_rational::BigRational::new(
                    n * BigInt::from(sign),
                    d.clone(),
                ));
                if f.eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Divisors of `n` found by trial division up to a budget; always contains 1
/// and, when fully factored, all divisors.
fn small_divisors(n: &num_bigint::BigInt) -> Vec<num_bigint::BigInt> {
    use num_bigint::BigInt;
    let mut divs = vec![BigInt::one()];
    if n.is_zero() {
        return divs;
    }
    let mut rest = n.clone();
    let mut primes: Vec<(BigInt, u32)> = Vec::new();
    let mut p = BigInt::from(2);
    let budget = BigInt::from(1_000_000u64);
    while &p * &p <= rest && p <= budget {
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest = rest / &p;
            e += 1;
        }
        if e > 0 {
            primes.push((p.clone(), e));
        }
        p += 1;
    }
    if rest > BigInt::one() {
        primes.push((rest, 1));
    }
    for (p, e) in primes {
        let mut next = Vec::new();
        for d in &divs {
            let mut pe = BigInt::one();
            for _ in 0..=e {
                next.push(d * &pe);
                pe = pe * &p;
            }
        }
        divs = next;
        if divs.len() > 10_000 {
            break;
        }
    }
    divs.sort();
    divs.dedup();
    divs
}
