//! Exact ground-field arithmetic: the rationals and prime fields.
//!
//! Every object in the crate carries a [`Field`] tag and all arithmetic is
//! exact — rationals are arbitrary-precision [`BigRational`]s, prime-field
//! elements are canonical residues.  There are no floats anywhere, so rank,
//! kernel, and equality questions have exact answers.
//!
//! Mixing scalars from different fields is a programming error and panics;
//! public constructors ([`crate::matrix::Matrix::from_rows`], the parsers in
//! the CLI crate, ...) validate homogeneity up front so the panic is
//! unreachable from checked inputs.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// The ground field: the rationals, or integers modulo a prime.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Field {
    /// The field of rational numbers.
    Q,
    /// The prime field with `p` elements.
    Fp(u64),
}

impl Field {
    /// Validate a prime-field modulus.
    pub fn prime(p: u64) -> Result<Field> {
        if is_prime(p) {
            Ok(Field::Fp(p))
        } else {
            Err(Error::NotPrime(p))
        }
    }

    /// The characteristic: `0` for the rationals, `p` otherwise.
    pub fn characteristic(self) -> u64 {
        match self {
            Field::Q => 0,
            Field::Fp(p) => p,
        }
    }

    /// The zero scalar of this field.
    pub fn zero(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::zero()),
            Field::Fp(p) => Scalar::Fp { p, v: 0 },
        }
    }

    /// The unit scalar of this field.
    pub fn one(self) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::one()),
            Field::Fp(p) => Scalar::Fp { p, v: 1 % p },
        }
    }

    /// The image of the integer `n` in this field.
    pub fn from_i64(self, n: i64) -> Scalar {
        match self {
            Field::Q => Scalar::Q(BigRational::from_integer(BigInt::from(n))),
            Field::Fp(p) => {
                let r = n.rem_euclid(p as i64) as u64;
                Scalar::Fp { p, v: r }
            }
        }
    }

    /// Parse a scalar from its decimal-string form (`"5"`, `"-3/7"`).
    ///
    /// Over a prime field a fraction `a/b` means `a * b^{-1} mod p`.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let (num_str, den_str) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), Some(d.trim())),
            None => (s, None),
        };
        let num = BigInt::from_str(num_str)
            .map_err(|_| Error::BadScalar(format!("cannot parse {s:?}")))?;
        let den = match den_str {
            Some(d) => {
                BigInt::from_str(d).map_err(|_| Error::BadScalar(format!("cannot parse {s:?}")))?
            }
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(Error::BadScalar(format!("zero denominator in {s:?}")));
        }
        match self {
            Field::Q => Ok(Scalar::Q(BigRational::new(num, den))),
            Field::Fp(p) => {
                let pb = BigInt::from(p);
                let nv = to_residue(&num, &pb, p);
                let dv = to_residue(&den, &pb, p);
                if dv == 0 {
                    return Err(Error::BadScalar(format!(
                        "denominator of {s:?} vanishes mod {p}"
                    )));
                }
                Ok(Scalar::Fp {
                    p,
                    v: mul_mod(nv, inv_mod(dv, p), p),
                })
            }
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F{p}"),
        }
    }
}

fn to_residue(n: &BigInt, pb: &BigInt, p: u64) -> u64 {
    let mut r = n % pb;
    if r.is_negative() {
        r += pb;
    }
    let digits = r.to_u64_digits().1;
    match digits.first() {
        Some(&d) => d % p,
        None => 0,
    }
}

/// An exact scalar, tagged with its field.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Scalar {
    /// A rational number in lowest terms.
    Q(BigRational),
    /// The residue `v` in `[0, p)` modulo the prime `p`.
    Fp { p: u64, v: u64 },
}

impl Scalar {
    /// The field this scalar lives in.
    pub fn field(&self) -> Field {
        match self {
            Scalar::Q(_) => Field::Q,
            Scalar::Fp { p, .. } => Field::Fp(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_zero(),
            Scalar::Fp { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Q(r) => r.is_one(),
            Scalar::Fp { p, v } => *v == 1 % *p,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a + b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) if p == q => Scalar::Fp {
                p: *p,
                v: add_mod(*a, *b, *p),
            },
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Q(a), Scalar::Q(b)) => Scalar::Q(a * b),
            (Scalar::Fp { p, v: a }, Scalar::Fp { p: q, v: b }) if p == q => Scalar::Fp {
                p: *p,
                v: mul_mod(*a, *b, *p),
            },
            _ => panic!("scalar field mismatch: {} vs {}", self.field(), other.field()),
        }
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Q(a) => Scalar::Q(-a),
            Scalar::Fp { p, v } => Scalar::Fp {
                p: *p,
                v: if *v == 0 { 0 } else { p - v },
            },
        }
    }

    /// Multiplicative inverse.  Panics on zero — gate with [`Self::is_zero`].
    pub fn inv(&self) -> Scalar {
        match self {
            Scalar::Q(a) => {
                assert!(!a.is_zero(), "inverse of zero");
                Scalar::Q(a.recip())
            }
            Scalar::Fp { p, v } => {
                assert!(*v != 0, "inverse of zero");
                Scalar::Fp {
                    p: *p,
                    v: inv_mod(*v, *p),
                }
            }
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    /// Canonical decimal-string form: `"5"`, `"-3/7"`, residues as `"v"`.
    pub fn to_string_canonical(&self) -> String {
        match self {
            Scalar::Q(r) => {
                if r.denom().is_one() {
                    r.numer().to_string()
                } else {
                    format!("{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Fp { v, .. } => v.to_string(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_canonical())
    }
}

// ---------------------------------------------------------------------------
// u64 modular arithmetic
// ---------------------------------------------------------------------------

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = (a as u128 + b as u128) % p as u128;
    s as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    (a as u128 * b as u128 % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime via Fermat.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Deterministic Miller–Rabin, exact for all `u64` inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d & 1 == 0 {
        d >>= 1;
        s += 1;
    }
    // These witnesses decide primality for every n < 2^64.
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_small_and_large() {
        assert!(is_prime(2));
        assert!(is_prime(3));
        assert!(is_prime(1_000_003));
        assert!(!is_prime(1));
        assert!(!is_prime(0));
        assert!(!is_prime(1_000_001)); // 101 * 9901
        assert!(is_prime((1u64 << 61) - 1)); // Mersenne
    }

    #[test]
    fn parse_and_format_round_trip() {
        let q = Field::Q;
        for s in ["0", "5", "-3/7", "22/7", "-1"] {
            let x = q.parse(s).unwrap();
            assert_eq!(x.to_string_canonical(), s);
        }
        // Non-canonical inputs normalise.
        assert_eq!(q.parse("4/8").unwrap().to_string_canonical(), "1/2");
        assert_eq!(q.parse("3/-6").unwrap().to_string_canonical(), "-1/2");

        let f5 = Field::prime(5).unwrap();
        assert_eq!(f5.parse("7").unwrap().to_string_canonical(), "2");
        assert_eq!(f5.parse("-1").unwrap().to_string_canonical(), "4");
        // 1/2 = 3 mod 5.
        assert_eq!(f5.parse("1/2").unwrap().to_string_canonical(), "3");
        assert!(f5.parse("1/5").is_err());
        assert!(Field::prime(6).is_err());
    }

    #[test]
    fn field_arithmetic() {
        let f2 = Field::Fp(2);
        let one = f2.one();
        assert!(one.add(&one).is_zero());
        assert!(one.neg().is_one()); // -1 = 1 in characteristic 2

        let q = Field::Q;
        let a = q.parse("2/3").unwrap();
        let b = q.parse("3/2").unwrap();
        assert!(a.mul(&b).is_one());
        assert_eq!(a.inv().to_string_canonical(), "3/2");

        let f7 = Field::Fp(7);
        for v in 1..7 {
            let x = f7.from_i64(v);
            assert!(x.mul(&x.inv()).is_one());
        }
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixed_fields_panic() {
        let _ = Field::Q.one().add(&Field::Fp(2).one());
    }
}
