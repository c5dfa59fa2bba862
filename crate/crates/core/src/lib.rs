//! Exact computation in module categories over finite-dimensional algebras.
//!
//! The crate is organised bottom-up:
//!
//! * [`scalar`], [`matrix`], [`subspace`] — exact linear algebra over the
//!   rationals and prime fields, with canonical (RREF) subspace bases so
//!   equality questions are structural.
//! * [`poly`] — characteristic/minimal polynomials and enough univariate
//!   factorisation to split commutative semisimple pieces.
//! * [`algebra`] — finite-dimensional associative algebras given by
//!   structure constants: ideals, radicals, semisimple structure, lifted
//!   idempotents, quotients, corners, opposites, quiver presentations.
//! * [`module`] — finite-dimensional right modules: hom spaces, simples,
//!   socles and tops, composition series, annihilators, brute-force
//!   enumeration at small dimensions.
//! * [`resolve`] — projective covers and resolutions, injective envelopes
//!   and copresentations via vector-space duality, Ext dimensions, and the
//!   point functors attached to a simple module together with their first
//!   derived functors.
//! * [`closed`] — closed subspaces of the module category cut out by
//!   two-sided ideals: supports, the non-commutative product of closed
//!   subspaces, unions, intersections, and prime/point dictionaries.
//! * [`localize`] — open complements of closed subspaces: corner algebras,
//!   restriction and its adjoints, torsion and its first derived functor,
//!   containment tests, and the induced lattice of opens.
//! * [`graded`] — connected graded algebras truncated at a degree bound:
//!   Hilbert data, tails-equivalence, divisor pullbacks, blowup-style
//!   filtered constructions, and degree-zero localization.
//! * [`fixtures`] — the small worked examples used throughout the tests.
//!
//! Module elements are **row vectors** and all maps act on the right; see
//! [`matrix`] for the composition convention.

pub mod algebra;
pub mod closed;
pub mod error;
pub mod fixtures;
pub mod graded;
pub mod localize;
pub mod matrix;
pub mod module;
pub mod poly;
pub mod resolve;
pub mod scalar;
pub mod structure;
pub mod subspace;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use subspace::Subspace;
