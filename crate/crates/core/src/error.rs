//! Error type shared by every layer of the crate.
//!
//! Operations that can fail for a *mathematical* reason (mismatched fields,
//! a map that is not a module map, a non-central element passed where a
//! central one is required, ...) return [`Error`] rather than panicking, so
//! callers — in particular the CLI — can report the defect precisely.
//! Panics are reserved for internal invariant violations, i.e. bugs.

use thiserror::Error;

use crate::scalar::Field;

/// Everything that can go wrong when constructing or combining objects.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live over different ground fields.
    #[error("ground-field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),

    /// A scalar string (or modulus) failed to parse or validate.
    #[error("bad scalar: {0}")]
    BadScalar(String),

    /// The requested modulus is not prime.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Matrix or vector dimensions do not line up.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// A multiplication table is not associative.
    #[error("multiplication table is not associative at basis triple ({i}, {j}, {k})")]
    NotAssociative { i: usize, j: usize, k: usize },

    /// The designated unit does not act as a two-sided identity.
    #[error("designated unit fails on basis element {0}")]
    BadUnit(usize),

    /// A claimed module structure violates an algebra relation.
    #[error("module action violates the algebra structure: {0}")]
    NotAModule(String),

    /// A linear map that was required to intertwine the actions does not.
    #[error("map does not commute with the action of basis element {0}")]
    NotAModuleMap(usize),

    /// A subspace that had to be stable under the action (or under
    /// two-sided multiplication) is not.
    #[error("subspace is not stable: {0}")]
    NotStable(String),

    /// An element required to be idempotent, central, or regular is not.
    #[error("element is not {0}")]
    BadElement(&'static str),

    /// The algebra is not split over its ground field, and the requested
    /// operation is only defined for split algebras.
    #[error("algebra is not split over its ground field: {0}")]
    NotSplit(String),

    /// A graded computation ran out of its truncation window before the
    /// answer stabilised.
    #[error("truncation bound {bound} too small: {reason}")]
    InsufficientTruncation { bound: usize, reason: String },

    /// Quiver or presentation input is malformed.
    #[error("bad presentation: {0}")]
    BadPresentation(String),

    /// A named object is missing or an input file is malformed.
    #[error("bad input: {0}")]
    BadInput(String),

    /// An enumeration exceeded its configured search budget.
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
