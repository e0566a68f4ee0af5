//! Clifford algebra kernel for dimensions 0 through 6.
//!
//! The crate is organised around a dense bitmask-blade multivector type over a
//! pluggable scalar ring ([`ring::Ring`]), with:
//!
//! - [`algebra`]: geometric product, grade operations, involutions and duals
//!   for arbitrary diagonal metrics;
//! - [`expr`]: determinant-style product expressions and the per-dimension
//!   expression catalog;
//! - [`inverse`]: determinant, adjugate and inverse in dimensions 0-5, plus
//!   the scalar-blade special case;
//! - [`oracle`]: verification against the left-regular matrix representation
//!   with an exact fraction-free determinant;
//! - [`symbolic`]: exact expansion of determinant expressions over
//!   indeterminate coefficients (term counting, coefficient extraction);
//! - [`group`]: the grade-negation operator group, its quotient by
//!   {identity, inversion, reverse, conjugate}, Cayley tables and the
//!   value-class classification;
//! - [`search`]: exhaustive searches over grade-negated expression spaces,
//!   contribution tables and per-class product counts.

pub mod algebra;
pub mod expr;
pub mod group;
pub mod inverse;
pub mod oracle;
pub mod ring;
pub mod search;
pub mod symbolic;

mod error;

pub use error::{Error, Result};

/// Maximum supported dimension. The search and quotient-group machinery runs
/// up to 6; determinants exist only up to 5.
pub const MAX_DIM: usize = 6;

/// Maximum dimension with a determinant / adjugate / inverse.
pub const MAX_DET_DIM: usize = 5;
