//! Exact Koszul-Young flattenings and symmetric border rank lower bounds.
//!
//! The crate builds the matrices of Koszul and Young flattenings for
//! polynomials in the `n^2` entries of a generic matrix (determinant,
//! permanent, powers of linear forms, or arbitrary input), computes their
//! exact ranks over prime fields and the rationals, and turns those ranks
//! into certified lower bounds via `ceil(rank(F(P)) / rank(F(x^e)))`.
//!
//! Module map:
//!
//! * [`partitions`]: partitions, Schur module dimensions, Pieri and Cauchy
//!   decompositions used to predict flattening images.
//! * [`polynomials`]: exact homogeneous polynomials and apolarity contraction.
//! * [`flattening`]: Koszul flattening matrices (general and minor-indexed)
//!   and the highest weight vector checks.
//! * [`linalg`]: exact rank engines (sparse modular, fraction-free rational).
//! * [`schur`]: semistandard tableaux, straightening, and the Pieri
//!   flattening between Schur modules.
//! * [`bounds`]: closed-form bounds, certificates and reference values.
//! * [`pipeline`]: polynomial, flattening, rank and certificate in one call.

pub mod bounds;
pub mod combinat;
pub mod error;
pub mod flattening;
pub mod linalg;
pub mod partitions;
pub mod pipeline;
pub mod polynomials;
pub mod schur;

pub use error::{Error, Result};
