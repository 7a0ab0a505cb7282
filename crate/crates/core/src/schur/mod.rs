//! Schur modules in the semistandard tableau basis and Pieri-type Young
//! flattenings between them.
//!
//! `S_lambda C^N` is modelled as the tensor product of the exterior powers
//! given by the columns of `lambda`, modulo the exchange relations; the
//! semistandard tableaux form a basis and [`straighten`] rewrites any
//! filling in it.

mod pieri;
mod tableau;

pub use pieri::{pi_shapes, pieri_flattening_matrix, pieri_labels, pieri_meta, pieri_target};
pub use tableau::{ssyt_enumerate, straighten, Tableau, TableauCombination};
