//! Sparse matrices of Koszul-Young flattenings.
//!
//! [`full_koszul_matrix`] works for any polynomial; [`minor_koszul_matrix`]
//! builds the smaller map on spans of minors used for the determinant, and
//! [`hwv`] holds the highest weight vectors that certify its image.

pub mod cache;
pub mod hwv;
mod koszul;
mod minor;
pub mod wedge;

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::linalg::CooMatrix;
use crate::polynomials::VarIndex;

pub use koszul::{full_koszul_labels, full_koszul_matrix, full_koszul_meta};
pub use minor::{
    minor_image_of_basis, minor_koszul_labels, minor_koszul_matrix, minor_koszul_meta, MinorBasis,
    MinorIndex,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FlatteningKind {
    Full,
    Minor,
    Pieri,
}

impl fmt::Display for FlatteningKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FlatteningKind::Full => "full",
            FlatteningKind::Minor => "minor",
            FlatteningKind::Pieri => "pieri",
        })
    }
}

/// What a matrix is the flattening of. For Pieri maps `d` is the degree of
/// the polynomial, `p` the number of rows the new boxes go to, and `detail`
/// records the shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixMeta {
    pub kind: FlatteningKind,
    pub polynomial: String,
    pub n: usize,
    pub d: usize,
    pub p: usize,
    #[serde(default)]
    pub detail: String,
}

/// A basis vector of a flattening's domain or codomain.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// `wedge (x) monomial`; the monomial is an exponent vector.
    Koszul { wedge: Vec<u16>, monomial: Vec<u16>, n: usize },
    /// `wedge (x) Delta^rows_cols`, indices 1-based.
    Minor {
        rows: Vec<usize>,
        cols: Vec<usize>,
        wedge: Vec<u16>,
        n: usize,
    },
    /// A semistandard tableau listed column by column.
    Tableau { columns: Vec<Vec<u8>> },
}

fn write_wedge(f: &mut fmt::Formatter<'_>, wedge: &[u16], n: usize) -> fmt::Result {
    if wedge.is_empty() {
        return f.write_str("1");
    }
    for (k, &v) in wedge.iter().enumerate() {
        if k > 0 {
            f.write_str("^")?;
        }
        write!(f, "{}", VarIndex::from_index(v as usize, n))?;
    }
    Ok(())
}

fn write_set(f: &mut fmt::Formatter<'_>, set: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (k, v) in set.iter().enumerate() {
        if k > 0 {
            f.write_str(",")?;
        }
        write!(f, "{v}")?;
    }
    f.write_str("}")
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Koszul { wedge, monomial, n } => {
                write_wedge(f, wedge, *n)?;
                f.write_str(" (x) ")?;
                let mut wrote = false;
                for (idx, &e) in monomial.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if wrote {
                        f.write_str("*")?;
                    }
                    write!(f, "{}", VarIndex::from_index(idx, *n))?;
                    if e > 1 {
                        write!(f, "^{e}")?;
                    }
                    wrote = true;
                }
                if !wrote {
                    f.write_str("1")?;
                }
                Ok(())
            }
            BasisLabel::Minor {
                rows,
                cols,
                wedge,
                n,
            } => {
                write_wedge(f, wedge, *n)?;
                f.write_str(" (x) D")?;
                write_set(f, rows)?;
                write_set(f, cols)
            }
            BasisLabel::Tableau { columns } => {
                f.write_str("[")?;
                for (k, col) in columns.iter().enumerate() {
                    if k > 0 {
                        f.write_str("|")?;
                    }
                    for v in col {
                        write!(f, "{v}")?;
                    }
                }
                f.write_str("]")
            }
        }
    }
}

/// Hash of the ordered row and column labels; ties a cached matrix to the
/// basis it was built in.
pub fn basis_hash(rows: &[BasisLabel], cols: &[BasisLabel]) -> String {
    let mut h = Sha256::new();
    for (tag, labels) in [("rows", rows), ("cols", cols)] {
        h.update(format!("{tag} {}\n", labels.len()));
        for l in labels {
            h.update(l.to_string());
            h.update("\n");
        }
    }
    crate::linalg::hex_digest(&h.finalize()[..16])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlatteningMatrix {
    pub meta: MatrixMeta,
    pub row_labels: Vec<BasisLabel>,
    pub col_labels: Vec<BasisLabel>,
    pub matrix: CooMatrix,
}

impl FlatteningMatrix {
    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn nnz(&self) -> usize {
        self.matrix.nnz()
    }

    pub fn basis_hash(&self) -> String {
        basis_hash(&self.row_labels, &self.col_labels)
    }

    /// Image of a sparse domain vector given as `(column, coefficient)` pairs.
    pub fn apply(&self, v: &[(usize, BigRational)]) -> BTreeMap<usize, BigRational> {
        let coeff: BTreeMap<usize, &BigRational> = v.iter().map(|(c, x)| (*c, x)).collect();
        let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (r, c, val) in self.matrix.entries() {
            if let Some(x) = coeff.get(&(*c as usize)) {
                *out.entry(*r as usize).or_insert_with(BigRational::zero) += val.to_rational() * *x;
            }
        }
        out.retain(|_, x| !x.is_zero());
        out
    }
}

/// `(A-weight, B-weight)` of a wedge of variables, as one vector of length `2n`.
pub(crate) fn wedge_weight(wedge: &[u16], n: usize) -> Vec<i32> {
    let mut w = vec![0i32; 2 * n];
    for &v in wedge {
        w[v as usize / n] += 1;
        w[n + v as usize % n] += 1;
    }
    w
}

/// Exponent-weighted version of [`wedge_weight`] for monomials.
pub(crate) fn monomial_weight(monomial: &[u16], n: usize) -> Vec<i32> {
    let mut w = vec![0i32; 2 * n];
    for (v, &e) in monomial.iter().enumerate() {
        w[v / n] += e as i32;
        w[n + v % n] += e as i32;
    }
    w
}
