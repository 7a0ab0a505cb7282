use rayon::prelude::*;

use super::wedge::{insert, WedgeBasis};
use super::{wedge_weight, BasisLabel, FlatteningKind, FlatteningMatrix, MatrixMeta};
use crate::combinat::{k_subsets, SubsetIndexer};
use crate::linalg::{CooMatrix, Scalar};
use crate::polynomials::VarIndex;
use crate::{Error, Result};

/// The minor on rows `I` and columns `J`, both 1-based and increasing.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MinorIndex {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl MinorIndex {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>, n: usize) -> Result<Self> {
        let ok = |s: &[usize]| {
            s.windows(2).all(|w| w[0] < w[1]) && s.iter().all(|&x| (1..=n).contains(&x))
        };
        if rows.len() != cols.len() || !ok(&rows) || !ok(&cols) {
            return Err(Error::OutOfRange(format!(
                "invalid minor {rows:?} x {cols:?} for n={n}"
            )));
        }
        Ok(MinorIndex { rows, cols })
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }
}

/// Indexing of `(minor of size k, p-wedge)` pairs, minor-major.
#[derive(Debug, Clone)]
pub struct MinorBasis {
    n: usize,
    k: usize,
    subsets: SubsetIndexer,
    wedges: WedgeBasis,
}

impl MinorBasis {
    pub fn new(n: usize, k: usize, p: usize) -> Self {
        MinorBasis {
            n,
            k,
            subsets: SubsetIndexer::new(n, k),
            wedges: WedgeBasis::new(n * n, p),
        }
    }

    pub fn len(&self) -> usize {
        self.subsets.count() * self.subsets.count() * self.wedges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, rows: &[usize], cols: &[usize], wedge: &[u16]) -> usize {
        debug_assert_eq!(rows.len(), self.k);
        let zero_based = |s: &[usize]| s.iter().map(|&x| x - 1).collect::<Vec<_>>();
        let ri = self.subsets.rank(&zero_based(rows));
        let ci = self.subsets.rank(&zero_based(cols));
        (ri * self.subsets.count() + ci) * self.wedges.len() + self.wedges.index(wedge)
    }

    pub fn labels(&self) -> Vec<BasisLabel> {
        let subsets: Vec<Vec<usize>> = k_subsets(self.n, self.k)
            .into_iter()
            .map(|s| s.into_iter().map(|x| x + 1).collect())
            .collect();
        let wedges = self.wedges.elements();
        let mut out = Vec::with_capacity(self.len());
        for rows in &subsets {
            for cols in &subsets {
                for w in &wedges {
                    out.push(BasisLabel::Minor {
                        rows: rows.clone(),
                        cols: cols.clone(),
                        wedge: w.clone(),
                        n: self.n,
                    });
                }
            }
        }
        out
    }
}

fn check(n: usize, d: usize, p: usize) -> Result<()> {
    if p != 1 && p != 2 {
        return Err(Error::OutOfRange(format!("minor flattening needs p in {{1, 2}}, got {p}")));
    }
    if d == 0 || d >= n {
        return Err(Error::OutOfRange(format!("need 1 <= d <= n - 1, got d={d}, n={n}")));
    }
    Ok(())
}

pub fn minor_koszul_labels(n: usize, d: usize, p: usize) -> Result<(Vec<BasisLabel>, Vec<BasisLabel>)> {
    check(n, d, p)?;
    let k = n - d;
    Ok((
        MinorBasis::new(n, k - 1, p + 1).labels(),
        MinorBasis::new(n, k, p).labels(),
    ))
}

/// Image of `Delta^I_J (x) w` under the minor map:
/// `sum_{i in I, j in J} (-1)^(pos(i) + pos(j)) X^i_j ^ w (x) Delta^(I-i)_(J-j)`,
/// positions 1-based within `I` and `J`. Terms with `X^i_j` already in `w`
/// vanish; the wedge sign is folded into the returned coefficient.
pub fn minor_image_of_basis(
    n: usize,
    rows: &[usize],
    cols: &[usize],
    wedge: &[u16],
) -> Vec<(Vec<usize>, Vec<usize>, Vec<u16>, i32)> {
    let mut out = Vec::with_capacity(rows.len() * cols.len());
    for (a, &i) in rows.iter().enumerate() {
        for (b, &j) in cols.iter().enumerate() {
            let x = VarIndex::new(i, j).index(n) as u16;
            let Some((wsign, xw)) = insert(wedge, x) else {
                continue;
            };
            // (a + 1) + (b + 1) has the parity of a + b
            let lsign = if (a + b) % 2 == 0 { 1 } else { -1 };
            let mut r2 = rows.to_vec();
            r2.remove(a);
            let mut c2 = cols.to_vec();
            c2.remove(b);
            out.push((r2, c2, xw, lsign * wsign));
        }
    }
    out
}

/// Matrix of `wedge^(n-d) A (x) wedge^(n-d) B (x) wedge^p(A (x) B) ->
/// wedge^(n-d-1) A (x) wedge^(n-d-1) B (x) wedge^(p+1)(A (x) B)` in the bases
/// of minors times wedges.
pub fn minor_koszul_matrix(n: usize, d: usize, p: usize) -> Result<FlatteningMatrix> {
    let (row_labels, col_labels) = minor_koszul_labels(n, d, p)?;
    let k = n - d;
    let domain = MinorBasis::new(n, k, p);
    let codomain = MinorBasis::new(n, k - 1, p + 1);
    let subsets: Vec<Vec<usize>> = k_subsets(n, k)
        .into_iter()
        .map(|s| s.into_iter().map(|x| x + 1).collect())
        .collect();
    let wedges = WedgeBasis::new(n * n, p).elements();

    // one chunk per row subset I; chunks are concatenated in order
    let chunks: Vec<Vec<(u32, u32, Scalar)>> = subsets
        .par_iter()
        .map(|rows| {
            let mut out = Vec::new();
            for cols in &subsets {
                let weight_in = minor_weight(n, rows, cols);
                for w in &wedges {
                    let col = domain.index(rows, cols, w);
                    for (r2, c2, xw, sign) in minor_image_of_basis(n, rows, cols, w) {
                        let row = codomain.index(&r2, &c2, &xw);
                        let mut weight_out = minor_weight(n, &r2, &c2);
                        for (acc, x) in weight_out.iter_mut().zip(wedge_weight(&xw, n)) {
                            *acc += x;
                        }
                        let mut expect = weight_in.clone();
                        for (acc, x) in expect.iter_mut().zip(wedge_weight(w, n)) {
                            *acc += x;
                        }
                        assert_eq!(weight_out, expect, "minor map entry breaks the weight grading");
                        out.push((row as u32, col as u32, Scalar::Int(sign as i64)));
                    }
                }
            }
            out
        })
        .collect();

    let matrix = CooMatrix::from_triplets(row_labels.len(), col_labels.len(), chunks.into_iter().flatten())?;
    Ok(FlatteningMatrix {
        meta: minor_koszul_meta(n, d, p),
        row_labels,
        col_labels,
        matrix,
    })
}

pub fn minor_koszul_meta(n: usize, d: usize, p: usize) -> MatrixMeta {
    MatrixMeta {
        kind: FlatteningKind::Minor,
        polynomial: format!("det{n}"),
        n,
        d,
        p,
        detail: String::new(),
    }
}

fn minor_weight(n: usize, rows: &[usize], cols: &[usize]) -> Vec<i32> {
    let mut w = vec![0i32; 2 * n];
    for &i in rows {
        w[i - 1] += 1;
    }
    for &j in cols {
        w[n + j - 1] += 1;
    }
    w
}
