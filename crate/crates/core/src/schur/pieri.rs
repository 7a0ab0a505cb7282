use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use super::tableau::{ssyt_enumerate, straighten_with, Tableau};
use crate::combinat::distinct_arrangements;
use crate::flattening::{BasisLabel, FlatteningKind, FlatteningMatrix, MatrixMeta};
use crate::linalg::{CooMatrix, Scalar};
use crate::partitions::Partition;
use crate::polynomials::Polynomial;
use crate::{Error, Result};

/// The shape obtained by adding one box at the end of each listed row
/// (1-based, rows of the result), and the added cells as 0-based
/// `(row, col)` in the order the rows were listed.
pub fn pieri_target(shape: &Partition, target_rows: &[usize]) -> Result<(Partition, Vec<(usize, usize)>)> {
    let mut sorted = target_rows.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.first() == Some(&0) {
        return Err(Error::ShapeMismatch(format!("invalid target rows {target_rows:?}")));
    }
    let height = shape.length().max(*sorted.last().unwrap_or(&0));
    let mut parts: Vec<usize> = (0..height).map(|i| shape.part(i)).collect();
    for &r in target_rows {
        parts[r - 1] += 1;
    }
    let target = Partition::new(parts).map_err(|_| {
        Error::ShapeMismatch(format!(
            "adding boxes to rows {target_rows:?} of {shape} is not a partition"
        ))
    })?;
    let cells: Vec<(usize, usize)> = target_rows.iter().map(|&r| (r - 1, shape.part(r - 1))).collect();
    let mut cols: Vec<usize> = cells.iter().map(|c| c.1).collect();
    cols.sort_unstable();
    if cols.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::ShapeMismatch(format!(
            "rows {target_rows:?} put two new boxes in one column of {target}"
        )));
    }
    Ok((target, cells))
}

/// `pi_n = ((n-1)^(n+1), ..., 1^(n+1))`, `(n, pi_n)` and the rows
/// `1 + j(n+1)` that receive the `n` new boxes.
pub fn pi_shapes(n: usize) -> Result<(Partition, Partition, Vec<usize>)> {
    if n < 2 {
        return Err(Error::OutOfRange("pi_n needs n >= 2".into()));
    }
    let mut parts = Vec::new();
    for v in (1..n).rev() {
        parts.extend(std::iter::repeat(v).take(n + 1));
    }
    let pi = Partition::new(parts.clone())?;
    parts.insert(0, n);
    let tilde = Partition::new(parts)?;
    let rows = (0..n).map(|j| 1 + j * (n + 1)).collect();
    Ok((pi, tilde, rows))
}

fn labels(tabs: &[Tableau]) -> Vec<BasisLabel> {
    tabs.iter()
        .map(|t| BasisLabel::Tableau { columns: t.columns() })
        .collect()
}

pub fn pieri_labels(
    shape: &Partition,
    target_rows: &[usize],
    n: usize,
) -> Result<(Vec<BasisLabel>, Vec<BasisLabel>)> {
    let (target, _) = pieri_target(shape, target_rows)?;
    Ok((
        labels(&ssyt_enumerate(&target, n)),
        labels(&ssyt_enumerate(shape, n)),
    ))
}

/// The labeled Pieri map `S_shape C^N -> S_target C^N` of `phi`: each
/// semistandard `T` goes to the sum over monomials of `phi` and over all
/// distinct arrangements of the monomial's variables in the new boxes,
/// straightened.
pub fn pieri_flattening_matrix(
    phi: &Polynomial,
    shape: &Partition,
    target_rows: &[usize],
    n: usize,
) -> Result<FlatteningMatrix> {
    if phi.num_vars() != n {
        return Err(Error::ShapeMismatch(format!(
            "polynomial has {} variables, expected {n}",
            phi.num_vars()
        )));
    }
    if phi.degree() != target_rows.len() {
        return Err(Error::DegreeMismatch(format!(
            "degree {} polynomial but {} new boxes",
            phi.degree(),
            target_rows.len()
        )));
    }
    let (target, cells) = pieri_target(shape, target_rows)?;
    let cols = ssyt_enumerate(shape, n);
    let rows = ssyt_enumerate(&target, n);
    let row_index: HashMap<&[u8], usize> = rows.iter().enumerate().map(|(i, t)| (t.word(), i)).collect();

    // for each cell of the target in reading order: Some(k) for the k-th new box
    let target_lens = target.conjugate();
    let mut layout: Vec<Option<usize>> = Vec::new();
    for (c, &l) in target_lens.parts().iter().enumerate() {
        for r in 0..l {
            layout.push(cells.iter().position(|&cell| cell == (r, c)));
        }
    }
    let cell_of: Vec<(usize, usize)> = target_lens
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(c, &l)| (0..l).map(move |r| (r, c)))
        .collect();

    let monomials: Vec<(Vec<u8>, &BigRational)> = phi
        .terms()
        .iter()
        .map(|(exps, coeff)| {
            let mut vars = Vec::new();
            for (v, &e) in exps.iter().enumerate() {
                vars.extend(std::iter::repeat(v as u8 + 1).take(e as usize));
            }
            (vars, coeff)
        })
        .collect();

    let per_col: Vec<Vec<(u32, u32, Scalar)>> = cols
        .par_iter()
        .enumerate()
        .map(|(ci, t)| {
            let mut column: BTreeMap<usize, BigRational> = BTreeMap::new();
            for (vars, coeff) in &monomials {
                let mut expected = t.content();
                expected.extend(vars);
                expected.sort_unstable();
                let mut images: BTreeMap<usize, i128> = BTreeMap::new();
                for arrangement in distinct_arrangements(vars) {
                    let word: Vec<u8> = layout
                        .iter()
                        .zip(&cell_of)
                        .map(|(slot, &(r, c))| match slot {
                            Some(k) => arrangement[*k],
                            None => t.get(r, c),
                        })
                        .collect();
                    let filling = Tableau::from_columns(&target, &split(&word, target_lens.parts()))
                        .expect("filling matches target shape");
                    for (tab, v) in straighten_with(&filling, 1) {
                        assert_eq!(tab.content(), expected, "Pieri image changed the weight");
                        *images.entry(row_index[tab.word()]).or_insert(0) += v;
                    }
                }
                for (r, v) in images {
                    if v != 0 {
                        *column.entry(r).or_insert_with(BigRational::zero) +=
                            *coeff * BigRational::from_integer(BigInt::from(v));
                    }
                }
            }
            column
                .into_iter()
                .filter(|(_, v)| !v.is_zero())
                .map(|(r, v)| (r as u32, ci as u32, Scalar::from_rational(v)))
                .collect()
        })
        .collect();

    let matrix = CooMatrix::from_triplets(rows.len(), cols.len(), per_col.into_iter().flatten())?;
    Ok(FlatteningMatrix {
        meta: pieri_meta(phi, shape, target_rows, n),
        row_labels: labels(&rows),
        col_labels: labels(&cols),
        matrix,
    })
}

pub fn pieri_meta(phi: &Polynomial, shape: &Partition, target_rows: &[usize], n: usize) -> MatrixMeta {
    MatrixMeta {
        kind: FlatteningKind::Pieri,
        polynomial: phi.fingerprint(),
        n,
        d: phi.degree(),
        p: target_rows.len(),
        detail: format!("shape={shape} rows={target_rows:?}"),
    }
}

fn split(word: &[u8], lens: &[usize]) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(lens.len());
    let mut start = 0;
    for &l in lens {
        out.push(word[start..start + l].to_vec());
        start += l;
    }
    out
}
