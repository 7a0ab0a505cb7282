use std::collections::HashMap;

use rayon::prelude::*;

use super::wedge::{insert, WedgeBasis};
use super::{monomial_weight, wedge_weight, BasisLabel, FlatteningKind, FlatteningMatrix, MatrixMeta};
use crate::combinat::monomials;
use crate::linalg::{CooMatrix, Scalar};
use crate::polynomials::{contract, monomial, Polynomial};
use crate::{Error, Result};

fn check_range(n: usize, e: usize, d: usize, p: usize) -> Result<()> {
    if d == 0 || d + 1 > e {
        return Err(Error::OutOfRange(format!(
            "need 1 <= d <= e - 1, got d={d}, e={e}"
        )));
    }
    if p + 1 > n * n {
        return Err(Error::OutOfRange(format!(
            "need p <= n^2 - 1, got p={p}, n={n}"
        )));
    }
    Ok(())
}

/// Row and column labels of the Koszul flattening of a degree-`e`
/// polynomial; columns are `(p-wedge, dual monomial of degree d)`, rows are
/// `(p+1-wedge, monomial of degree e-d-1)`, wedge-major in both cases.
pub fn full_koszul_labels(
    n: usize,
    e: usize,
    d: usize,
    p: usize,
) -> Result<(Vec<BasisLabel>, Vec<BasisLabel>)> {
    check_range(n, e, d, p)?;
    let m = n * n;
    let label = |wedges: Vec<Vec<u16>>, monos: &[Vec<u16>]| {
        wedges
            .into_iter()
            .flat_map(|w| {
                monos.iter().map(move |mono| BasisLabel::Koszul {
                    wedge: w.clone(),
                    monomial: mono.clone(),
                    n,
                })
            })
            .collect::<Vec<_>>()
    };
    let rows = label(WedgeBasis::new(m, p + 1).elements(), &monomials(m, e - d - 1));
    let cols = label(WedgeBasis::new(m, p).elements(), &monomials(m, d));
    Ok((rows, cols))
}

/// Matrix of `wedge^p V (x) S^d V* -> wedge^(p+1) V (x) S^(e-d-1) V`,
/// `w (x) a -> sum_x (x ^ w) (x) d/dx (a _| P)`, with `V` spanned by the
/// `n^2` variables.
pub fn full_koszul_matrix(poly: &Polynomial, d: usize, p: usize) -> Result<FlatteningMatrix> {
    let (n, e) = (poly.n(), poly.degree());
    let (row_labels, col_labels) = full_koszul_labels(n, e, d, p)?;
    let m = n * n;
    let duals = monomials(m, d);
    let targets = monomials(m, e - d - 1);
    let target_index: HashMap<&[u16], usize> = targets
        .iter()
        .enumerate()
        .map(|(i, t)| (t.as_slice(), i))
        .collect();
    let wedges_in = WedgeBasis::new(m, p);
    let wedges_out = WedgeBasis::new(m, p + 1);
    let in_elems = wedges_in.elements();
    let graded = poly.is_weight_homogeneous();
    let poly_weight = poly
        .terms()
        .keys()
        .next()
        .map(|t| monomial_weight(t, n))
        .unwrap_or_else(|| vec![0; 2 * n]);

    let per_dual: Vec<Vec<(u32, u32, Scalar)>> = duals
        .par_iter()
        .enumerate()
        .map(|(a_idx, alpha)| -> Result<Vec<(u32, u32, Scalar)>> {
            let q = contract(&monomial(n, alpha.clone())?, poly)?;
            if q.is_zero() {
                return Ok(Vec::new());
            }
            let derivs: Vec<Polynomial> = (0..m).map(|x| q.partial(x)).collect();
            let mut out = Vec::new();
            for (w_idx, w) in in_elems.iter().enumerate() {
                let col = w_idx * duals.len() + a_idx;
                for (x, dq) in derivs.iter().enumerate() {
                    if dq.is_zero() {
                        continue;
                    }
                    let Some((sign, xw)) = insert(w, x as u16) else {
                        continue;
                    };
                    let base = wedges_out.index(&xw) * targets.len();
                    for (mono, coeff) in dq.terms() {
                        let row = base + target_index[mono.as_slice()];
                        if graded {
                            check_weight(n, w, alpha, &xw, mono, &poly_weight);
                        }
                        let v = if sign > 0 { coeff.clone() } else { -coeff.clone() };
                        out.push((row as u32, col as u32, Scalar::from_rational(v)));
                    }
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let matrix = CooMatrix::from_triplets(
        row_labels.len(),
        col_labels.len(),
        per_dual.into_iter().flatten(),
    )?;
    Ok(FlatteningMatrix {
        meta: full_koszul_meta(poly, d, p),
        row_labels,
        col_labels,
        matrix,
    })
}

pub fn full_koszul_meta(poly: &Polynomial, d: usize, p: usize) -> MatrixMeta {
    MatrixMeta {
        kind: FlatteningKind::Full,
        polynomial: poly.fingerprint(),
        n: poly.n(),
        d,
        p,
        detail: format!("degree={}", poly.degree()),
    }
}

/// Row weight minus column weight must equal the weight of the polynomial.
fn check_weight(n: usize, w: &[u16], alpha: &[u16], xw: &[u16], mono: &[u16], pw: &[i32]) {
    let col: Vec<i32> = wedge_weight(w, n)
        .iter()
        .zip(monomial_weight(alpha, n))
        .map(|(a, b)| a - b)
        .collect();
    let row: Vec<i32> = wedge_weight(xw, n)
        .iter()
        .zip(monomial_weight(mono, n))
        .map(|(a, b)| a + b)
        .collect();
    for k in 0..2 * n {
        assert_eq!(row[k] - col[k], pw[k], "flattening entry breaks the weight grading");
    }
}
