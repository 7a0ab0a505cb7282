//! Highest weight vectors for the irreducible summands of the minor-map
//! domains, and the check that the minor map does not kill them.
//!
//! Each vector is the projection into `wedge^p(A (x) B) (x) wedge^k A (x)
//! wedge^k B` (with `k = n - d`) of a highest weight vector for one
//! summand. A nonzero image certifies, by Schur's lemma and multiplicity
//! one, that the whole summand survives.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::minor::{minor_image_of_basis, MinorBasis};
use super::wedge::normalize;
use super::BasisLabel;
use crate::partitions::Partition;
use crate::polynomials::VarIndex;
use crate::{Error, Result};

/// The eight summands with a displayed vector; `P1*` for the `p = 1` map,
/// `P2*` for `p = 2`. `P2F` is the `A <-> B` mirror of `P2E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum LemmaId {
    P1TwoOne,
    P1Column,
    P2A,
    P2B,
    P2C,
    P2D,
    P2E,
    P2F,
}

impl LemmaId {
    pub const ALL: [LemmaId; 8] = [
        LemmaId::P1TwoOne,
        LemmaId::P1Column,
        LemmaId::P2A,
        LemmaId::P2B,
        LemmaId::P2C,
        LemmaId::P2D,
        LemmaId::P2E,
        LemmaId::P2F,
    ];

    pub fn p(&self) -> usize {
        match self {
            LemmaId::P1TwoOne | LemmaId::P1Column => 1,
            _ => 2,
        }
    }

    /// `(lambda, mu)` of the summand `S_lambda A (x) S_mu B`, for `k = n - d`.
    pub fn module(&self, k: usize) -> Result<(Partition, Partition)> {
        let hook = |first: usize, ones: usize| Partition::hook(first, ones);
        let two_two = |ones: usize| {
            let mut parts = vec![2, 2];
            parts.extend(std::iter::repeat(1).take(ones));
            Partition::new(parts)
        };
        let need = |ok: bool| {
            if ok {
                Ok(())
            } else {
                Err(Error::OutOfRange(format!("summand of {self} needs n - d >= 2")))
            }
        };
        Ok(match self {
            LemmaId::P1TwoOne => (hook(2, k - 1), hook(2, k - 1)),
            LemmaId::P1Column => (hook(2, k - 1), Partition::column(k + 1)),
            LemmaId::P2A => (hook(3, k - 1), Partition::column(k + 2)),
            LemmaId::P2B => (hook(3, k - 1), hook(2, k)),
            LemmaId::P2C => {
                need(k >= 2)?;
                (hook(3, k - 1), two_two(k - 2)?)
            }
            LemmaId::P2D => (hook(2, k), hook(2, k)),
            LemmaId::P2E => {
                need(k >= 2)?;
                (two_two(k - 2)?, hook(2, k))
            }
            LemmaId::P2F => {
                need(k >= 2)?;
                (hook(2, k), two_two(k - 2)?)
            }
        })
    }
}

impl fmt::Display for LemmaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LemmaId::P1TwoOne => "p1_21",
            LemmaId::P1Column => "p1_1s",
            LemmaId::P2A => "p2_a",
            LemmaId::P2B => "p2_b",
            LemmaId::P2C => "p2_c",
            LemmaId::P2D => "p2_d",
            LemmaId::P2E => "p2_e",
            LemmaId::P2F => "p2_f",
        })
    }
}

impl FromStr for LemmaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LemmaId::ALL
            .into_iter()
            .find(|l| l.to_string() == s)
            .ok_or_else(|| Error::Parse(format!("unknown lemma id {s:?}")))
    }
}

/// Key of a term `wedge (x) Delta^rows_cols`.
pub type TermKey = (Vec<usize>, Vec<usize>, Vec<u16>);

/// A sparse vector in a minor-map basis, integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinorVector {
    pub n: usize,
    pub terms: BTreeMap<TermKey, i64>,
}

impl MinorVector {
    fn new(n: usize) -> Self {
        MinorVector {
            n,
            terms: BTreeMap::new(),
        }
    }

    /// Adds `coeff * x_1 ^ ... ^ x_p (x) Delta^rows_cols`; the variables may
    /// come in any order.
    fn add(&mut self, coeff: i64, vars: &[(usize, usize)], rows: Vec<usize>, cols: Vec<usize>) {
        let idx: Vec<u16> = vars
            .iter()
            .map(|&(i, j)| VarIndex::new(i, j).index(self.n) as u16)
            .collect();
        if let Some((sign, w)) = normalize(&idx) {
            self.add_key(coeff * sign as i64, (rows, cols, w));
        }
    }

    fn add_key(&mut self, coeff: i64, key: TermKey) {
        let slot = self.terms.entry(key.clone()).or_insert(0);
        *slot += coeff;
        if *slot == 0 {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, key: &TermKey) -> i64 {
        self.terms.get(key).copied().unwrap_or(0)
    }

    pub fn label(&self, key: &TermKey) -> BasisLabel {
        BasisLabel::Minor {
            rows: key.0.clone(),
            cols: key.1.clone(),
            wedge: key.2.clone(),
            n: self.n,
        }
    }

    /// Coordinates in the column basis of `minor_koszul_matrix`.
    pub fn columns(&self, p: usize) -> Vec<(usize, BigRational)> {
        let Some(((rows, _, _), _)) = self.terms.iter().next() else {
            return Vec::new();
        };
        let basis = MinorBasis::new(self.n, rows.len(), p);
        self.terms
            .iter()
            .map(|((r, c, w), v)| {
                (
                    basis.index(r, c, w),
                    BigRational::from_integer(BigInt::from(*v)),
                )
            })
            .collect()
    }

    /// The minor map applied term by term, without building a matrix.
    pub fn image(&self) -> MinorVector {
        let mut out = MinorVector::new(self.n);
        for ((rows, cols, w), v) in &self.terms {
            for (r2, c2, xw, s) in minor_image_of_basis(self.n, rows, cols, w) {
                out.add_key(v * s as i64, (r2, c2, xw));
            }
        }
        out
    }

    /// Raising operator `E_{a, a+1}` on the `A` side (`on_rows`) or the `B`
    /// side: sends basis vector `a+1` to `a` in every factor, as a derivation.
    pub fn raise(&self, a: usize, on_rows: bool) -> MinorVector {
        let n = self.n;
        let b = a + 1;
        let mut out = MinorVector::new(n);
        for ((rows, cols, w), v) in &self.terms {
            // the minor factor
            let set = if on_rows { rows } else { cols };
            if set.contains(&b) && !set.contains(&a) {
                // a < b and nothing lies strictly between, so order is kept
                let moved: Vec<usize> = set.iter().map(|&x| if x == b { a } else { x }).collect();
                let (r2, c2) = if on_rows {
                    (moved, cols.clone())
                } else {
                    (rows.clone(), moved)
                };
                out.add_key(*v, (r2, c2, w.clone()));
            }
            // the wedge factor
            for pos in 0..w.len() {
                let var = VarIndex::from_index(w[pos] as usize, n);
                let hit = if on_rows { var.row == b } else { var.col == b };
                if !hit {
                    continue;
                }
                let new_var = if on_rows {
                    VarIndex::new(a, var.col)
                } else {
                    VarIndex::new(var.row, a)
                };
                let mut vars = w.clone();
                vars[pos] = new_var.index(n) as u16;
                if let Some((s, w2)) = normalize(&vars) {
                    out.add_key(v * s as i64, (rows.clone(), cols.clone(), w2));
                }
            }
        }
        out
    }

    /// `(A-weight, B-weight)` of each term; all equal for a weight vector.
    pub fn weights(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let n = self.n;
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = self
            .terms
            .keys()
            .map(|(rows, cols, w)| {
                let mut a = vec![0; n];
                let mut b = vec![0; n];
                for &r in rows {
                    a[r - 1] += 1;
                }
                for &c in cols {
                    b[c - 1] += 1;
                }
                for &x in w {
                    let v = VarIndex::from_index(x as usize, n);
                    a[v.row - 1] += 1;
                    b[v.col - 1] += 1;
                }
                (a, b)
            })
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

fn range(a: usize) -> Vec<usize> {
    (1..=a).collect()
}

fn without(set: &[usize], drop: &[usize]) -> Vec<usize> {
    set.iter().copied().filter(|x| !drop.contains(x)).collect()
}

fn sign(e: usize) -> i64 {
    if e % 2 == 0 {
        1
    } else {
        -1
    }
}

fn check_fit(lemma: LemmaId, n: usize, d: usize) -> Result<usize> {
    if d == 0 || d >= n {
        return Err(Error::OutOfRange(format!("need 1 <= d <= n - 1, got d={d}, n={n}")));
    }
    let k = n - d;
    let (lambda, mu) = lemma.module(k)?;
    if lambda.length() > n || mu.length() > n {
        return Err(Error::OutOfRange(format!(
            "summand {lambda} x {mu} of {lemma} does not fit n={n}"
        )));
    }
    Ok(k)
}

/// The displayed vector for `lemma` at `(n, d)`.
pub fn hwv_vector(lemma: LemmaId, n: usize, d: usize) -> Result<MinorVector> {
    let k = check_fit(lemma, n, d)?;
    let mut v = MinorVector::new(n);
    match lemma {
        LemmaId::P1TwoOne => v.add(1, &[(1, 1)], range(k), range(k)),
        LemmaId::P1Column => {
            for j in 1..=k + 1 {
                v.add(sign(j), &[(1, j)], range(k), without(&range(k + 1), &[j]));
            }
        }
        LemmaId::P2A => {
            for i in 1..=k + 2 {
                for j in i + 1..=k + 2 {
                    v.add(sign(i + j), &[(1, i), (1, j)], range(k), without(&range(k + 2), &[i, j]));
                }
            }
        }
        LemmaId::P2B => {
            for i in 2..=k + 1 {
                v.add(sign(i), &[(1, 1), (1, i)], range(k), without(&range(k + 1), &[i]));
            }
        }
        LemmaId::P2C => v.add(1, &[(1, 1), (1, 2)], range(k), range(k)),
        LemmaId::P2D => {
            for i in 1..=k + 1 {
                for j in 2..=k + 1 {
                    let rows = without(&range(k + 1), &[i]);
                    let cols = without(&range(k + 1), &[j]);
                    v.add(sign(i + j), &[(1, 1), (i, j)], rows.clone(), cols.clone());
                    v.add(sign(i + j), &[(i, 1), (1, j)], rows, cols);
                }
            }
        }
        LemmaId::P2E | LemmaId::P2F => {
            for i in 1..=k + 1 {
                let cols = without(&range(k + 1), &[i]);
                v.add(sign(i), &[(1, 1), (2, i)], range(k), cols.clone());
                v.add(sign(i), &[(1, i), (2, 1)], range(k), cols);
            }
            if lemma == LemmaId::P2F {
                v = transpose(&v);
            }
        }
    }
    Ok(v)
}

/// `X^i_j -> X^j_i`, `Delta^I_J -> Delta^J_I`.
pub fn transpose(v: &MinorVector) -> MinorVector {
    let n = v.n;
    let mut out = MinorVector::new(n);
    for ((rows, cols, w), c) in &v.terms {
        let vars: Vec<u16> = w
            .iter()
            .map(|&x| VarIndex::from_index(x as usize, n).transpose().index(n) as u16)
            .collect();
        if let Some((s, w2)) = normalize(&vars) {
            out.add_key(c * s as i64, (cols.clone(), rows.clone(), w2));
        }
    }
    out
}

/// The image term named in each lemma as one that cannot cancel.
pub fn named_witness(lemma: LemmaId, n: usize, d: usize) -> Option<TermKey> {
    let k = n.checked_sub(d)?;
    let key = |vars: &[(usize, usize)], rows: Vec<usize>, cols: Vec<usize>| {
        if vars.iter().any(|&(i, j)| i > n || j > n) {
            return None;
        }
        let idx: Vec<u16> = vars
            .iter()
            .map(|&(i, j)| VarIndex::new(i, j).index(n) as u16)
            .collect();
        normalize(&idx).map(|(_, w)| (rows, cols, w))
    };
    match lemma {
        LemmaId::P1TwoOne if k >= 2 => key(&[(1, 1), (1, 2)], without(&range(k), &[1]), without(&range(k), &[2])),
        LemmaId::P1Column => key(&[(1, 1), (1, 2)], without(&range(k), &[1]), without(&range(k + 1), &[1, 2])),
        LemmaId::P2A => key(
            &[(1, 1), (1, 2), (1, 3)],
            without(&range(k), &[1]),
            without(&range(k + 2), &[1, 2, 3]),
        ),
        LemmaId::P2B if k >= 2 => key(
            &[(1, 1), (1, 3), (1, 2)],
            without(&range(k), &[1]),
            without(&range(k + 1), &[2, 3]),
        ),
        LemmaId::P2C if k >= 3 => key(&[(1, 1), (1, 2), (1, 3)], without(&range(k), &[1]), without(&range(k), &[3])),
        LemmaId::P2D => key(
            &[(1, 1), (1, 2), (2, 1)],
            without(&range(k + 1), &[1, 2]),
            without(&range(k + 1), &[1, 2]),
        ),
        LemmaId::P2E => key(
            &[(1, 1), (2, 1), (1, 2)],
            without(&range(k), &[1]),
            without(&range(k + 1), &[1, 2]),
        ),
        LemmaId::P2F => key(
            &[(1, 1), (1, 2), (2, 1)],
            without(&range(k + 1), &[1, 2]),
            without(&range(k), &[1]),
        ),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HwvReport {
    pub lemma: LemmaId,
    pub n: usize,
    pub d: usize,
    pub nonzero: bool,
    /// A nonzero image coordinate: the lemma's named term when it survives,
    /// otherwise the first nonzero one.
    pub witness: Option<(BasisLabel, i64)>,
    /// Whether the lemma's named term has a nonzero coefficient.
    pub named_term_survives: bool,
    pub image_terms: usize,
}

/// Applies the minor map to [`hwv_vector`] and reports whether the image
/// is nonzero.
pub fn verify_hwv_nonzero(lemma: LemmaId, n: usize, d: usize) -> Result<HwvReport> {
    let v = hwv_vector(lemma, n, d)?;
    let image = v.image();
    let named = named_witness(lemma, n, d).filter(|key| image.coefficient(key) != 0);
    let witness = match &named {
        Some(key) => Some((image.label(key), image.coefficient(key))),
        None => image.terms.iter().next().map(|(key, c)| (image.label(key), *c)),
    };
    Ok(HwvReport {
        lemma,
        n,
        d,
        nonzero: !image.is_zero(),
        witness,
        named_term_survives: named.is_some(),
        image_terms: image.terms.len(),
    })
}
