//! Partitions, Schur module dimensions and the Pieri/Cauchy machinery used
//! to predict the images of the minor-indexed Koszul flattenings.
//!
//! All decompositions are for `GL(A) x GL(B)` with `dim A = dim B = n`. A
//! [`ModuleList`] records pairs `(lambda, mu)` standing for the irreducible
//! `S_lambda A (x) S_mu B` with a multiplicity.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// A weakly decreasing sequence of positive integers. Stored without
/// trailing zeros, so the empty partition is `()`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Validates and normalizes `parts` (trailing zeros are dropped).
    pub fn new(mut parts: Vec<usize>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::InvalidPartition(parts));
        }
        Ok(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// `(first, 1^ones)`, the hook shapes that fill the decomposition lists.
    pub fn hook(first: usize, ones: usize) -> Self {
        let mut parts = Vec::with_capacity(ones + 1);
        if first > 0 {
            parts.push(first);
        }
        parts.extend(std::iter::repeat(1).take(ones));
        Partition::new(parts).expect("hook with first part >= 1")
    }

    /// `(1^k)`, the shape of the k-th exterior power.
    pub fn column(k: usize) -> Self {
        Partition(vec![1; k])
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    /// Number of parts.
    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// Number of boxes.
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Row `i` (0-based), zero past the end.
    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    /// Column lengths of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let width = self.part(0);
        let parts = (0..width)
            .map(|j| self.0.iter().filter(|&&p| p > j).count())
            .collect();
        Partition(parts)
    }

    /// Cells `(row, col)` in row-major order, 0-based.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &len)| (0..len).map(move |j| (i, j)))
    }

    pub fn hook_length(&self, row: usize, col: usize) -> usize {
        let arm = self.part(row) - col - 1;
        let leg = self.0.iter().skip(row + 1).filter(|&&p| p > col).count();
        arm + leg + 1
    }

    /// Dimension of `S_pi C^n` by the hook content formula; zero when the
    /// partition has more than `n` parts.
    pub fn schur_dim(&self, n: usize) -> u128 {
        if self.length() > n {
            return 0;
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (i, j) in self.cells() {
            num *= BigUint::from(n + j - i);
            den *= BigUint::from(self.hook_length(i, j));
        }
        (num / den)
            .to_u128()
            .expect("Schur module dimension exceeds u128")
    }

    /// Every partition of `size`, in decreasing lexicographic order.
    pub fn all_of_size(size: usize) -> Vec<Partition> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        partitions_rec(size, size, &mut cur, &mut out);
        out
    }
}

fn partitions_rec(left: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
    if left == 0 {
        out.push(Partition(cur.clone()));
        return;
    }
    for p in (1..=max.min(left)).rev() {
        cur.push(p);
        partitions_rec(left - p, p, cur, out);
        cur.pop();
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(parts: Vec<usize>) -> Result<Self> {
        Partition::new(parts)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Column lengths of the Young diagram.
pub fn conjugate(pi: &Partition) -> Partition {
    pi.conjugate()
}

/// Dimension of `S_pi C^n`.
pub fn schur_dim(pi: &Partition, n: usize) -> u128 {
    pi.schur_dim(n)
}

fn sort_desc(mut v: Vec<Partition>) -> Vec<Partition> {
    v.sort_by(|a, b| b.cmp(a));
    v.dedup();
    v
}

/// Pieri rule: every `mu` obtained from `pi` by adding `d` boxes with no two
/// in the same column, keeping only `length(mu) <= n`.
pub fn pieri_row(pi: &Partition, d: usize, n: usize) -> Vec<Partition> {
    let rows = pi.length() + 1;
    let mut out = Vec::new();
    let mut added = vec![0usize; rows];
    pieri_row_rec(pi, 0, d, &mut added, &mut out);
    sort_desc(out.into_iter().filter(|mu| mu.length() <= n).collect())
}

fn pieri_row_rec(
    pi: &Partition,
    row: usize,
    left: usize,
    added: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if row == added.len() {
        if left == 0 {
            let parts = (0..added.len()).map(|i| pi.part(i) + added[i]).collect();
            out.push(Partition::new(parts).expect("horizontal strip keeps the shape valid"));
        }
        return;
    }
    // row 0 is unbounded; row i can grow up to the old length of row i-1
    let cap = if row == 0 {
        left
    } else {
        (pi.part(row - 1) - pi.part(row)).min(left)
    };
    for a in 0..=cap {
        added[row] = a;
        pieri_row_rec(pi, row + 1, left - a, added, out);
    }
    added[row] = 0;
}

/// Dual Pieri rule: every `mu` obtained from `pi` by adding `k` boxes with
/// no two in the same row, keeping only `length(mu) <= n`.
pub fn pieri_column(pi: &Partition, k: usize, n: usize) -> Vec<Partition> {
    let max_rows = pi.length() + k;
    let mut out = Vec::new();
    for rows in crate::combinat::k_subsets(max_rows, k) {
        let mut parts: Vec<usize> = (0..max_rows).map(|i| pi.part(i)).collect();
        for &r in &rows {
            parts[r] += 1;
        }
        while parts.last() == Some(&0) {
            parts.pop();
        }
        // one box per row is automatic; the result must still be a partition
        if parts.windows(2).all(|w| w[0] >= w[1]) && !parts.contains(&0) && parts.len() <= n {
            out.push(Partition(parts));
        }
    }
    sort_desc(out)
}

/// One entry of a [`ModuleList`]: `S_a A (x) S_b B` with multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModuleEntry {
    pub a: Partition,
    pub b: Partition,
    pub mult: u64,
}

/// A `GL(A) x GL(B)` decomposition, keyed by `(a, b)` with no duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ModuleList {
    entries: BTreeMap<(Partition, Partition), u64>,
}

impl ModuleList {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `mult` copies of `S_a A (x) S_b B`; zero multiplicities are ignored.
    pub fn add(&mut self, a: Partition, b: Partition, mult: u64) {
        if mult == 0 {
            return;
        }
        *self.entries.entry((a, b)).or_insert(0) += mult;
    }

    pub fn multiplicity(&self, a: &Partition, b: &Partition) -> u64 {
        self.entries
            .get(&(a.clone(), b.clone()))
            .copied()
            .unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entries in decreasing lexicographic order of `(a, b)`.
    pub fn entries(&self) -> Vec<ModuleEntry> {
        self.entries
            .iter()
            .rev()
            .map(|((a, b), &mult)| ModuleEntry {
                a: a.clone(),
                b: b.clone(),
                mult,
            })
            .collect()
    }

    pub fn total_dimension(&self, n: usize) -> u128 {
        self.entries
            .iter()
            .map(|((a, b), &m)| m as u128 * a.schur_dim(n) * b.schur_dim(n))
            .sum()
    }

    /// Pairwise minimum of multiplicities over the common pairs.
    pub fn intersect_min(&self, other: &ModuleList) -> ModuleList {
        let mut out = ModuleList::new();
        for (key, &m) in &self.entries {
            if let Some(&m2) = other.entries.get(key) {
                out.add(key.0.clone(), key.1.clone(), m.min(m2));
            }
        }
        out
    }

    /// Drops pairs with a partition longer than `n`, returning the removed ones.
    pub fn retain_fitting(&mut self, n: usize) -> Vec<ModuleEntry> {
        let (keep, drop): (BTreeMap<_, _>, BTreeMap<_, _>) = std::mem::take(&mut self.entries)
            .into_iter()
            .partition(|((a, b), _)| a.length() <= n && b.length() <= n);
        self.entries = keep;
        drop.into_iter()
            .map(|((a, b), mult)| ModuleEntry { a, b, mult })
            .collect()
    }

    /// JSON records with per-module dimensions over `C^n`, followed by a
    /// `{"total_dim": ...}` summary record.
    pub fn to_json(&self, n: usize) -> serde_json::Value {
        let mut out: Vec<serde_json::Value> = self
            .entries()
            .into_iter()
            .map(|e| {
                serde_json::json!({
                    "a": e.a.parts(),
                    "b": e.b.parts(),
                    "mult": e.mult,
                    "dim_a": e.a.schur_dim(n) as u64,
                    "dim_b": e.b.schur_dim(n) as u64,
                })
            })
            .collect();
        out.push(serde_json::json!({ "total_dim": self.total_dimension(n) as u64 }));
        serde_json::Value::Array(out)
    }
}

/// Cauchy formula: `wedge^p (A (x) B) = sum_{|lambda| = p} S_lambda A (x) S_lambda' B`.
pub fn cauchy_wedge(p: usize, na: usize, nb: usize) -> ModuleList {
    let mut out = ModuleList::new();
    for lambda in Partition::all_of_size(p) {
        let conj = lambda.conjugate();
        if lambda.length() <= na && conj.length() <= nb {
            out.add(lambda, conj, 1);
        }
    }
    out
}

/// Decomposes `wedge^k A (x) wedge^k B (x) wedge^p (A (x) B)` for
/// `dim A = dim B = n`.
pub fn decompose_exterior_tensor(k: usize, p: usize, n: usize) -> ModuleList {
    let mut out = ModuleList::new();
    for e in cauchy_wedge(p, n, n).entries() {
        let left = pieri_column(&e.a, k, n);
        let right = pieri_column(&e.b, k, n);
        for a in &left {
            for b in &right {
                out.add(a.clone(), b.clone(), e.mult);
            }
        }
    }
    out
}

fn check_d(n: usize, d: usize) -> Result<()> {
    if d == 0 || d >= n {
        return Err(Error::OutOfRange(format!("need 0 < d < n, got n={n}, d={d}")));
    }
    Ok(())
}

/// Decomposition of the domain `wedge^{n-d} A (x) wedge^{n-d} B (x) wedge^p (A (x) B)`
/// of the minor-indexed Koszul flattening.
pub fn decompose_wedge_product(n: usize, d: usize, p: usize) -> Result<ModuleList> {
    check_d(n, d)?;
    Ok(decompose_exterior_tensor(n - d, p, n))
}

/// The irreducibles allowed in the image of the minor-indexed flattening:
/// pairs common to the domain and codomain decompositions, each with the
/// smaller of its two multiplicities, restricted to partitions of length
/// at most `n`.
pub fn candidate_image(n: usize, d: usize, p: usize) -> Result<ModuleList> {
    Ok(candidate_image_with_dropped(n, d, p)?.0)
}

/// [`candidate_image`] together with the pairs removed for being longer
/// than `n`.
pub fn candidate_image_with_dropped(n: usize, d: usize, p: usize) -> Result<(ModuleList, Vec<ModuleEntry>)> {
    check_d(n, d)?;
    if !(1..=2).contains(&p) {
        return Err(Error::OutOfRange(format!("p must be 1 or 2, got {p}")));
    }
    let k = n - d;
    // decompose without the length filter, then drop long shapes at the end
    let unbounded = k + p + 1;
    let domain = decompose_exterior_tensor(k, p, unbounded);
    let codomain = decompose_exterior_tensor(k - 1, p + 1, unbounded);
    let mut image = domain.intersect_min(&codomain);
    let dropped = image.retain_fitting(n);
    for e in &dropped {
        log::info!(
            "dropping {} x {} from the image of the n={n}, d={d}, p={p} map: longer than n",
            e.a,
            e.b
        );
    }
    Ok((image, dropped))
}

/// Dimension of [`candidate_image`] over `C^n x C^n`.
pub fn theoretical_image_dim(n: usize, d: usize, p: usize) -> Result<u128> {
    Ok(candidate_image(n, d, p)?.total_dimension(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinat::binomial;

    fn part(v: &[usize]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::new(vec![2, 1, 0, 0]).unwrap(), part(&[2, 1]));
        assert!(Partition::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(part(&[4, 3, 1]).conjugate(), part(&[3, 2, 2, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        assert_eq!(part(&[2, 2, 2, 2, 1, 1, 1, 1]).conjugate(), part(&[8, 4]));
    }

    #[test]
    fn schur_dims() {
        assert_eq!(part(&[2, 2, 2, 2, 1, 1, 1, 1]).schur_dim(9), 1050);
        assert_eq!(part(&[3, 2, 2, 2, 2, 1, 1, 1, 1]).schur_dim(9), 1050);
        assert_eq!(part(&[2, 2, 2, 2, 1, 1, 1, 1]).schur_dim(8), 70);
        assert_eq!(part(&[1, 1, 1]).schur_dim(3), 1);
        assert_eq!(part(&[2, 1]).schur_dim(3), 8);
        assert_eq!(part(&[1, 1, 1, 1]).schur_dim(3), 0);
        assert_eq!(Partition::empty().schur_dim(4), 1);
    }

    #[test]
    fn pieri_row_examples() {
        assert_eq!(pieri_row(&Partition::empty(), 3, 9), vec![part(&[3])]);
        assert_eq!(pieri_row(&part(&[1]), 1, 2), vec![part(&[2]), part(&[1, 1])]);
        assert_eq!(
            pieri_row(&part(&[2, 1]), 2, 3),
            vec![part(&[4, 1]), part(&[3, 2]), part(&[3, 1, 1]), part(&[2, 2, 1])]
        );
    }

    #[test]
    fn pieri_column_examples() {
        assert_eq!(pieri_column(&Partition::empty(), 3, 9), vec![part(&[1, 1, 1])]);
        assert_eq!(pieri_column(&part(&[1]), 2, 2), vec![part(&[2, 1])]);
        assert_eq!(
            pieri_column(&part(&[2, 1]), 2, 4),
            vec![
                part(&[3, 2]),
                part(&[3, 1, 1]),
                part(&[2, 2, 1]),
                part(&[2, 1, 1, 1])
            ]
        );
    }

    #[test]
    fn cauchy_examples() {
        let two = cauchy_wedge(2, 3, 3);
        assert_eq!(
            two.entries(),
            vec![
                ModuleEntry { a: part(&[2]), b: part(&[1, 1]), mult: 1 },
                ModuleEntry { a: part(&[1, 1]), b: part(&[2]), mult: 1 },
            ]
        );
        assert_eq!(two.total_dimension(3), 36);
        let zero = cauchy_wedge(0, 4, 4);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero.multiplicity(&Partition::empty(), &Partition::empty()), 1);
        for n in 1..5 {
            let one = cauchy_wedge(1, n, n);
            assert_eq!(one.total_dimension(n), (n * n) as u128);
        }
    }

    #[test]
    fn cauchy_dimension_identity() {
        for n in 1..=6 {
            for p in 0..=4 {
                assert_eq!(
                    cauchy_wedge(p, n, n).total_dimension(n),
                    binomial((n * n) as u64, p as u64),
                    "n={n} p={p}"
                );
            }
        }
    }

    #[test]
    fn wedge_product_examples() {
        let trivial = decompose_wedge_product(5, 2, 0).unwrap();
        assert_eq!(trivial.len(), 1);
        assert_eq!(trivial.multiplicity(&part(&[1, 1, 1]), &part(&[1, 1, 1])), 1);

        assert_eq!(decompose_wedge_product(5, 2, 2).unwrap().total_dimension(5), 30000);

        let four = decompose_wedge_product(4, 2, 1).unwrap();
        assert_eq!(four.len(), 4);
        // (2,1^{k-1}) and (1^{k+1}) on each side with k = n - d = 2
        for (a, b) in [
            (&[2, 1][..], &[1, 1, 1][..]),
            (&[1, 1, 1], &[2, 1]),
            (&[2, 1], &[2, 1]),
            (&[1, 1, 1], &[1, 1, 1]),
        ] {
            assert_eq!(four.multiplicity(&part(a), &part(b)), 1);
        }
        assert!(decompose_wedge_product(4, 0, 1).is_err());
        assert!(decompose_wedge_product(4, 4, 1).is_err());
    }

    #[test]
    fn wedge_product_dimension_identity() {
        for n in 2..=6 {
            for d in 1..n {
                for p in 0..=2 {
                    let expect = binomial(n as u64, d as u64).pow(2) * binomial((n * n) as u64, p as u64);
                    let got = decompose_wedge_product(n, d, p).unwrap().total_dimension(n);
                    assert_eq!(got, expect, "n={n} d={d} p={p}");
                }
            }
        }
    }

    #[test]
    fn candidate_image_rejects_other_p() {
        assert!(candidate_image(6, 3, 3).is_err());
        assert!(candidate_image(6, 3, 0).is_err());
    }

    #[test]
    fn theoretical_dims() {
        assert_eq!(theoretical_image_dim(4, 2, 1).unwrap(), 560);
        assert_eq!(theoretical_image_dim(5, 2, 2).unwrap(), 29376);
        assert_eq!(theoretical_image_dim(3, 1, 1).unwrap(), 80);
        for n in 3..=6 {
            for d in 1..n {
                for p in 1..=2 {
                    let bound = binomial(n as u64, d as u64).pow(2) * binomial((n * n) as u64, p as u64);
                    assert!(theoretical_image_dim(n, d, p).unwrap() <= bound);
                }
            }
        }
    }
}
