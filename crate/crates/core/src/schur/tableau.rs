use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;

use crate::combinat::sort_with_sign;
use crate::partitions::Partition;
use crate::{Error, Result};

/// A filling of a Young diagram, stored column by column (top to bottom,
/// left to right). Entries are 1-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tableau {
    shape: Partition,
    entries: Vec<u8>,
}

impl Tableau {
    /// From a list of columns; lengths must match the shape's conjugate.
    pub fn from_columns(shape: &Partition, columns: &[Vec<u8>]) -> Result<Self> {
        let lens = shape.conjugate();
        if columns.len() != lens.length()
            || columns.iter().zip(lens.parts()).any(|(c, &l)| c.len() != l)
        {
            return Err(Error::ShapeMismatch(format!(
                "columns {columns:?} do not fill shape {shape}"
            )));
        }
        if columns.iter().flatten().any(|&v| v == 0) {
            return Err(Error::OutOfRange("tableau entries are 1-based".into()));
        }
        Ok(Tableau {
            shape: shape.clone(),
            entries: columns.concat(),
        })
    }

    /// From a list of rows, the usual way tableaux are drawn.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let shape = Partition::new(rows.iter().map(|r| r.len()).collect())?;
        let lens = shape.conjugate();
        let columns: Vec<Vec<u8>> = (0..lens.length())
            .map(|c| (0..lens.part(c)).map(|r| rows[r][c]).collect())
            .collect();
        Tableau::from_columns(&shape, &columns)
    }

    pub(crate) fn from_raw(shape: Partition, entries: Vec<u8>) -> Self {
        Tableau { shape, entries }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    /// Column-major reading word.
    pub fn word(&self) -> &[u8] {
        &self.entries
    }

    pub fn columns(&self) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        let mut start = 0;
        for &l in self.shape.conjugate().parts() {
            out.push(self.entries[start..start + l].to_vec());
            start += l;
        }
        out
    }

    /// Entry at 0-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> u8 {
        let lens = self.shape.conjugate();
        let start: usize = lens.parts()[..col].iter().sum();
        self.entries[start + row]
    }

    /// Sorted multiset of entries.
    pub fn content(&self) -> Vec<u8> {
        let mut c = self.entries.clone();
        c.sort_unstable();
        c
    }

    pub fn is_semistandard(&self) -> bool {
        let cols = self.columns();
        cols.iter().all(|c| c.windows(2).all(|w| w[0] < w[1]))
            && cols
                .windows(2)
                .all(|w| w[1].iter().zip(&w[0]).all(|(right, left)| left <= right))
    }
}

impl fmt::Display for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, col) in self.columns().iter().enumerate() {
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

/// A linear combination of semistandard tableaux of one shape.
pub type TableauCombination = BTreeMap<Tableau, BigRational>;

/// All semistandard tableaux of `shape` with entries in `1..=n`, in
/// increasing order of their column-major reading words.
pub fn ssyt_enumerate(shape: &Partition, n: usize) -> Vec<Tableau> {
    let lens: Vec<usize> = shape.conjugate().parts().to_vec();
    let total: usize = lens.iter().sum();
    // (column, row) of each position in the reading word, and the position
    // of the cell to the left
    let mut cells = Vec::with_capacity(total);
    let mut starts = Vec::with_capacity(lens.len());
    let mut pos = 0;
    for (c, &l) in lens.iter().enumerate() {
        starts.push(pos);
        for r in 0..l {
            cells.push((c, r));
        }
        pos += l;
    }
    let left: Vec<Option<usize>> = cells
        .iter()
        .map(|&(c, r)| (c > 0).then(|| starts[c - 1] + r))
        .collect();
    let mut out = Vec::new();
    if n > u8::MAX as usize || lens.first().is_some_and(|&l| l > n) {
        return out;
    }
    let mut word = vec![0u8; total];
    fill(0, &cells, &left, n as u8, &mut word, shape, &mut out);
    out
}

fn fill(
    k: usize,
    cells: &[(usize, usize)],
    left: &[Option<usize>],
    n: u8,
    word: &mut Vec<u8>,
    shape: &Partition,
    out: &mut Vec<Tableau>,
) {
    if k == cells.len() {
        out.push(Tableau::from_raw(shape.clone(), word.clone()));
        return;
    }
    let (_, r) = cells[k];
    let mut lo = 1u8;
    if r > 0 {
        lo = lo.max(word[k - 1] + 1);
    }
    if let Some(l) = left[k] {
        lo = lo.max(word[l]);
    }
    // leave room for the cells below in this column
    let below = cells[k + 1..]
        .iter()
        .take_while(|&&(c, _)| c == cells[k].0)
        .count() as u8;
    if lo + below > n {
        return;
    }
    for v in lo..=n - below {
        word[k] = v;
        fill(k + 1, cells, left, n, word, shape, out);
    }
}

/// Column-sorts a filling in place: `Some(sign)`, or `None` if a column
/// repeats an entry.
fn sort_columns(lens: &[usize], word: &mut [u8]) -> Option<i32> {
    let mut sign = 1;
    let mut start = 0;
    for &l in lens {
        match sort_with_sign(&mut word[start..start + l]) {
            0 => return None,
            s => sign *= s,
        }
        start += l;
    }
    Some(sign)
}

/// First `(col, row)` in column-major order with `T(row, col) > T(row, col+1)`.
fn first_row_violation(lens: &[usize], starts: &[usize], word: &[u8]) -> Option<(usize, usize)> {
    for c in 0..lens.len().saturating_sub(1) {
        for r in 0..lens[c + 1] {
            if word[starts[c] + r] > word[starts[c + 1] + r] {
                return Some((c, r));
            }
        }
    }
    None
}

/// Expresses a filling in the semistandard basis.
///
/// Columns are antisymmetric (a repeated entry gives zero, sorting a
/// column costs its sign). At the first cell with `T(r,c) > T(r,c+1)` the
/// Garnir relation for `X` = column `c` rows `r..` and `Y` = column `c+1`
/// rows `..=r` rewrites `T` as minus the signed sum of its other shuffles.
/// Every rewritten filling has a smaller column-sorted reading word, which
/// bounds the process; the decrease is checked on each step.
pub fn straighten(t: &Tableau) -> TableauCombination {
    straighten_with(t, 1)
        .into_iter()
        .map(|(k, v)| (k, BigRational::from_integer(v.into())))
        .collect()
}

/// Integer-coefficient straightening of `coeff * t`.
pub(crate) fn straighten_with(t: &Tableau, coeff: i128) -> BTreeMap<Tableau, i128> {
    let shape = t.shape.clone();
    let lens: Vec<usize> = shape.conjugate().parts().to_vec();
    let mut starts = Vec::with_capacity(lens.len());
    let mut acc = 0;
    for &l in &lens {
        starts.push(acc);
        acc += l;
    }

    let mut result: BTreeMap<Tableau, i128> = BTreeMap::new();
    let mut work: BTreeMap<Vec<u8>, i128> = BTreeMap::new();
    let mut first = t.entries.clone();
    if let Some(s) = sort_columns(&lens, &mut first) {
        work.insert(first, coeff * s as i128);
    }

    while let Some((word, c0)) = work.pop_last() {
        if c0 == 0 {
            continue;
        }
        let Some((c, r)) = first_row_violation(&lens, &starts, &word) else {
            let slot = result
                .entry(Tableau::from_raw(shape.clone(), word))
                .or_insert(0);
            *slot = slot.checked_add(c0).expect("straightening coefficient overflow");
            continue;
        };
        // positions of X then Y in the reading word
        let xs: Vec<usize> = (r..lens[c]).map(|i| starts[c] + i).collect();
        let ys: Vec<usize> = (0..=r).map(|i| starts[c + 1] + i).collect();
        let slots: Vec<usize> = xs.iter().chain(&ys).copied().collect();
        let values: Vec<u8> = slots.iter().map(|&p| word[p]).collect();
        for chosen in crate::combinat::k_subsets(slots.len(), xs.len()) {
            if chosen.iter().copied().eq(0..xs.len()) {
                continue;
            }
            // chosen values fill X in order, the rest fill Y in order
            let order: Vec<usize> = chosen
                .iter()
                .copied()
                .chain((0..slots.len()).filter(|i| !chosen.contains(i)))
                .collect();
            let shuffle_sign = crate::combinat::permutation_sign(&order);
            let mut next = word.clone();
            for (slot, &src) in slots.iter().zip(&order) {
                next[*slot] = values[src];
            }
            let Some(col_sign) = sort_columns(&lens, &mut next) else {
                continue;
            };
            assert!(next < word, "straightening failed to decrease {word:?} -> {next:?}");
            let delta = -(shuffle_sign as i128) * col_sign as i128 * c0;
            let slot = work.entry(next).or_insert(0);
            *slot = slot.checked_add(delta).expect("straightening coefficient overflow");
        }
    }
    result.retain(|_, v| *v != 0);
    result
}
