//! Sparse Gaussian elimination over a prime field with Markowitz pivoting.

use std::collections::BTreeSet;
use std::sync::atomic::{AtomicU64, Ordering};

use super::field::PrimeField;
use crate::{Error, Result};

/// Rough footprint of one stored nonzero: the `(col, value)` pair in its row
/// plus the row id in the column list.
pub(crate) const BYTES_PER_ENTRY: u64 = 12;

/// How many candidate columns of minimal count are examined per pivot.
const SEARCH_COLUMNS: usize = 4;

/// Memory shared by all blocks eliminated concurrently.
pub(crate) struct Budget {
    used: AtomicU64,
    cap: u64,
}

impl Budget {
    pub(crate) fn new(cap: u64) -> Self {
        Budget {
            used: AtomicU64::new(0),
            cap,
        }
    }

    fn grow(&self, bytes: u64) -> Result<()> {
        let now = self.used.fetch_add(bytes, Ordering::Relaxed) + bytes;
        if now > self.cap {
            return Err(Error::MemoryCap {
                needed: now,
                cap: self.cap,
            });
        }
        Ok(())
    }

    fn shrink(&self, bytes: u64) {
        self.used.fetch_sub(bytes, Ordering::Relaxed);
    }
}

struct Elimination<'a> {
    f: &'a PrimeField,
    rows: Vec<Vec<(u32, u32)>>,
    active: Vec<bool>,
    col_rows: Vec<Vec<u32>>,
    col_count: Vec<u32>,
    // buckets[k] holds the unpivoted columns with exactly k live entries
    buckets: Vec<BTreeSet<u32>>,
    stored: u64,
}

impl Elimination<'_> {
    fn entry(&self, r: u32, c: u32) -> Option<u32> {
        let row = &self.rows[r as usize];
        row.binary_search_by_key(&c, |e| e.0).ok().map(|i| row[i].1)
    }

    fn set_count(&mut self, c: u32, new: u32) {
        let old = self.col_count[c as usize];
        if old == new {
            return;
        }
        if old > 0 {
            self.buckets[old as usize].remove(&c);
        }
        if new > 0 {
            self.buckets[new as usize].insert(c);
        }
        self.col_count[c as usize] = new;
    }

    /// Live rows holding an entry in column `c`, deduplicated in place.
    fn rows_in_column(&mut self, c: u32) -> Vec<u32> {
        let mut list = std::mem::take(&mut self.col_rows[c as usize]);
        list.sort_unstable();
        list.dedup();
        list.retain(|&r| self.active[r as usize] && self.entry(r, c).is_some());
        self.col_rows[c as usize] = list.clone();
        list
    }

    /// Minimises `(row_len - 1) * (col_count - 1)` over a few of the sparsest
    /// columns; ties go to the lowest column, then the lowest row.
    fn choose_pivot(&mut self) -> Option<(u32, u32)> {
        let mut best: Option<(u64, u32, u32)> = None;
        let mut examined = 0;
        for k in 1..self.buckets.len() {
            if self.buckets[k].is_empty() {
                continue;
            }
            let cols: Vec<u32> = self.buckets[k]
                .iter()
                .take(SEARCH_COLUMNS - examined)
                .copied()
                .collect();
            for c in cols {
                examined += 1;
                for r in self.rows_in_column(c) {
                    let cost = (self.rows[r as usize].len() as u64 - 1) * (k as u64 - 1);
                    let cand = (cost, c, r);
                    if best.map_or(true, |b| cand < b) {
                        best = Some(cand);
                    }
                }
                if matches!(best, Some((0, _, _))) {
                    break;
                }
            }
            if examined >= SEARCH_COLUMNS || matches!(best, Some((0, _, _))) {
                break;
            }
        }
        best.map(|(_, c, r)| (r, c))
    }

    fn retire_row(&mut self, r: u32) {
        self.active[r as usize] = false;
        let row = std::mem::take(&mut self.rows[r as usize]);
        for &(c, _) in &row {
            let k = self.col_count[c as usize];
            self.set_count(c, k - 1);
        }
        self.stored -= row.len() as u64;
    }

    fn run(&mut self, budget: &Budget) -> Result<usize> {
        let mut rank = 0;
        while let Some((pr, pc)) = self.choose_pivot() {
            rank += 1;
            let pivot_row = self.rows[pr as usize].clone();
            let pivot_val = self.entry(pr, pc).expect("pivot entry present");
            let inv = self.f.inv(pivot_val);
            let targets = self.rows_in_column(pc);
            for r in targets {
                if r == pr {
                    continue;
                }
                let a = self.entry(r, pc).expect("listed row holds the column");
                let factor = self.f.mul(a, inv);
                let old = std::mem::take(&mut self.rows[r as usize]);
                let merged = self.axpy(&old, &pivot_row, factor, r);
                let grown = merged.len() as i64 - old.len() as i64;
                if grown > 0 {
                    budget.grow(grown as u64 * BYTES_PER_ENTRY)?;
                } else {
                    budget.shrink((-grown) as u64 * BYTES_PER_ENTRY);
                }
                self.stored = (self.stored as i64 + grown) as u64;
                let empty = merged.is_empty();
                self.rows[r as usize] = merged;
                if empty {
                    self.active[r as usize] = false;
                }
            }
            let len = self.rows[pr as usize].len() as u64;
            self.retire_row(pr);
            budget.shrink(len * BYTES_PER_ENTRY);
            // the pivot column is empty now and leaves every bucket
            self.set_count(pc, 0);
        }
        Ok(rank)
    }

    /// `row - factor * pivot`, updating column counts and lists for row `r`.
    fn axpy(&mut self, row: &[(u32, u32)], pivot: &[(u32, u32)], factor: u32, r: u32) -> Vec<(u32, u32)> {
        let f = self.f;
        let mut out = Vec::with_capacity(row.len() + pivot.len());
        let (mut i, mut j) = (0, 0);
        while i < row.len() || j < pivot.len() {
            let take_row = j == pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
            let take_piv = i == row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
            if take_row {
                out.push(row[i]);
                i += 1;
            } else if take_piv {
                let c = pivot[j].0;
                out.push((c, f.neg(f.mul(factor, pivot[j].1))));
                let k = self.col_count[c as usize];
                self.set_count(c, k + 1);
                self.col_rows[c as usize].push(r);
                j += 1;
            } else {
                let c = row[i].0;
                let v = f.sub(row[i].1, f.mul(factor, pivot[j].1));
                if v == 0 {
                    let k = self.col_count[c as usize];
                    self.set_count(c, k - 1);
                } else {
                    out.push((c, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }
}

/// Rank of one block given as `(row, col, residue)` triples with local indices.
pub(crate) fn rank_block(
    nrows: usize,
    ncols: usize,
    entries: &[(u32, u32, u32)],
    f: &PrimeField,
    budget: &Budget,
) -> Result<usize> {
    let mut rows: Vec<Vec<(u32, u32)>> = vec![Vec::new(); nrows];
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); ncols];
    for &(r, c, v) in entries {
        if v != 0 {
            rows[r as usize].push((c, v));
            col_rows[c as usize].push(r);
        }
    }
    let mut stored = 0u64;
    for row in &mut rows {
        row.sort_unstable_by_key(|e| e.0);
        stored += row.len() as u64;
    }
    budget.grow(stored * BYTES_PER_ENTRY)?;
    let col_count: Vec<u32> = vec![0; ncols];
    let mut el = Elimination {
        f,
        active: rows.iter().map(|r| !r.is_empty()).collect(),
        rows,
        col_rows,
        col_count,
        buckets: vec![BTreeSet::new(); nrows + 1],
        stored,
    };
    for c in 0..ncols as u32 {
        let k = el.col_rows[c as usize].len() as u32;
        el.set_count(c, k);
    }
    let result = el.run(budget);
    budget.shrink(el.stored * BYTES_PER_ENTRY);
    result
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rank_of(dense: &[Vec<i64>], p: u64) -> usize {
        let f = PrimeField::new(p).unwrap();
        let entries: Vec<(u32, u32, u32)> = dense
            .iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(move |(j, &v)| (i as u32, j as u32, v.rem_euclid(p as i64) as u32))
            })
            .collect();
        let cols = dense.first().map_or(0, |r| r.len());
        rank_block(dense.len(), cols, &entries, &f, &Budget::new(u64::MAX)).unwrap()
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_of(&[vec![0, 0], vec![0, 0]], 7), 0);
        assert_eq!(rank_of(&[vec![1, 2], vec![2, 4]], 7), 1);
        assert_eq!(rank_of(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]], 101), 2);
        assert_eq!(rank_of(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 10]], 101), 3);
        // 2x2 with determinant 7 drops rank only mod 7
        assert_eq!(rank_of(&[vec![3, 1], vec![1, 5]], 7), 1);
        assert_eq!(rank_of(&[vec![3, 1], vec![1, 5]], 11), 2);
    }

    #[test]
    fn memory_cap_is_enforced() {
        let f = PrimeField::new(101).unwrap();
        let entries = vec![(0, 0, 1), (0, 1, 1), (1, 0, 1)];
        let err = rank_block(2, 2, &entries, &f, &Budget::new(10)).unwrap_err();
        assert!(matches!(err, Error::MemoryCap { .. }));
    }
}
