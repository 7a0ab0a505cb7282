//! Exterior powers of `V = A (x) B` in the basis of sorted variable subsets.

use crate::combinat::SubsetIndexer;

/// `x ^ w` for a sorted wedge `w`: zero if `x` is already present, otherwise
/// the sorted wedge with sign `(-1)^(number of entries of w below x)`.
pub fn insert(w: &[u16], x: u16) -> Option<(i32, Vec<u16>)> {
    match w.binary_search(&x) {
        Ok(_) => None,
        Err(pos) => {
            let mut out = Vec::with_capacity(w.len() + 1);
            out.extend_from_slice(&w[..pos]);
            out.push(x);
            out.extend_from_slice(&w[pos..]);
            Some((if pos % 2 == 0 { 1 } else { -1 }, out))
        }
    }
}

/// Wedge of an arbitrary list of variables, sorted with its sign; `None`
/// when a variable repeats.
pub fn normalize(vars: &[u16]) -> Option<(i32, Vec<u16>)> {
    let mut v = vars.to_vec();
    match crate::combinat::sort_with_sign(&mut v) {
        0 => None,
        s => Some((s, v)),
    }
}

/// Lexicographic indexing of `p`-element wedges in `m` variables.
#[derive(Debug, Clone)]
pub struct WedgeBasis {
    indexer: SubsetIndexer,
    m: usize,
    p: usize,
}

impl WedgeBasis {
    pub fn new(m: usize, p: usize) -> Self {
        WedgeBasis {
            indexer: SubsetIndexer::new(m, p),
            m,
            p,
        }
    }

    pub fn len(&self) -> usize {
        self.indexer.count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, w: &[u16]) -> usize {
        self.indexer.rank(w)
    }

    pub fn elements(&self) -> Vec<Vec<u16>> {
        crate::combinat::k_subsets(self.m, self.p)
            .into_iter()
            .map(|s| s.into_iter().map(|x| x as u16).collect())
            .collect()
    }
}
