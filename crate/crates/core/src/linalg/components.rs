//! Splitting a sparse matrix into the diagonal blocks of its bipartite
//! row/column graph. Flattenings of weight-homogeneous polynomials are
//! graded, so their blocks are much smaller than the whole matrix.

use super::matrix::CooMatrix;

/// One connected block. `rows` and `cols` are sorted global indices; the
/// local index of a row is its position in `rows`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub rows: Vec<u32>,
    pub cols: Vec<u32>,
    /// Indices into `CooMatrix::entries`.
    pub entries: Vec<usize>,
}

impl Component {
    pub fn size(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // keep the smaller index as root so the result is canonical
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Blocks containing at least one nonzero entry, ordered by smallest row.
/// Empty rows and columns belong to no block.
pub fn components(m: &CooMatrix) -> Vec<Component> {
    let rows = m.rows();
    let mut uf = UnionFind::new(rows + m.cols());
    for (r, c, _) in m.entries() {
        uf.union(*r, rows as u32 + *c);
    }
    let mut slot_of_root = std::collections::HashMap::new();
    let mut out: Vec<Component> = Vec::new();
    let mut row_seen = vec![false; rows];
    let mut col_seen = vec![false; m.cols()];
    // entries are sorted by row, so blocks are created in order of their first row
    for (k, (r, c, _)) in m.entries().iter().enumerate() {
        let root = uf.find(*r);
        let slot = *slot_of_root.entry(root).or_insert_with(|| {
            out.push(Component {
                rows: Vec::new(),
                cols: Vec::new(),
                entries: Vec::new(),
            });
            out.len() - 1
        });
        let comp = &mut out[slot];
        comp.entries.push(k);
        if !row_seen[*r as usize] {
            row_seen[*r as usize] = true;
            comp.rows.push(*r);
        }
        if !col_seen[*c as usize] {
            col_seen[*c as usize] = true;
            comp.cols.push(*c);
        }
    }
    for comp in &mut out {
        comp.cols.sort_unstable();
    }
    out
}
