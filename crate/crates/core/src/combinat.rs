//! Small combinatorial helpers shared by the other modules.

use num_bigint::BigInt;

/// Binomial coefficient as `u128`; panics on overflow.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = acc
            .checked_mul((n - i) as u128)
            .expect("binomial overflows u128")
            / (i as u128 + 1);
    }
    acc
}

pub fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Lexicographic ranking of `k`-subsets of `0..m`.
#[derive(Debug, Clone)]
pub struct SubsetIndexer {
    m: usize,
    k: usize,
    // table[a][b] = C(a, b)
    table: Vec<Vec<u64>>,
}

impl SubsetIndexer {
    pub fn new(m: usize, k: usize) -> Self {
        let mut table = vec![vec![0u64; k + 1]; m + 1];
        for a in 0..=m {
            table[a][0] = 1;
            for b in 1..=k.min(a) {
                table[a][b] = table[a - 1][b - 1] + if b <= a - 1 { table[a - 1][b] } else { 0 };
            }
        }
        SubsetIndexer { m, k, table }
    }

    pub fn count(&self) -> usize {
        self.table[self.m][self.k] as usize
    }

    /// Position of a strictly increasing subset in lexicographic order.
    pub fn rank<T: Copy + Into<usize>>(&self, subset: &[T]) -> usize {
        debug_assert_eq!(subset.len(), self.k);
        let mut r = 0u64;
        let mut prev = 0usize;
        for (i, c) in subset.iter().enumerate() {
            let c: usize = (*c).into();
            let remaining = self.k - i - 1;
            for skipped in prev..c {
                r += self.table[self.m - skipped - 1][remaining];
            }
            prev = c + 1;
        }
        r as usize
    }

    /// All subsets in lexicographic order.
    pub fn all(&self) -> Vec<Vec<usize>> {
        k_subsets(self.m, self.k)
    }
}

/// All `k`-subsets of `0..m` in lexicographic order.
pub fn k_subsets(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > m {
        return out;
    }
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // advance to the next subset
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < m - k + i {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// All permutations of `0..n` with their signs, in lexicographic order.
pub fn permutations_with_sign(n: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    loop {
        out.push((perm.clone(), permutation_sign(&perm)));
        if !next_permutation(&mut perm) {
            return out;
        }
    }
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Sign of a sequence of distinct keys, by inversion count.
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts `seq` in place and returns the sign of the sorting permutation,
/// or 0 when two entries coincide.
pub fn sort_with_sign<T: Ord + Copy>(seq: &mut [T]) -> i32 {
    let mut sign = 1;
    // insertion sort; sequences here are short
    for i in 1..seq.len() {
        let mut j = i;
        while j > 0 && seq[j - 1] > seq[j] {
            seq.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
        if j > 0 && seq[j - 1] == seq[j] {
            return 0;
        }
    }
    for w in seq.windows(2) {
        if w[0] == w[1] {
            return 0;
        }
    }
    sign
}

/// Exponent vectors of all monomials of degree `d` in `m` variables, in
/// decreasing lexicographic order (`x_1^d` first).
pub fn monomials(m: usize, d: usize) -> Vec<Vec<u16>> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; m];
    fill_monomials(&mut cur, 0, d, &mut out);
    out
}

fn fill_monomials(cur: &mut Vec<u16>, pos: usize, left: usize, out: &mut Vec<Vec<u16>>) {
    if pos + 1 == cur.len() {
        cur[pos] = left as u16;
        out.push(cur.clone());
        cur[pos] = 0;
        return;
    }
    if cur.is_empty() {
        if left == 0 {
            out.push(Vec::new());
        }
        return;
    }
    for e in (0..=left).rev() {
        cur[pos] = e as u16;
        fill_monomials(cur, pos + 1, left - e, out);
    }
    cur[pos] = 0;
}

/// Distinct orderings of a multiset, in lexicographic order.
pub fn distinct_arrangements<T: Ord + Clone>(items: &[T]) -> Vec<Vec<T>> {
    let mut sorted = items.to_vec();
    sorted.sort();
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..sorted.len()).collect();
    // walk permutations of the sorted list and keep the distinct ones; the
    // multisets involved have at most a handful of elements
    let mut seen = std::collections::BTreeSet::new();
    loop {
        let arr: Vec<T> = idx.iter().map(|&i| sorted[i].clone()).collect();
        if seen.insert(arr.clone()) {
            out.push(arr);
        }
        if !next_permutation(&mut idx) {
            break;
        }
    }
    out
}
