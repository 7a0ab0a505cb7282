//! Exact rank of large sparse matrices, modulo a prime or over the rationals.
//!
//! Both engines first split the matrix into connected blocks and work on the
//! blocks in parallel. A modular rank never exceeds the rational rank, so a
//! lower bound derived from it is sound whichever prime is used.

mod components;
mod dense;
mod field;
mod matrix;
mod sparse;

use std::collections::HashMap;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use components::{components, Component};
pub use field::{is_prime, next_prime, PrimeField, DEFAULT_PRIME};
pub use matrix::{hex_digest, CooMatrix, Scalar};

use crate::{Error, Result};

pub const DEFAULT_MEMORY_CAP: u64 = 4 << 30;
pub const DENSE_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RankMethod {
    Modular,
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankCertificate {
    pub rank: usize,
    pub method: RankMethod,
    pub primes_used: Vec<u64>,
    pub matrix_hash: String,
    pub elapsed_ms: u64,
    /// Set when the value comes from primes only and is merely a lower
    /// bound for the rank over the rationals.
    pub lower_bound_only: bool,
}

impl RankCertificate {
    /// Equality ignoring the timing field.
    pub fn same_result(&self, other: &RankCertificate) -> bool {
        RankCertificate {
            elapsed_ms: 0,
            ..self.clone()
        } == RankCertificate {
            elapsed_ms: 0,
            ..other.clone()
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankOptions {
    pub memory_cap_bytes: u64,
    /// Largest `rows * cols` of a single block accepted by the dense path.
    pub dense_guard: u64,
    /// When the dense path is too large, use this many random primes.
    pub multi_prime: Option<usize>,
    pub seed: u64,
}

impl Default for RankOptions {
    fn default() -> Self {
        RankOptions {
            memory_cap_bytes: DEFAULT_MEMORY_CAP,
            dense_guard: DENSE_GUARD,
            multi_prime: None,
            seed: 0,
        }
    }
}

/// Rank of `m` reduced modulo the field's prime.
pub fn rank_mod_p(m: &CooMatrix, field: &PrimeField) -> Result<RankCertificate> {
    rank_mod_p_with(m, field, &RankOptions::default())
}

pub fn rank_mod_p_with(
    m: &CooMatrix,
    field: &PrimeField,
    opts: &RankOptions,
) -> Result<RankCertificate> {
    let start = Instant::now();
    let rank = modular_rank(m, field, opts)?;
    Ok(RankCertificate {
        rank,
        method: RankMethod::Modular,
        primes_used: vec![field.modulus()],
        matrix_hash: m.content_hash(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        lower_bound_only: true,
    })
}

fn modular_rank(m: &CooMatrix, field: &PrimeField, opts: &RankOptions) -> Result<usize> {
    let mut residues = Vec::with_capacity(m.nnz());
    for (r, c, v) in m.entries() {
        let res = field.reduce(v).ok_or_else(|| Error::SingularDenominator {
            row: *r as usize,
            col: *c as usize,
            den: v.to_rational().denom().to_string(),
            modulus: field.modulus(),
        })?;
        residues.push(res);
    }
    let budget = sparse::Budget::new(opts.memory_cap_bytes);
    let blocks = components(m);
    let ranks = blocks
        .par_iter()
        .map(|b| {
            let (row_pos, col_pos) = local_positions(b);
            let local: Vec<(u32, u32, u32)> = b
                .entries
                .iter()
                .map(|&k| {
                    let (r, c, _) = &m.entries()[k];
                    (row_pos[r], col_pos[c], residues[k])
                })
                .collect();
            sparse::rank_block(b.rows.len(), b.cols.len(), &local, field, &budget)
        })
        .collect::<Result<Vec<usize>>>()?;
    log::debug!(
        "modular rank over {} blocks (largest {:?})",
        blocks.len(),
        blocks.iter().map(|b| b.size()).max_by_key(|s| s.0 * s.1)
    );
    Ok(ranks.into_iter().sum())
}

type PositionMap = HashMap<u32, u32>;

fn local_positions(b: &Component) -> (PositionMap, PositionMap) {
    let index = |v: &[u32]| v.iter().enumerate().map(|(i, &g)| (g, i as u32)).collect();
    (index(&b.rows), index(&b.cols))
}

/// Rank over the rationals. Uses dense fraction-free elimination when every
/// block fits the guard; otherwise falls back to several primes if
/// `opts.multi_prime` allows it, and flags the result as a lower bound.
pub fn rank_rational(m: &CooMatrix, opts: &RankOptions) -> Result<RankCertificate> {
    let start = Instant::now();
    let blocks = components(m);
    let largest = blocks
        .iter()
        .map(|b| b.rows.len() as u64 * b.cols.len() as u64)
        .max()
        .unwrap_or(0);
    if largest > opts.dense_guard {
        let Some(k) = opts.multi_prime else {
            let worst = blocks
                .iter()
                .max_by_key(|b| b.rows.len() as u64 * b.cols.len() as u64)
                .expect("nonempty");
            return Err(Error::SizeGuard {
                rows: worst.rows.len(),
                cols: worst.cols.len(),
            });
        };
        return multi_prime_rank(m, k.max(2), opts, start);
    }
    let ranks: Vec<usize> = blocks
        .par_iter()
        .map(|b| {
            let (row_pos, col_pos) = local_positions(b);
            let local: Vec<(u32, u32, &Scalar)> = b
                .entries
                .iter()
                .map(|&k| {
                    let (r, c, v) = &m.entries()[k];
                    (row_pos[r], col_pos[c], v)
                })
                .collect();
            dense::rank_block(b.rows.len(), b.cols.len(), &local)
        })
        .collect();
    Ok(RankCertificate {
        rank: ranks.into_iter().sum(),
        method: RankMethod::Rational,
        primes_used: Vec::new(),
        matrix_hash: m.content_hash(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        lower_bound_only: false,
    })
}

/// `count` distinct primes in `[2^29, 2^30)` drawn from `seed`.
pub fn random_primes(count: usize, seed: u64) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    while out.len() < count {
        let p = next_prime(rng.gen_range(1u64 << 29..1u64 << 30));
        if !out.contains(&p) {
            out.push(p);
        }
    }
    out
}

fn multi_prime_rank(
    m: &CooMatrix,
    count: usize,
    opts: &RankOptions,
    start: Instant,
) -> Result<RankCertificate> {
    let primes = random_primes(count, opts.seed);
    let mut best = 0;
    for &p in &primes {
        let field = PrimeField::new(p)?;
        best = best.max(modular_rank(m, &field, opts)?);
    }
    Ok(RankCertificate {
        rank: best,
        method: RankMethod::Modular,
        primes_used: primes,
        matrix_hash: m.content_hash(),
        elapsed_ms: start.elapsed().as_millis() as u64,
        lower_bound_only: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    #[test]
    fn trivial_ranks() {
        let f = PrimeField::default();
        let zero = CooMatrix::new(5, 7);
        assert_eq!(rank_mod_p(&zero, &f).unwrap().rank, 0);
        assert_eq!(rank_rational(&zero, &RankOptions::default()).unwrap().rank, 0);
        let id = CooMatrix::from_triplets(6, 6, (0..6).map(|i| (i, i, Scalar::Int(1)))).unwrap();
        assert_eq!(rank_mod_p(&id, &f).unwrap().rank, 6);
        assert_eq!(rank_rational(&id, &RankOptions::default()).unwrap().rank, 6);
    }

    #[test]
    fn denominator_divisible_by_prime_is_reported() {
        let f = PrimeField::new(7).unwrap();
        let m = CooMatrix::from_triplets(
            2,
            3,
            [(1, 2, Scalar::from_rational(BigRational::new(1.into(), 14.into())))],
        )
        .unwrap();
        match rank_mod_p(&m, &f) {
            Err(Error::SingularDenominator { row, col, .. }) => assert_eq!((row, col), (1, 2)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn guard_and_multi_prime() {
        let m = CooMatrix::from_dense(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]);
        let tight = RankOptions {
            dense_guard: 4,
            ..RankOptions::default()
        };
        assert!(matches!(rank_rational(&m, &tight), Err(Error::SizeGuard { .. })));
        let multi = RankOptions {
            multi_prime: Some(3),
            ..tight
        };
        let cert = rank_rational(&m, &multi).unwrap();
        assert_eq!(cert.rank, 3);
        assert!(cert.lower_bound_only);
        assert_eq!(cert.primes_used.len(), 3);
        assert_eq!(cert.method, RankMethod::Modular);
    }

    #[test]
    fn blocks_are_ranked_independently() {
        let m = CooMatrix::from_dense(&[
            vec![1, 0, 0, 2],
            vec![0, 3, 0, 0],
            vec![2, 0, 0, 4],
            vec![0, 0, 5, 0],
        ]);
        assert_eq!(rank_mod_p(&m, &PrimeField::default()).unwrap().rank, 3);
        assert_eq!(rank_rational(&m, &RankOptions::default()).unwrap().rank, 3);
    }
}
