//! Dense fraction-free elimination over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::Scalar;

/// Exact rank of one block given as `(row, col, value)` triples with local
/// indices. Rows are cleared of denominators first; after each update the
/// row is divided by the gcd of its entries, which keeps coefficients small
/// without Bareiss's exact-division bookkeeping.
pub(crate) fn rank_block(nrows: usize, ncols: usize, entries: &[(u32, u32, &Scalar)]) -> usize {
    // eliminate along the shorter side
    let (nrows, ncols, transpose) = if ncols > nrows {
        (ncols, nrows, true)
    } else {
        (nrows, ncols, false)
    };
    let mut denoms: Vec<BigInt> = vec![BigInt::one(); nrows];
    for (r, c, v) in entries {
        let r = if transpose { *c } else { *r } as usize;
        if let Scalar::Big(q) = v {
            denoms[r] = denoms[r].lcm(q.denom());
        }
    }
    let mut m = vec![vec![BigInt::zero(); ncols]; nrows];
    for (r, c, v) in entries {
        let (r, c) = if transpose { (*c, *r) } else { (*r, *c) };
        let (r, c) = (r as usize, c as usize);
        m[r][c] = match v {
            Scalar::Int(x) => BigInt::from(*x) * &denoms[r],
            Scalar::Big(q) => q.numer() * (&denoms[r] / q.denom()),
        };
    }

    let mut rank = 0;
    for col in 0..ncols {
        // smallest nonzero pivot in this column, lowest row on ties
        let pivot = (rank..nrows)
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| (m[r][col].bits(), r));
        let Some(p) = pivot else { continue };
        m.swap(rank, p);
        let (top, rest) = m.split_at_mut(rank + 1);
        let prow = &top[rank];
        let a = &prow[col];
        for row in rest.iter_mut() {
            if row[col].is_zero() {
                continue;
            }
            let b = row[col].clone();
            let g = a.gcd(&b);
            let (fa, fb) = (a / &g, &b / &g);
            let mut content = BigInt::zero();
            for j in col..ncols {
                let v = &row[j] * &fa - &prow[j] * &fb;
                if !v.is_zero() && !content.is_one() {
                    content = content.gcd(&v);
                }
                row[j] = v;
            }
            debug_assert!(row[col].is_zero());
            if !content.is_zero() && !content.is_one() {
                for v in row[col + 1..].iter_mut() {
                    if !v.is_zero() {
                        *v = &*v / &content;
                    }
                }
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}
