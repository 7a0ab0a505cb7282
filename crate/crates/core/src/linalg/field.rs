use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::matrix::Scalar;
use crate::{Error, Result};

pub const DEFAULT_PRIME: u64 = 1_073_741_789;

/// Arithmetic modulo an odd prime below `2^32`, so products fit in `u64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeField {
    modulus: u64,
}

impl PrimeField {
    pub fn new(modulus: u64) -> Result<Self> {
        if modulus < 3 || modulus >= 1 << 32 || !is_prime(modulus) {
            return Err(Error::NotPrime(modulus));
        }
        Ok(PrimeField { modulus })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + b as u64) % self.modulus) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a as u64 + self.modulus - b as u64) % self.modulus) as u32
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.modulus) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            (self.modulus - a as u64) as u32
        }
    }

    pub fn pow(&self, mut base: u32, mut e: u64) -> u32 {
        let mut acc = 1u32;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        self.pow(a, self.modulus - 2)
    }

    fn reduce_int(&self, v: &BigInt) -> u32 {
        let m = BigInt::from(self.modulus);
        v.mod_floor(&m).to_u32().expect("residue fits")
    }

    /// Image of an exact entry, or `None` when its denominator vanishes.
    pub fn reduce(&self, s: &Scalar) -> Option<u32> {
        match s {
            Scalar::Int(v) => Some(v.rem_euclid(self.modulus as i64) as u32),
            Scalar::Big(q) => {
                let den = self.reduce_int(q.denom());
                if den == 0 {
                    return None;
                }
                Some(self.mul(self.reduce_int(q.numer()), self.inv(den)))
            }
        }
    }
}

impl Default for PrimeField {
    fn default() -> Self {
        PrimeField {
            modulus: DEFAULT_PRIME,
        }
    }
}

fn pow_mod(base: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let mut acc = 1u128;
    let mut b = base as u128 % m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Deterministic Miller-Rabin; the bases 2..=11 are exact below 2.15e12.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    if n >= 2_152_302_898_747 {
        // outside the range where the fixed bases are known to suffice
        return (17..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0);
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'bases: for a in [2u64, 3, 5, 7, 11] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = (x as u128 * x as u128 % n as u128) as u64;
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Smallest prime at or above `start`.
pub fn next_prime(start: u64) -> u64 {
    let mut c = start.max(3) | 1;
    while !is_prime(c) {
        c += 2;
    }
    c
}
