use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

/// An exact matrix entry. Almost every flattening entry is a small integer,
/// so those avoid heap allocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Scalar {
    Int(i64),
    Big(Box<BigRational>),
}

impl Scalar {
    pub fn from_rational(q: BigRational) -> Scalar {
        if q.is_integer() {
            if let Some(v) = q.numer().to_i64() {
                return Scalar::Int(v);
            }
        }
        Scalar::Big(Box::new(q))
    }

    pub fn to_rational(&self) -> BigRational {
        match self {
            Scalar::Int(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Big(q) => (**q).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Int(v) => *v == 0,
            Scalar::Big(q) => q.is_zero(),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Int(a), Scalar::Int(b)) = (self, other) {
            if let Some(s) = a.checked_add(*b) {
                return Scalar::Int(s);
            }
        }
        Scalar::from_rational(self.to_rational() + other.to_rational())
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Int(v) if *v != i64::MIN => Scalar::Int(-v),
            _ => Scalar::from_rational(-self.to_rational()),
        }
    }

    pub fn parse(s: &str) -> Result<Scalar> {
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a, b),
            None => (s, "1"),
        };
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        Ok(Scalar::from_rational(BigRational::new(num, den)))
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Int(v)
    }
}

impl fmt::Display for Scalar {
    /// Always `num/den`, the format used by the matrix cache.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Int(v) => write!(f, "{v}/1"),
            Scalar::Big(q) => write!(f, "{}/{}", q.numer(), q.denom()),
        }
    }
}

/// Sparse matrix in coordinate form. After [`CooMatrix::canonicalize`] the
/// entries are sorted by `(row, col)`, unique and nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CooMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(u32, u32, Scalar)>,
}

impl CooMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        CooMatrix {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Builds and canonicalizes; duplicate positions are summed.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (u32, u32, Scalar)>,
    ) -> Result<Self> {
        let mut m = CooMatrix::new(rows, cols);
        for (r, c, v) in entries {
            m.push(r, c, v)?;
        }
        m.canonicalize();
        Ok(m)
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, v)| **v != 0)
                .map(move |(j, v)| (i as u32, j as u32, Scalar::Int(*v)))
        });
        CooMatrix::from_triplets(rows.len(), cols, entries).expect("dense input is in range")
    }

    pub fn push(&mut self, r: u32, c: u32, v: Scalar) -> Result<()> {
        if r as usize >= self.rows || c as usize >= self.cols {
            return Err(Error::OutOfRange(format!(
                "entry ({r}, {c}) outside {}x{}",
                self.rows, self.cols
            )));
        }
        if !v.is_zero() {
            self.entries.push((r, c, v));
        }
        Ok(())
    }

    pub fn canonicalize(&mut self) {
        self.entries.sort_by_key(|e| (e.0, e.1));
        let mut out: Vec<(u32, u32, Scalar)> = Vec::with_capacity(self.entries.len());
        for (r, c, v) in self.entries.drain(..) {
            match out.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 = last.2.add(&v),
                _ => out.push((r, c, v)),
            }
        }
        out.retain(|e| !e.2.is_zero());
        self.entries = out;
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(u32, u32, Scalar)] {
        &self.entries
    }

    pub fn transpose(&self) -> CooMatrix {
        let mut t = CooMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| (*c, *r, v.clone()))
                .collect(),
        };
        t.canonicalize();
        t
    }

    /// Relabels row `i` as `row_perm[i]` and column `j` as `col_perm[j]`.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> CooMatrix {
        let mut m = CooMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|(r, c, v)| {
                    (
                        row_perm[*r as usize] as u32,
                        col_perm[*c as usize] as u32,
                        v.clone(),
                    )
                })
                .collect(),
        };
        m.canonicalize();
        m
    }

    pub fn to_dense_rational(&self) -> Vec<Vec<BigRational>> {
        let mut d = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (r, c, v) in &self.entries {
            d[*r as usize][*c as usize] = v.to_rational();
        }
        d
    }

    pub fn get(&self, r: usize, c: usize) -> BigRational {
        match self
            .entries
            .binary_search_by_key(&(r as u32, c as u32), |e| (e.0, e.1))
        {
            Ok(i) => self.entries[i].2.to_rational(),
            Err(_) => BigRational::zero(),
        }
    }

    /// Column `c` as `(row, value)` pairs, for tests and small matrices.
    pub fn column(&self, c: usize) -> Vec<(usize, BigRational)> {
        self.entries
            .iter()
            .filter(|e| e.1 as usize == c)
            .map(|e| (e.0 as usize, e.2.to_rational()))
            .collect()
    }

    /// Content hash of the shape and the canonical entry list.
    pub fn content_hash(&self) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}x{}\n", self.rows, self.cols));
        for (r, c, v) in &self.entries {
            h.update(format!("{r} {c} {v}\n"));
        }
        hex_digest(&h.finalize()[..16])
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|e| match &e.2 {
            Scalar::Int(_) => true,
            Scalar::Big(q) => q.denom().is_one(),
        })
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}
