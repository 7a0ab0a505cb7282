//! On-disk matrix cache.
//!
//! A cache file is one JSON header line followed by `row col num/den` lines.
//! The file name is derived from the metadata and the basis hash, and the
//! basis hash is checked again on load, so a stale file is never used for a
//! different basis.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{basis_hash, BasisLabel, FlatteningMatrix, MatrixMeta};
use crate::linalg::{hex_digest, CooMatrix, Scalar};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheHeader {
    #[serde(flatten)]
    pub meta: MatrixMeta,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub basis_hash: String,
}

/// Content-addressed location of a matrix with this metadata and basis.
pub fn cache_path(dir: &Path, meta: &MatrixMeta, basis_hash: &str) -> PathBuf {
    let mut h = Sha256::new();
    h.update(serde_json::to_string(meta).expect("metadata serializes"));
    h.update(basis_hash);
    let key = hex_digest(&h.finalize()[..8]);
    dir.join(format!(
        "{}-{}-n{}-d{}-p{}-{key}.mtx",
        meta.kind, meta.polynomial, meta.n, meta.d, meta.p
    ))
}

pub fn write(path: &Path, m: &FlatteningMatrix) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let header = CacheHeader {
        meta: m.meta.clone(),
        rows: m.rows(),
        cols: m.cols(),
        nnz: m.nnz(),
        basis_hash: m.basis_hash(),
    };
    let tmp = path.with_extension("mtx.tmp");
    {
        let mut out = BufWriter::new(File::create(&tmp)?);
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
        for (r, c, v) in m.matrix.entries() {
            writeln!(out, "{r} {c} {v}")?;
        }
        out.flush()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Reads a cached matrix, checking it against the expected metadata and
/// the labels the caller would have built it in.
pub fn read(
    path: &Path,
    meta: &MatrixMeta,
    row_labels: Vec<BasisLabel>,
    col_labels: Vec<BasisLabel>,
) -> Result<FlatteningMatrix> {
    let mut lines = BufReader::new(File::open(path)?).lines();
    let first = lines
        .next()
        .ok_or_else(|| Error::CacheMismatch("empty cache file".into()))??;
    let header: CacheHeader = serde_json::from_str(&first)?;
    if &header.meta != meta {
        return Err(Error::CacheMismatch(format!(
            "metadata {:?} does not match {:?}",
            header.meta, meta
        )));
    }
    let expected = basis_hash(&row_labels, &col_labels);
    if header.basis_hash != expected {
        return Err(Error::CacheMismatch(format!(
            "basis hash {} does not match {expected}",
            header.basis_hash
        )));
    }
    if header.rows != row_labels.len() || header.cols != col_labels.len() {
        return Err(Error::CacheMismatch("dimensions differ from the basis".into()));
    }
    let mut entries = Vec::with_capacity(header.nnz);
    for line in lines {
        let line = line?;
        let mut parts = line.split_whitespace();
        let (Some(r), Some(c), Some(v), None) = (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(Error::Parse(format!("bad cache line {line:?}")));
        };
        let r: u32 = r.parse().map_err(|_| Error::Parse(format!("bad row in {line:?}")))?;
        let c: u32 = c.parse().map_err(|_| Error::Parse(format!("bad column in {line:?}")))?;
        entries.push((r, c, Scalar::parse(v)?));
    }
    if entries.len() != header.nnz {
        return Err(Error::CacheMismatch(format!(
            "expected {} entries, found {}",
            header.nnz,
            entries.len()
        )));
    }
    let matrix = CooMatrix::from_triplets(header.rows, header.cols, entries)?;
    Ok(FlatteningMatrix {
        meta: header.meta,
        row_labels,
        col_labels,
        matrix,
    })
}

/// Returns the cached matrix when a valid one exists, otherwise builds and
/// stores it. The flag reports a cache hit.
pub fn load_or_build(
    dir: &Path,
    meta: &MatrixMeta,
    labels: (Vec<BasisLabel>, Vec<BasisLabel>),
    build: impl FnOnce() -> Result<FlatteningMatrix>,
) -> Result<(FlatteningMatrix, bool)> {
    let path = cache_path(dir, meta, &basis_hash(&labels.0, &labels.1));
    if path.exists() {
        match read(&path, meta, labels.0, labels.1) {
            Ok(m) => {
                log::info!("loaded cached matrix {}", path.display());
                return Ok((m, true));
            }
            Err(e) => log::warn!("ignoring cache file {}: {e}", path.display()),
        }
    }
    let m = build()?;
    write(&path, &m)?;
    log::info!("wrote matrix cache {}", path.display());
    Ok((m, false))
}
