//! End-to-end bound computation: pick the polynomial and flattening, build
//! (or load) the matrix, take its rank and turn it into a certificate.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use crate::bounds::{flattening_bound, koszul_t, pieri_t, BoundCertificate, BoundMethod};
use crate::flattening::{
    cache, full_koszul_labels, full_koszul_matrix, full_koszul_meta, minor_koszul_labels,
    minor_koszul_matrix, minor_koszul_meta, FlatteningMatrix,
};
use crate::linalg::{rank_mod_p_with, rank_rational, PrimeField, RankCertificate, RankOptions, DEFAULT_PRIME};
use crate::polynomials::{determinant_poly, permanent_poly, variable_power, Polynomial, VarIndex};
use crate::schur::{pi_shapes, pieri_flattening_matrix, pieri_labels, pieri_meta};
use crate::{Error, Result};

/// Where the polynomial comes from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolySource {
    Det,
    Perm,
    /// `X_nn^n`, the power of a linear form the bounds are measured against.
    Power,
    /// A polynomial in the JSON format of [`Polynomial::to_json`].
    File(PathBuf),
}

impl FromStr for PolySource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(PolySource::Det),
            "perm" => Ok(PolySource::Perm),
            "power" => Ok(PolySource::Power),
            _ => match s.strip_prefix("file:") {
                Some(path) if !path.is_empty() => Ok(PolySource::File(path.into())),
                _ => Err(Error::Parse(format!(
                    "unknown polynomial {s:?}; expected det, perm, power or file:<path>"
                ))),
            },
        }
    }
}

impl PolySource {
    pub fn load(&self, n: usize) -> Result<Polynomial> {
        match self {
            PolySource::Det => determinant_poly(n),
            PolySource::Perm => permanent_poly(n),
            PolySource::Power => variable_power(n, VarIndex::new(n, n), n),
            PolySource::File(path) => {
                let p = Polynomial::from_json_str(&std::fs::read_to_string(path)?)?;
                if p.n() != n {
                    return Err(Error::ShapeMismatch(format!(
                        "{} holds a polynomial in {}x{} variables, expected n={n}",
                        path.display(),
                        p.n(),
                        p.n()
                    )));
                }
                Ok(p)
            }
        }
    }

    /// Short name used in certificates.
    pub fn id(&self, poly: &Polynomial) -> String {
        match self {
            PolySource::Det => "det".into(),
            PolySource::Perm => "perm".into(),
            PolySource::Power => "power".into(),
            PolySource::File(_) => format!("file:{}", poly.fingerprint()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BoundRequest {
    pub poly: PolySource,
    pub n: usize,
    pub method: BoundMethod,
    pub d: Option<usize>,
    pub p: Option<usize>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Prime for the modular rank; ignored when `exact` is set.
    pub prime: Option<u64>,
    /// Rank over the rationals instead of modulo a prime.
    pub exact: bool,
    pub cache_dir: Option<PathBuf>,
    pub rank: RankOptions,
}

/// The request with defaults filled in and compatibility checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResolvedRequest {
    pub n: usize,
    pub method: BoundMethod,
    pub d: usize,
    pub p: usize,
    pub t: u64,
}

/// Defaults: `d = floor(n/2)` and `p = 2` for the Koszul maps. For Pieri
/// maps `d` is the degree and `p` the number of new boxes, both `n`.
pub fn resolve(req: &BoundRequest, poly: &Polynomial) -> Result<ResolvedRequest> {
    let n = req.n;
    let usage = |msg: String| Err(Error::OutOfRange(msg));
    match req.method {
        BoundMethod::KoszulMinor => {
            if req.poly != PolySource::Det {
                return usage("the minor flattening only applies to det".into());
            }
            let d = req.d.unwrap_or(n / 2);
            let p = req.p.unwrap_or(2);
            if !(1..=2).contains(&p) || d == 0 || d >= n {
                return usage(format!("minor flattening needs p in 1..=2 and 1 <= d < n, got d={d} p={p}"));
            }
            Ok(ResolvedRequest { n, method: req.method, d, p, t: koszul_t(n, p) })
        }
        BoundMethod::KoszulFull => {
            let e = poly.degree();
            let d = req.d.unwrap_or(e / 2);
            let p = req.p.unwrap_or(2);
            if d + 1 > e {
                return usage(format!("full flattening needs d < degree {e}, got d={d}"));
            }
            Ok(ResolvedRequest { n, method: req.method, d, p, t: koszul_t(n, p) })
        }
        BoundMethod::Pieri => {
            if !(2..=3).contains(&n) {
                return usage(format!("Pieri flattening is supported for n = 2, 3, got n={n}"));
            }
            if poly.degree() != n {
                return usage(format!("Pieri flattening needs degree {n}, got {}", poly.degree()));
            }
            if req.d.is_some_and(|d| d != n) || req.p.is_some_and(|p| p != n) {
                return usage("Pieri flattening fixes d = p = n".into());
            }
            Ok(ResolvedRequest { n, method: req.method, d: n, p: n, t: pieri_t(n)? })
        }
    }
}

/// Builds the flattening matrix, through the cache when one is configured.
/// The flag reports a cache hit.
pub fn build_matrix(
    poly: &Polynomial,
    r: &ResolvedRequest,
    cache_dir: Option<&std::path::Path>,
) -> Result<(FlatteningMatrix, bool)> {
    let (meta, labels, build): (_, _, Box<dyn FnOnce() -> Result<FlatteningMatrix>>) = match r.method {
        BoundMethod::KoszulMinor => (
            minor_koszul_meta(r.n, r.d, r.p),
            minor_koszul_labels(r.n, r.d, r.p)?,
            Box::new(|| minor_koszul_matrix(r.n, r.d, r.p)),
        ),
        BoundMethod::KoszulFull => (
            full_koszul_meta(poly, r.d, r.p),
            full_koszul_labels(r.n, poly.degree(), r.d, r.p)?,
            Box::new(|| full_koszul_matrix(poly, r.d, r.p)),
        ),
        BoundMethod::Pieri => {
            let (pi, _, rows) = pi_shapes(r.n)?;
            let n2 = r.n * r.n;
            let labels = pieri_labels(&pi, &rows, n2)?;
            let meta = pieri_meta(poly, &pi, &rows, n2);
            (meta, labels, Box::new(move || pieri_flattening_matrix(poly, &pi, &rows, n2)))
        }
    };
    match cache_dir {
        Some(dir) => cache::load_or_build(dir, &meta, labels, build),
        None => Ok((build()?, false)),
    }
}

pub fn matrix_rank(m: &FlatteningMatrix, opts: &RunOptions) -> Result<RankCertificate> {
    if opts.exact {
        rank_rational(&m.matrix, &opts.rank)
    } else {
        let field = PrimeField::new(opts.prime.unwrap_or(DEFAULT_PRIME))?;
        rank_mod_p_with(&m.matrix, &field, &opts.rank)
    }
}

/// Result of [`compute_bound`].
#[derive(Debug, Clone)]
pub struct BoundRun {
    pub certificate: BoundCertificate,
    pub rows: usize,
    pub cols: usize,
    pub nnz: usize,
    pub cache_hit: bool,
}

pub fn compute_bound(req: &BoundRequest, opts: &RunOptions) -> Result<BoundRun> {
    let start = Instant::now();
    let poly = req.poly.load(req.n)?;
    let r = resolve(req, &poly)?;
    let (m, cache_hit) = build_matrix(&poly, &r, opts.cache_dir.as_deref())?;
    log::info!(
        "{} matrix {}x{} with {} nonzeros{}",
        m.meta.kind,
        m.rows(),
        m.cols(),
        m.nnz(),
        if cache_hit { " (cached)" } else { "" }
    );
    let rank = matrix_rank(&m, opts)?;
    let certificate = BoundCertificate {
        poly: req.poly.id(&poly),
        n: r.n,
        method: r.method,
        d: r.d,
        p: r.p,
        rank: rank.rank as u64,
        t: r.t,
        bound: flattening_bound(rank.rank as u64, r.t)?,
        prime: (!opts.exact).then(|| rank.primes_used[0]),
        primes_used: rank.primes_used,
        lower_bound_only: rank.lower_bound_only,
        matrix_hash: rank.matrix_hash,
        elapsed_ms: start.elapsed().as_millis() as u64,
    };
    Ok(BoundRun {
        certificate,
        rows: m.rows(),
        cols: m.cols(),
        nnz: m.nnz(),
        cache_hit,
    })
}
