//! Exact homogeneous polynomials in the `n^2` variables `X^i_j = a_i (x) b_j`.
//!
//! Variables are ordered row-major: `X^1_1, X^1_2, ..., X^n_n`, and that
//! order is shared by every other module (wedge signs and tableau entries
//! both depend on it). Dual polynomials reuse [`Polynomial`]; [`contract`]
//! lets each dual monomial act as the matching iterated partial derivative,
//! without dividing by factorials.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::combinat::permutations_with_sign;
use crate::{Error, Result};

/// Exponent vector of length `n^2`.
pub type Exponents = Vec<u16>;

/// The variable `X^row_col`, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarIndex {
    pub row: usize,
    pub col: usize,
}

impl VarIndex {
    pub fn new(row: usize, col: usize) -> Self {
        VarIndex { row, col }
    }

    /// Position in the row-major order of the `n^2` variables, 0-based.
    pub fn index(&self, n: usize) -> usize {
        (self.row - 1) * n + (self.col - 1)
    }

    pub fn from_index(index: usize, n: usize) -> Self {
        VarIndex {
            row: index / n + 1,
            col: index % n + 1,
        }
    }

    pub fn transpose(&self) -> Self {
        VarIndex {
            row: self.col,
            col: self.row,
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.row == 0 || self.col == 0 || self.row > n || self.col > n {
            return Err(Error::OutOfRange(format!(
                "variable X^{}_{} outside 1..{n}",
                self.row, self.col
            )));
        }
        Ok(())
    }
}

impl fmt::Display for VarIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}{}", self.row, self.col)
    }
}

/// A homogeneous polynomial with exact rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    n: usize,
    degree: usize,
    terms: BTreeMap<Exponents, BigRational>,
}

impl Polynomial {
    pub fn zero(n: usize, degree: usize) -> Self {
        Polynomial {
            n,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated monomials and dropping zeros.
    pub fn from_terms(
        n: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Exponents, BigRational)>,
    ) -> Result<Self> {
        let mut p = Polynomial::zero(n, degree);
        for (exps, c) in terms {
            if exps.len() != n * n {
                return Err(Error::Parse(format!(
                    "exponent vector of length {} for n={n}",
                    exps.len()
                )));
            }
            let deg: usize = exps.iter().map(|&e| e as usize).sum();
            if deg != degree {
                return Err(Error::DegreeMismatch(format!(
                    "monomial of degree {deg} in a degree {degree} polynomial"
                )));
            }
            p.add_term(exps, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, exps: Exponents, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.n * self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, BigRational> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u16]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    fn check_compatible(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n || self.degree != other.degree {
            return Err(Error::DegreeMismatch(format!(
                "(n={}, deg={}) vs (n={}, deg={})",
                self.n, self.degree, other.n, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.add(&other.scale(&-BigRational::one()))
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n, self.degree);
        }
        Polynomial {
            n: self.n,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial> {
        if self.n != other.n {
            return Err(Error::DegreeMismatch("different n".into()));
        }
        let mut out = Polynomial::zero(self.n, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    /// `d/dX` for the variable at row-major position `var`.
    pub fn partial(&self, var: usize) -> Polynomial {
        let mut out = Polynomial::zero(self.n, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[var] > 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                out.add_term(e2, c * BigRational::from_integer(BigInt::from(e[var])));
            }
        }
        out
    }

    /// Value at a point given by the `n^2` coordinates in row-major order.
    pub fn evaluate(&self, point: &[BigRational]) -> BigRational {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut v = c.clone();
                for (x, &k) in point.iter().zip(e) {
                    for _ in 0..k {
                        v *= x;
                    }
                }
                v
            })
            .sum()
    }

    /// True when every monomial has the same row and column multidegree,
    /// the condition under which Koszul flattenings are weight graded.
    pub fn is_weight_homogeneous(&self) -> bool {
        let mut weights = self.terms.keys().map(|e| self.bidegree(e));
        match weights.next() {
            None => true,
            Some(first) => weights.all(|w| w == first),
        }
    }

    /// `(row multidegree, column multidegree)` of a monomial.
    pub fn bidegree(&self, exps: &[u16]) -> (Vec<u32>, Vec<u32>) {
        let mut a = vec![0u32; self.n];
        let mut b = vec![0u32; self.n];
        for (idx, &e) in exps.iter().enumerate() {
            a[idx / self.n] += e as u32;
            b[idx % self.n] += e as u32;
        }
        (a, b)
    }

    /// Substitutes `X -> g X h` for integer `n x n` matrices `g`, `h`.
    pub fn substitute_two_sided(&self, g: &[Vec<i64>], h: &[Vec<i64>]) -> Polynomial {
        let n = self.n;
        // image of X^i_j is sum_{k,l} g[i][k] X^k_l h[l][j]
        let images: Vec<Polynomial> = (0..n * n)
            .map(|idx| {
                let (i, j) = (idx / n, idx % n);
                let terms = (0..n * n).filter_map(|kl| {
                    let (k, l) = (kl / n, kl % n);
                    let c = g[i][k] * h[l][j];
                    (c != 0).then(|| {
                        let mut e = vec![0u16; n * n];
                        e[kl] = 1;
                        (e, BigRational::from_integer(BigInt::from(c)))
                    })
                });
                Polynomial::from_terms(n, 1, terms).expect("linear image")
            })
            .collect();
        let mut out = Polynomial::zero(n, self.degree);
        for (e, c) in &self.terms {
            let mut term = Polynomial::from_terms(n, 0, [(vec![0u16; n * n], c.clone())])
                .expect("constant term");
            for (idx, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term = term.mul(&images[idx]).expect("same n");
                }
            }
            out = out.add(&term).expect("same degree");
        }
        out
    }

    /// Short content hash used to key caches and name arbitrary inputs.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_string(&self.to_json()).expect("polynomial serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            n: self.n,
            degree: self.degree,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson {
                    exps: e.clone(),
                    num: c.numer().to_string(),
                    den: c.denom().to_string(),
                })
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson) -> Result<Polynomial> {
        let terms = json
            .terms
            .iter()
            .map(|t| {
                let num: BigInt = t
                    .num
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad numerator {:?}", t.num)))?;
                let den: BigInt = t
                    .den
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad denominator {:?}", t.den)))?;
                if den.is_zero() {
                    return Err(Error::Parse("zero denominator".into()));
                }
                Ok((t.exps.clone(), BigRational::new(num, den)))
            })
            .collect::<Result<Vec<_>>>()?;
        Polynomial::from_terms(json.n, json.degree, terms)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("polynomial serializes")
    }

    pub fn from_json_str(s: &str) -> Result<Polynomial> {
        let json: PolynomialJson = serde_json::from_str(s)?;
        Polynomial::from_json(&json)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if k > 0 || c.is_negative() {
                write!(f, "{}{}", if k > 0 { " " } else { "" }, sign)?;
                if k > 0 {
                    write!(f, " ")?;
                }
            }
            let abs = c.abs();
            let mut wrote = false;
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                write!(f, "{abs}")?;
                wrote = true;
            }
            for (idx, &x) in e.iter().enumerate() {
                if x > 0 {
                    if wrote {
                        write!(f, "*")?;
                    }
                    write!(f, "{}", VarIndex::from_index(idx, self.n))?;
                    if x > 1 {
                        write!(f, "^{x}")?;
                    }
                    wrote = true;
                }
            }
        }
        Ok(())
    }
}

/// Serialized form: `{"n":3,"degree":3,"terms":[{"exps":[..],"num":"1","den":"1"}]}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolynomialJson {
    pub n: usize,
    pub degree: usize,
    pub terms: Vec<TermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TermJson {
    pub exps: Vec<u16>,
    pub num: String,
    pub den: String,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange("n must be at least 1".into()));
    }
    Ok(())
}

fn signed_products(n: usize, signed: bool) -> Result<Polynomial> {
    check_n(n)?;
    let terms = permutations_with_sign(n).into_iter().map(|(sigma, sign)| {
        let mut e = vec![0u16; n * n];
        for (i, &j) in sigma.iter().enumerate() {
            e[i * n + j] = 1;
        }
        let c = if signed { sign } else { 1 };
        (e, BigRational::from_integer(BigInt::from(c)))
    });
    Polynomial::from_terms(n, n, terms)
}

/// Leibniz expansion of the `n x n` determinant.
pub fn determinant_poly(n: usize) -> Result<Polynomial> {
    signed_products(n, true)
}

/// The `n x n` permanent.
pub fn permanent_poly(n: usize) -> Result<Polynomial> {
    signed_products(n, false)
}

/// `(X^row_col)^e`.
pub fn variable_power(n: usize, v: VarIndex, e: usize) -> Result<Polynomial> {
    v.check(n)?;
    if e == 0 {
        return Err(Error::OutOfRange("exponent must be at least 1".into()));
    }
    let mut exps = vec![0u16; n * n];
    exps[v.index(n)] = e as u16;
    Polynomial::from_terms(n, e, [(exps, BigRational::one())])
}

/// `l^e` for the linear form with the given row-major coefficients,
/// expanded with multinomial coefficients.
pub fn linear_form_power(n: usize, coeffs: &[BigRational], e: usize) -> Result<Polynomial> {
    if coeffs.len() != n * n {
        return Err(Error::OutOfRange(format!(
            "expected {} coefficients, got {}",
            n * n,
            coeffs.len()
        )));
    }
    if e == 0 {
        return Err(Error::OutOfRange("exponent must be at least 1".into()));
    }
    if coeffs.iter().all(|c| c.is_zero()) {
        return Err(Error::ZeroLinearForm);
    }
    let linear = Polynomial::from_terms(
        n,
        1,
        coeffs.iter().enumerate().map(|(i, c)| {
            let mut exps = vec![0u16; n * n];
            exps[i] = 1;
            (exps, c.clone())
        }),
    )?;
    let mut out = linear.clone();
    for _ in 1..e {
        out = out.mul(&linear)?;
    }
    Ok(out)
}

/// Apolarity contraction `alpha _| p`: each dual monomial `x^a` acts as the
/// bare derivative `d^a/dx^a` (no factorial normalization). Bilinear.
pub fn contract(alpha: &Polynomial, p: &Polynomial) -> Result<Polynomial> {
    if alpha.n != p.n {
        return Err(Error::DegreeMismatch("contraction needs the same n".into()));
    }
    if alpha.degree > p.degree {
        return Err(Error::DegreeMismatch(format!(
            "dual degree {} exceeds polynomial degree {}",
            alpha.degree, p.degree
        )));
    }
    let mut out = Polynomial::zero(p.n, p.degree - alpha.degree);
    for (a, ca) in &alpha.terms {
        for (b, cb) in &p.terms {
            if let Some(factor) = falling_factor(b, a) {
                let rest: Exponents = b.iter().zip(a).map(|(x, y)| x - y).collect();
                out.add_term(rest, ca * cb * BigRational::from_integer(factor));
            }
        }
    }
    Ok(out)
}

/// `prod_i b_i! / (b_i - a_i)!`, or `None` when some `a_i > b_i`.
fn falling_factor(b: &[u16], a: &[u16]) -> Option<BigInt> {
    let mut f = BigInt::one();
    for (&bi, &ai) in b.iter().zip(a) {
        if ai > bi {
            return None;
        }
        for t in 0..ai {
            f *= bi - t;
        }
    }
    Some(f)
}

/// Monomial `prod_i x_i^{e_i}` with coefficient one.
pub fn monomial(n: usize, exps: Exponents) -> Result<Polynomial> {
    let degree = exps.iter().map(|&e| e as usize).sum();
    Polynomial::from_terms(n, degree, [(exps, BigRational::one())])
}

/// `sum_{i=1}^r l_i^e` for pseudorandom linear forms with coefficients in
/// `-3..=3`, drawn deterministically from `seed`. Symmetric rank is at most
/// `r` by construction.
pub fn random_low_rank(r: usize, e: usize, n: usize, seed: u64) -> Result<Polynomial> {
    check_n(n)?;
    if r == 0 || e == 0 {
        return Err(Error::OutOfRange("need r >= 1 and e >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Polynomial::zero(n, e);
    for _ in 0..r {
        let coeffs = loop {
            let c: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        };
        let coeffs: Vec<BigRational> = coeffs
            .into_iter()
            .map(|x| BigRational::from_integer(BigInt::from(x)))
            .collect();
        out = out.add(&linear_form_power(n, &coeffs, e)?)?;
    }
    Ok(out)
}

/// The linear forms drawn by [`random_low_rank`], for tests that need them.
pub fn random_linear_forms(r: usize, n: usize, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..r)
        .map(|_| loop {
            let c: Vec<i64> = (0..n * n).map(|_| rng.gen_range(-3..=3)).collect();
            if c.iter().any(|&x| x != 0) {
                break c;
            }
        })
        .collect()
}

/// Converts a small rational to `i64` when it is an integer.
pub fn as_small_integer(c: &BigRational) -> Option<i64> {
    if c.is_integer() {
        c.numer().to_i64()
    } else {
        None
    }
}
