//! Border-rank lower bounds from flattening ranks, and the closed-form
//! bounds for the determinant.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::combinat::{binomial, binomial_big};
use crate::partitions::schur_dim;
use crate::schur::pi_shapes;
use crate::{Error, Result};

/// Which flattening produced a rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    KoszulFull,
    KoszulMinor,
    Pieri,
}

impl fmt::Display for BoundMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundMethod::KoszulFull => "koszul_full",
            BoundMethod::KoszulMinor => "koszul_minor",
            BoundMethod::Pieri => "pieri",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub poly: String,
    pub n: usize,
    pub method: BoundMethod,
    pub d: usize,
    pub p: usize,
    pub rank: u64,
    pub t: u64,
    pub bound: u64,
    /// `None` when the rank was computed over the rationals.
    pub prime: Option<u64>,
    pub primes_used: Vec<u64>,
    pub lower_bound_only: bool,
    pub matrix_hash: String,
    pub elapsed_ms: u64,
}

impl BoundCertificate {
    /// Equality ignoring timing.
    pub fn same_result(&self, other: &BoundCertificate) -> bool {
        let mut a = self.clone();
        a.elapsed_ms = other.elapsed_ms;
        &a == other
    }
}

/// `ceil(rank / t)`.
pub fn flattening_bound(rank: u64, t: u64) -> Result<u64> {
    if t == 0 {
        return Err(Error::OutOfRange("comparison rank t must be positive".into()));
    }
    Ok(rank.div_ceil(t))
}

/// Rank of the Koszul flattening (full or minor) of a power of a linear
/// form in `n^2` variables.
pub fn koszul_t(n: usize, p: usize) -> u64 {
    binomial((n * n - 1) as u64, p as u64) as u64
}

/// Rank of the Pieri flattening `S_pi -> S_pi~` of a cube of a linear form:
/// `dim S_pi C^(n^2 - 1)`.
pub fn pieri_t(n: usize) -> Result<u64> {
    let (pi, _, _) = pi_shapes(n)?;
    u64::try_from(schur_dim(&pi, n * n - 1)).map_err(|_| Error::OutOfRange("t overflows u64".into()))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaValue {
    pub n: usize,
    pub name: String,
    pub value: BigRational,
    pub integer_bound: BigInt,
}

impl FormulaValue {
    fn new(n: usize, name: &str, value: BigRational) -> Self {
        FormulaValue {
            n,
            name: name.to_string(),
            integer_bound: value.ceil().to_integer(),
            value,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "name": self.name,
            "value": self.value.to_string(),
            "approx": ratio_f64(&self.value),
            "integer_bound": self.integer_bound.to_string(),
        })
    }
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub(crate) fn ratio_f64(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn half_binomial_sq(n: usize) -> BigRational {
    let c = binomial_big(n as u64, (n / 2) as u64);
    BigRational::from_integer(&c * &c)
}

/// The main lower bound for `det_n`, `n >= 5`.
pub fn main_theorem_value(n: usize) -> Result<FormulaValue> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("main bound needs n >= 5, got {n}")));
    }
    let m = n as i64;
    let factor = if n % 2 == 0 {
        frac(
            8 * (-8 + 6 * m * m + m * m * m),
            (m - 1) * (m + 2) * (m + 4) * (m + 4) * (m * m - 2),
        )
    } else {
        frac(16 * (9 + 8 * m + m * m), (m + 3) * (m + 5) * (m + 5) * (m * m - 2))
    };
    Ok(FormulaValue::new(n, "main", (q(1) + factor) * half_binomial_sq(n)))
}

/// The lower bound from the first-order (p = 1) minor flattening, `n >= 3`.
pub fn preliminary_theorem_value(n: usize) -> Result<FormulaValue> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("preliminary bound needs n >= 3, got {n}")));
    }
    let m = n as i64;
    let factor = if n % 2 == 0 {
        frac(4, (m - 1) * (m + 2) * (m + 2))
    } else {
        frac(8, (m - 1) * (m + 3) * (m + 3))
    };
    Ok(FormulaValue::new(n, "preliminary", (q(1) + factor) * half_binomial_sq(n)))
}

/// `f(n, d)` with `f(n, d) * C(n, d)^2` the dimension of the predicted image
/// of the p = 2 minor flattening.
pub fn f_formula(n: usize, d: usize) -> Result<BigRational> {
    if n < 3 || d < 1 || d + 2 > n {
        return Err(Error::OutOfRange(format!("f(n, d) needs 1 <= d <= n-2, got n={n} d={d}")));
    }
    let (n, d) = (n as i64, d as i64);
    let k = n - d;
    let terms = [
        ((n + 2) * (n + 1) * k * d * (d - 1), (k + 2) * (k + 2) * (k + 1)),
        ((n + 2) * (n + 1) * (n + 1) * k * d, (k + 2) * (k + 2)),
        ((n + 2) * (n + 1) * (n + 1) * k * n * (k - 1), 2 * (k + 2) * (k + 1)),
        ((n + 1) * (n + 1) * n * (k - 1) * d, (k + 1) * (k + 2)),
        ((n + 1) * (n + 1) * d * d, (k + 2) * (k + 2)),
    ];
    Ok(terms.iter().map(|&(a, b)| frac(a, b)).sum())
}

/// `f(n, d) - f(n, d+1) (n-d)^2 / (d+1)^2`, whose sign says whether the
/// image dimension grows from `d` to `d + 1`.
pub fn f_step_difference(n: usize, d: usize) -> Result<BigRational> {
    let r = frac(((n - d) * (n - d)) as i64, ((d + 1) * (d + 1)) as i64);
    Ok(f_formula(n, d)? - f_formula(n, d + 1)? * r)
}

/// `f(n, d) C(n, d)^2`.
pub fn f_image_dim(n: usize, d: usize) -> Result<BigRational> {
    let c = binomial_big(n as u64, d as u64);
    Ok(f_formula(n, d)? * BigRational::from_integer(&c * &c))
}

/// The `d` in `1..=n-2` maximizing `f(n, d) C(n, d)^2` (smallest on ties).
pub fn optimal_d(n: usize) -> Result<usize> {
    if n < 5 {
        return Err(Error::OutOfRange(format!("optimal d needs n >= 5, got {n}")));
    }
    let mut best: Option<(usize, BigRational)> = None;
    for d in 1..=n - 2 {
        let v = f_image_dim(n, d)?;
        if best.as_ref().is_none_or(|(_, b)| v > *b) {
            best = Some((d, v));
        }
    }
    Ok(best.expect("range is nonempty").0)
}

/// Whether a reference value bounds the quantity from below or above, or is
/// only an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceKind {
    Lower,
    Upper,
    Estimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceBound {
    pub name: &'static str,
    /// What is bounded: border rank, rank, cactus rank.
    pub quantity: &'static str,
    pub kind: ReferenceKind,
    pub exact: Option<BigRational>,
    pub approx: f64,
}

impl ReferenceBound {
    fn exact(name: &'static str, quantity: &'static str, kind: ReferenceKind, v: BigRational) -> Self {
        ReferenceBound {
            name,
            quantity,
            kind,
            approx: ratio_f64(&v),
            exact: Some(v),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "name": self.name,
            "quantity": self.quantity,
            "kind": self.kind,
            "exact": self.exact.as_ref().map(|v| v.to_string()),
            "approx": self.approx,
        })
    }
}

/// Known values to compare a computed bound against. `poly` is `det`,
/// `perm`, or anything else (which gets no entries).
pub fn reference_bounds(n: usize, poly: &str) -> Vec<ReferenceBound> {
    use ReferenceKind::*;
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let classical = half_binomial_sq(n);
    match poly {
        "det" => {
            out.push(ReferenceBound::exact("classical", "border_rank", Lower, classical.clone()));
            if let Ok(v) = preliminary_theorem_value(n) {
                out.push(ReferenceBound::exact("preliminary", "border_rank", Lower, v.value));
            }
            if let Ok(v) = main_theorem_value(n) {
                out.push(ReferenceBound::exact("main", "border_rank", Lower, v.value));
            }
            if n == 3 {
                out.push(ReferenceBound::exact("pieri", "border_rank", Lower, q(14)));
            }
            let h = (n / 2 + 1) as i64;
            let rank_lower = classical.clone() + q((n * n) as i64) - q(h * h);
            out.push(ReferenceBound::exact("symmetric_rank_lower", "rank", Lower, rank_lower));
            let cactus = binomial_big(2 * n as u64, n as u64) - binomial_big(2 * n as u64 - 2, n as u64 - 1);
            out.push(ReferenceBound::exact(
                "cactus_lower",
                "cactus_rank",
                Lower,
                BigRational::from_integer(cactus),
            ));
            let mut fact = BigInt::one();
            for i in 2..=n {
                fact *= i;
            }
            let upper = BigRational::new(BigInt::from(5u8), BigInt::from(6u8)).pow((n / 3) as i32)
                * BigRational::from_integer(BigInt::from(2u8).pow(n as u32 - 1) * fact);
            out.push(ReferenceBound::exact("symmetric_rank_upper", "rank", Upper, upper));
            let four_n = 2f64.powi(2 * n as i32 + 1) / std::f64::consts::PI;
            let nf = n as f64;
            out.push(ReferenceBound {
                name: "asymptotic",
                quantity: "border_rank",
                kind: Estimate,
                exact: None,
                approx: four_n / nf + four_n / nf.powi(4),
            });
        }
        "perm" => {
            out.push(ReferenceBound::exact("classical", "border_rank", Lower, classical));
            if n == 3 {
                out.push(ReferenceBound::exact("pieri", "border_rank", Lower, q(14)));
                out.push(ReferenceBound::exact("chow_upper", "border_rank", Upper, q(16)));
            }
        }
        _ => {}
    }
    out
}

/// `ceil(dim S_pi / t)`: the best bound the Pieri flattening can ever give.
pub fn pieri_method_ceiling(n: usize) -> Result<u64> {
    let (pi, _, _) = pi_shapes(n)?;
    let dim = u64::try_from(schur_dim(&pi, n * n)).map_err(|_| Error::OutOfRange("dimension overflows".into()))?;
    flattening_bound(dim, pieri_t(n)?)
}

/// `value > 0` and `integer_bound = ceil(value)`.
pub fn check_formula_value(v: &FormulaValue) -> bool {
    v.value.is_positive() && {
        let c = &v.integer_bound;
        let below = BigRational::from_integer(c - 1);
        below < v.value && v.value <= BigRational::from_integer(c.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::theoretical_image_dim;

    fn big(v: u128) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn ceiling_bounds() {
        assert_eq!(flattening_bound(950, 70).unwrap(), 14);
        assert_eq!(flattening_bound(934, 70).unwrap(), 14);
        assert_eq!(flattening_bound(560, 15).unwrap(), 38);
        assert_eq!(flattening_bound(0, 7).unwrap(), 0);
        assert!(flattening_bound(5, 0).is_err());
        for r in 0..=60u64 {
            for t in 1..=60u64 {
                assert_eq!(flattening_bound(r * t, t).unwrap(), r);
                assert_eq!(flattening_bound(r * t + 1, t).unwrap(), r + 1);
            }
        }
    }

    #[test]
    fn comparison_ranks() {
        assert_eq!(koszul_t(4, 1), 15);
        assert_eq!(koszul_t(3, 2), 28);
        assert_eq!(koszul_t(5, 2), 276);
        assert_eq!(pieri_t(3).unwrap(), 70);
        assert_eq!(pieri_method_ceiling(3).unwrap(), 15);
    }

    #[test]
    fn main_values() {
        let v5 = main_theorem_value(5).unwrap();
        assert_eq!(v5.value, frac(2448, 23));
        assert_eq!(v5.integer_bound, BigInt::from(107));
        let v6 = main_theorem_value(6).unwrap();
        assert_eq!(v6.integer_bound, BigInt::from(410));
        assert!((ratio_f64(&v6.value) - 409.976).abs() < 1e-3);
        assert!(main_theorem_value(4).is_err());
        for n in 5..=6 {
            let v = main_theorem_value(n).unwrap();
            let t = koszul_t(n, 2) as u128;
            assert_eq!(v.value, big(theoretical_image_dim(n, n / 2, 2).unwrap()) / big(t));
        }
    }

    #[test]
    fn preliminary_values() {
        let v4 = preliminary_theorem_value(4).unwrap();
        assert_eq!(v4.value, frac(112, 3));
        assert_eq!(v4.integer_bound, BigInt::from(38));
        assert_eq!(preliminary_theorem_value(3).unwrap().value, q(10));
        assert_eq!(
            preliminary_theorem_value(3).unwrap().value,
            big(theoretical_image_dim(3, 1, 1).unwrap()) / big(8)
        );
        let v5 = preliminary_theorem_value(5).unwrap();
        assert_eq!(v5.value, frac(825, 8));
        assert_eq!(v5.integer_bound, BigInt::from(104));
        assert!(preliminary_theorem_value(2).is_err());
    }

    #[test]
    fn f_values() {
        assert_eq!(f_formula(5, 2).unwrap(), frac(7344, 25));
        assert_eq!(f_formula(4, 2).unwrap() * q(36), q(4065));
        assert!(f_formula(5, 4).is_err());
        assert!(f_formula(5, 0).is_err());
        for n in 5..=12 {
            for d in 1..=n - 2 {
                let c = binomial(n as u64, d as u64);
                let v = f_formula(n, d).unwrap() * big(c * c);
                assert!(v.is_integer() && v.is_positive(), "n={n} d={d}");
                assert_eq!(v, big(theoretical_image_dim(n, d, 2).unwrap()), "n={n} d={d}");
            }
        }
    }

    #[test]
    fn optimal_d_values() {
        assert_eq!(optimal_d(5).unwrap(), 2);
        assert_eq!(optimal_d(8).unwrap(), 4);
        assert!(optimal_d(4).is_err());
        assert!(f_step_difference(7, 2).unwrap().is_negative());
        assert!(f_step_difference(7, 3).unwrap().is_positive());
    }

    #[test]
    fn formula_identities() {
        for n in 5..=12 {
            let c = binomial(n as u64, (n / 2) as u64);
            let lhs = main_theorem_value(n).unwrap().value * big(koszul_t(n, 2) as u128);
            assert_eq!(lhs, f_formula(n, n / 2).unwrap() * big(c * c), "n={n}");
            assert_eq!(optimal_d(n).unwrap(), n / 2);
        }
        for n in 5..=20 {
            let main = main_theorem_value(n).unwrap();
            assert!(main.value > half_binomial_sq(n));
            assert!(preliminary_theorem_value(n).unwrap().value < main.value);
            assert!(check_formula_value(&main));
        }
    }

    #[test]
    fn references() {
        let get = |n, poly, name| {
            reference_bounds(n, poly)
                .into_iter()
                .find(|r| r.name == name)
                .and_then(|r| r.exact)
        };
        assert_eq!(get(4, "det", "classical"), Some(q(36)));
        assert_eq!(get(3, "det", "classical"), Some(q(9)));
        assert_eq!(get(3, "perm", "classical"), Some(q(9)));
        assert_eq!(get(3, "perm", "chow_upper"), Some(q(16)));
        assert_eq!(get(4, "det", "symmetric_rank_lower"), Some(q(43)));
        assert_eq!(get(3, "det", "cactus_lower"), Some(q(14)));
        // (5/6) * 4 * 6 = 20
        assert_eq!(get(3, "det", "symmetric_rank_upper"), Some(q(20)));
        assert!(get(4, "det", "main").is_none());
        assert!(reference_bounds(3, "power").is_empty());
    }

    #[test]
    fn certificate_json_keys() {
        let c = BoundCertificate {
            poly: "det".into(),
            n: 4,
            method: BoundMethod::KoszulMinor,
            d: 2,
            p: 1,
            rank: 560,
            t: 15,
            bound: 38,
            prime: Some(1073741789),
            primes_used: vec![1073741789],
            lower_bound_only: false,
            matrix_hash: "00".into(),
            elapsed_ms: 3,
        };
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["method"], "koszul_minor");
        assert_eq!(v["bound"], 38);
        let back: BoundCertificate = serde_json::from_value(v).unwrap();
        assert!(back.same_result(&BoundCertificate { elapsed_ms: 99, ..c }));
    }
}
