use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use flatrank::bounds::{
    f_image_dim, flattening_bound, main_theorem_value, optimal_d, preliminary_theorem_value, BoundMethod,
};
use flatrank::combinat::binomial;
use flatrank::flattening::hwv::{verify_hwv_nonzero, LemmaId};
use flatrank::partitions::{schur_dim, theoretical_image_dim};
use flatrank::pipeline::{compute_bound, BoundRequest, PolySource};
use flatrank::schur::pi_shapes;

use crate::{Format, RunConfig, Suite};

const BUNDLED_BASELINE: &str = include_str!("../baseline.json");

#[derive(Debug, Deserialize)]
struct Baseline {
    ranks: BTreeMap<String, u64>,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    passed: bool,
    detail: String,
}

impl Check {
    fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed, detail: detail.into() }
    }

    fn failed(name: impl Into<String>, err: impl std::fmt::Display) -> Self {
        Check::new(name, false, format!("error: {err}"))
    }
}

struct Runner<'a> {
    config: &'a RunConfig,
    baseline: Baseline,
    checks: Vec<Check>,
}

impl Runner<'_> {
    /// Rank of a flattening, checked against the published value (if
    /// any), the expected bound and the regression baseline.
    fn rank_check(
        &mut self,
        poly: PolySource,
        n: usize,
        method: BoundMethod,
        dp: Option<(usize, usize)>,
        expected_rank: Option<u64>,
        expected_bound: Option<u64>,
    ) -> Option<u64> {
        let poly_name = format!("{poly:?}").to_lowercase();
        let mut key = format!("{method}/{poly_name}/{n}");
        if let Some((d, p)) = dp {
            key.push_str(&format!("/{d}/{p}"));
        }
        let req = BoundRequest { poly, n, method, d: dp.map(|x| x.0), p: dp.map(|x| x.1) };
        let cert = match compute_bound(&req, &self.config.run) {
            Ok(run) => run.certificate,
            Err(e) => {
                self.checks.push(Check::failed(&key, e));
                return None;
            }
        };
        let base = self.baseline.ranks.get(&key).copied();
        let passed = expected_rank.is_none_or(|r| r == cert.rank)
            && expected_bound.is_none_or(|b| b == cert.bound)
            && base.is_none_or(|b| b == cert.rank);
        let mut detail = format!("rank {} t {} bound {}", cert.rank, cert.t, cert.bound);
        if let Some(r) = expected_rank {
            detail.push_str(&format!(", expected rank {r}"));
        }
        if let Some(b) = expected_bound {
            detail.push_str(&format!(", expected bound {b}"));
        }
        match base {
            Some(b) => detail.push_str(&format!(", baseline {b}")),
            None => detail.push_str(", not in baseline"),
        }
        self.checks.push(Check::new(key, passed, detail));
        Some(cert.rank)
    }

    fn dimensions(&mut self) {
        let (pi, tilde, _) = pi_shapes(3).expect("n = 3 is valid");
        let dims = (schur_dim(&pi, 9), schur_dim(&tilde, 9), schur_dim(&pi, 8));
        self.checks.push(Check::new(
            "schur dimensions",
            dims == (1050, 1050, 70),
            format!("dim S_pi C^9 = {}, dim S_pi~ C^9 = {}, dim S_pi C^8 = {}", dims.0, dims.1, dims.2),
        ));
    }

    fn formulas(&mut self) {
        let mut bad = Vec::new();
        for n in 5..=12usize {
            let lhs = main_theorem_value(n).map(|v| v.value * num(binomial((n * n - 1) as u64, 2)));
            let rhs = f_image_dim(n, n / 2);
            match (lhs, rhs) {
                (Ok(l), Ok(r)) if l == r => {}
                _ => bad.push(format!("identity at n={n}")),
            }
            if optimal_d(n).ok() != Some(n / 2) {
                bad.push(format!("optimal d at n={n}"));
            }
        }
        for n in 5..=20usize {
            let c = binomial(n as u64, (n / 2) as u64);
            let main = main_theorem_value(n).map(|v| v.value);
            let prelim = preliminary_theorem_value(n).map(|v| v.value);
            match (main, prelim) {
                (Ok(m), Ok(p)) if m > num(c * c) && p < m => {}
                _ => bad.push(format!("ordering at n={n}")),
            }
        }
        let detail = if bad.is_empty() { "n = 5..12 identities, n = 5..20 orderings".to_string() } else { bad.join(", ") };
        self.checks.push(Check::new("formula identities", bad.is_empty(), detail));
    }

    fn n4_gap(&mut self) {
        let Some(rank) = self.rank_check(PolySource::Det, 4, BoundMethod::KoszulMinor, Some((2, 2)), None, None) else {
            return;
        };
        let formula = theoretical_image_dim(4, 2, 2).unwrap_or(0) as u64;
        let bound = flattening_bound(rank, 105).unwrap_or(0);
        self.checks.push(Check::new(
            "n=4 p=2 gap report",
            bound >= 38,
            format!(
                "computed rank {rank} (recorded ground truth), bound {bound} >= 38; \
                 module count {formula}, difference {}; 38 * 105 = 3990, difference {}",
                formula as i64 - rank as i64,
                rank as i64 - 3990
            ),
        ));
    }

    fn hwv(&mut self) {
        for n in 5..=8 {
            for lemma in LemmaId::ALL {
                let name = format!("hwv {lemma} n={n}");
                match verify_hwv_nonzero(lemma, n, n / 2) {
                    Ok(r) => {
                        let detail = match &r.witness {
                            Some((label, c)) => format!("{} image terms, witness {label} coefficient {c}", r.image_terms),
                            None => format!("{} image terms", r.image_terms),
                        };
                        self.checks.push(Check::new(name, r.nonzero && r.named_term_survives, detail));
                    }
                    Err(e) => self.checks.push(Check::failed(name, e)),
                }
            }
        }
    }

    fn quick(&mut self) {
        self.dimensions();
        self.rank_check(PolySource::Power, 3, BoundMethod::Pieri, None, Some(70), Some(1));
        self.rank_check(PolySource::Det, 3, BoundMethod::Pieri, None, Some(950), Some(14));
        self.rank_check(PolySource::Perm, 3, BoundMethod::Pieri, None, Some(934), Some(14));
        self.rank_check(PolySource::Det, 4, BoundMethod::KoszulMinor, Some((2, 1)), Some(560), Some(38));
        self.rank_check(PolySource::Det, 3, BoundMethod::KoszulFull, Some((1, 2)), None, Some(12));
        self.formulas();
        self.n4_gap();
    }

    fn paper(&mut self) {
        self.quick();
        let expected = theoretical_image_dim(5, 2, 2).ok().map(|v| v as u64);
        self.rank_check(PolySource::Det, 5, BoundMethod::KoszulMinor, Some((2, 2)), expected, Some(107));
        self.hwv();
    }
}

fn num(v: u128) -> BigRational {
    BigRational::from_integer(v.into())
}

/// Runs a suite, prints one line per check and returns whether all passed.
pub fn run(suite: Suite, baseline: Option<&Path>, config: &RunConfig) -> Result<bool> {
    let text = match baseline {
        Some(path) => std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        None => BUNDLED_BASELINE.to_string(),
    };
    let baseline: Baseline = serde_json::from_str(&text).context("parsing the baseline")?;
    let mut runner = Runner { config, baseline, checks: Vec::new() };
    match suite {
        Suite::Quick => runner.quick(),
        Suite::Paper => runner.paper(),
        Suite::Hwv => runner.hwv(),
    }
    let ok = runner.checks.iter().all(|c| c.passed);
    match config.format {
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(&serde_json::json!({ "passed": ok, "checks": runner.checks }))?
        ),
        Format::Table => {
            for c in &runner.checks {
                println!("{} {:<32} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = runner.checks.iter().filter(|c| !c.passed).count();
            println!("{} checks, {failed} failed", runner.checks.len());
        }
    }
    Ok(ok)
}
