//! Acceptance criteria, one PASS/FAIL line each. Exits nonzero if any fails.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatrank::bounds::{f_image_dim, flattening_bound, main_theorem_value, optimal_d, preliminary_theorem_value};
use flatrank::combinat::{binomial, distinct_arrangements};
use flatrank::flattening::hwv::{verify_hwv_nonzero, LemmaId};
use flatrank::flattening::{full_koszul_matrix, minor_koszul_matrix};
use flatrank::linalg::{rank_mod_p, rank_rational, CooMatrix, PrimeField, RankOptions};
use flatrank::partitions::{schur_dim, theoretical_image_dim, Partition};
use flatrank::polynomials::{determinant_poly, permanent_poly, random_low_rank, variable_power, VarIndex};
use flatrank::schur::{pi_shapes, pieri_flattening_matrix, ssyt_enumerate, straighten, Tableau};

const SECOND_PRIME: u64 = 998244353;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn big(v: u128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Rank modulo two primes; `None` if they disagree.
fn two_prime_rank(m: &CooMatrix) -> Option<usize> {
    let a = rank_mod_p(m, &PrimeField::default()).unwrap().rank;
    let b = rank_mod_p(m, &PrimeField::new(SECOND_PRIME).unwrap()).unwrap().rank;
    (a == b).then_some(a)
}

fn exact_rank(m: &CooMatrix) -> usize {
    rank_rational(m, &RankOptions::default()).unwrap().rank
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let (pi, tilde, _) = pi_shapes(3).unwrap();
    let dims = (schur_dim(&pi, 9), schur_dim(&tilde, 9), schur_dim(&pi, 8));
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        dims == (1050, 1050, 70) && elapsed < 1.0,
        format!("dims {dims:?}, {elapsed:.3} s"),
    )
}

fn criterion_2() -> Outcome {
    let (pi, _, rows) = pi_shapes(3).unwrap();
    let polys = [
        ("x33^3", variable_power(3, VarIndex::new(3, 3), 3).unwrap(), 70usize),
        ("det3", determinant_poly(3).unwrap(), 950),
        ("perm3", permanent_poly(3).unwrap(), 934),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    let mut ranks = HashMap::new();
    for (name, phi, expected) in polys {
        let m = pieri_flattening_matrix(&phi, &pi, &rows, 9).unwrap();
        let exact = exact_rank(&m.matrix);
        let modular = two_prime_rank(&m.matrix);
        ok &= exact == expected && modular == Some(expected);
        ranks.insert(name, exact as u64);
        parts.push(format!("{name} {exact} (primes {modular:?})"));
    }
    let t = ranks["x33^3"];
    let (b_det, b_perm) = (
        flattening_bound(ranks["det3"], t).unwrap(),
        flattening_bound(ranks["perm3"], t).unwrap(),
    );
    ok &= b_det == 14 && b_perm == 14;
    parts.push(format!("bounds {b_det}, {b_perm}"));
    outcome(ok, parts.join(", "))
}

fn criterion_3() -> Outcome {
    let m = minor_koszul_matrix(4, 2, 1).unwrap();
    let exact = exact_rank(&m.matrix);
    let modular = two_prime_rank(&m.matrix);
    let t = exact_rank(
        &full_koszul_matrix(&variable_power(4, VarIndex::new(4, 4), 4).unwrap(), 2, 1)
            .unwrap()
            .matrix,
    ) as u64;
    let bound = flattening_bound(exact as u64, t).unwrap();
    outcome(
        exact == 560 && modular == Some(560) && t == 15 && bound == 38,
        format!("rank {exact} (primes {modular:?}), t {t}, bound {bound}"),
    )
}

fn criterion_4() -> Outcome {
    let m = full_koszul_matrix(&determinant_poly(3).unwrap(), 1, 2).unwrap();
    let rank = exact_rank(&m.matrix) as u64;
    let power = full_koszul_matrix(&variable_power(3, VarIndex::new(3, 3), 3).unwrap(), 1, 2).unwrap();
    let t = exact_rank(&power.matrix) as u64;
    let bound = flattening_bound(rank, t).unwrap();
    outcome(
        t == 28 && t == binomial(8, 2) as u64 && bound == 12,
        format!("rank {rank}, t {t} = C(8,2), bound {bound}"),
    )
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let m = minor_koszul_matrix(5, 2, 2).unwrap();
    let rank = two_prime_rank(&m.matrix);
    let formula = f_image_dim(5, 2).unwrap();
    let image = theoretical_image_dim(5, 2, 2).unwrap();
    let t = binomial(24, 2) as u64;
    let Some(rank) = rank else {
        return outcome(false, "the two primes disagree");
    };
    let bound = flattening_bound(rank as u64, t).unwrap();
    let main = main_theorem_value(5).unwrap();
    outcome(
        rank == 29376
            && formula == big(29376)
            && image == 29376
            && bound == 107
            && main.integer_bound == BigInt::from(107),
        format!(
            "{}x{} rank {rank}, f(5,2)C(5,2)^2 = {formula}, image {image}, bound {bound}, formula value {} ({:.4}), {:.1} s",
            m.rows(),
            m.cols(),
            main.value,
            rational_f64(&main.value),
            start.elapsed().as_secs_f64()
        ),
    )
}

fn rational_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap()
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 5..=12usize {
        let lhs = main_theorem_value(n).unwrap().value * big(binomial((n * n - 1) as u64, 2));
        if lhs != f_image_dim(n, n / 2).unwrap() || lhs != big(theoretical_image_dim(n, n / 2, 2).unwrap()) {
            bad.push(format!("identity n={n}"));
        }
        if optimal_d(n).unwrap() != n / 2 {
            bad.push(format!("optimal d n={n}"));
        }
    }
    for n in 5..=20usize {
        let c = binomial(n as u64, (n / 2) as u64);
        let main = main_theorem_value(n).unwrap().value;
        if main <= big(c * c) || preliminary_theorem_value(n).unwrap().value >= main {
            bad.push(format!("ordering n={n}"));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = if bad.is_empty() { format!("{elapsed:.3} s") } else { bad.join(", ") };
    outcome(bad.is_empty() && elapsed < 1.0, detail)
}

fn criterion_7() -> Outcome {
    let mut failures = Vec::new();
    let mut count = 0;
    for n in 5..=8 {
        for lemma in LemmaId::ALL {
            count += 1;
            match verify_hwv_nonzero(lemma, n, n / 2) {
                Ok(r) if r.nonzero => {}
                Ok(_) => failures.push(format!("{lemma} n={n} vanishes")),
                Err(e) => failures.push(format!("{lemma} n={n}: {e}")),
            }
        }
    }
    let detail = if failures.is_empty() {
        format!("{count} projections nonzero")
    } else {
        failures.join(", ")
    };
    outcome(failures.is_empty(), detail)
}

fn criterion_8() -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;

    // low-rank bound inequality
    let mut worst = 0.0f64;
    for n in 2..=3usize {
        for p in 1..=2usize {
            let t = binomial((n * n - 1) as u64, p as u64) as usize;
            for seed in 0..50u64 {
                let r = 1 + seed as usize % 4;
                let poly = random_low_rank(r, n, n, seed).unwrap();
                let rank = rank_mod_p(&full_koszul_matrix(&poly, 1, p).unwrap().matrix, &PrimeField::default())
                    .unwrap()
                    .rank;
                ok &= rank <= r * t;
                worst = worst.max(rank as f64 / (r * t) as f64);
            }
        }
    }
    notes.push(format!("low rank: max rank/(rt) {worst:.3}"));

    // straightening idempotence over every filling of (3,2) with entries in 1..=3
    let shape = Partition::new(vec![3, 2]).unwrap();
    let mut idem = true;
    for word in (0..5).map(|_| 1u8..=3).multi_cartesian() {
        let t = Tableau::from_columns(&shape, &[word[0..2].to_vec(), word[2..4].to_vec(), word[4..5].to_vec()]).unwrap();
        for s in straighten(&t).keys() {
            let again = straighten(s);
            idem &= s.is_semistandard() && again.len() == 1 && again.contains_key(s);
        }
    }
    ok &= idem;
    notes.push(format!("idempotence {idem}"));

    // Kostka numbers: arrangements of a content span a space of dimension K_{lambda,mu}
    let mut kostka_ok = true;
    for (shape, content, kostka) in [
        (vec![2, 2], vec![1u8, 2, 3, 4], 2usize),
        (vec![2, 1, 1], vec![1, 2, 3, 4], 3),
        (vec![3, 1], vec![1, 1, 2, 3], 2),
        (vec![2, 2], vec![1, 1, 2, 2], 1),
    ] {
        let shape = Partition::new(shape).unwrap();
        let basis = ssyt_enumerate(&shape, 4);
        let counted = basis.iter().filter(|t| t.content() == content).count();
        let index: HashMap<&[u8], usize> = basis.iter().enumerate().map(|(i, t)| (t.word(), i)).collect();
        let lens = shape.conjugate().parts().to_vec();
        let mut entries = Vec::new();
        for (row, arr) in distinct_arrangements(&content).into_iter().enumerate() {
            let mut cols = Vec::new();
            let mut start = 0;
            for &l in &lens {
                cols.push(arr[start..start + l].to_vec());
                start += l;
            }
            let t = Tableau::from_columns(&shape, &cols).unwrap();
            for (s, c) in straighten(&t) {
                entries.push((row as u32, index[s.word()] as u32, flatrank::linalg::Scalar::from_rational(c)));
            }
        }
        let rows = distinct_arrangements(&content).len();
        let m = CooMatrix::from_triplets(rows, basis.len(), entries).unwrap();
        kostka_ok &= exact_rank(&m) == kostka && counted == kostka;
    }
    ok &= kostka_ok;
    notes.push(format!("kostka {kostka_ok}"));

    // modular versus rational battery
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut lower = 0;
    let mut above = 0;
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=40), rng.gen_range(1..=40));
        let k = rng.gen_range(1..=r.min(c));
        let a: Vec<Vec<i64>> = (0..r).map(|_| (0..k).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let b: Vec<Vec<i64>> = (0..k).map(|_| (0..c).map(|_| rng.gen_range(-5..=5)).collect()).collect();
        let dense: Vec<Vec<i64>> =
            (0..r).map(|i| (0..c).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect();
        let m = CooMatrix::from_dense(&dense);
        let exact = exact_rank(&m);
        for prime in [PrimeField::default(), PrimeField::new(SECOND_PRIME).unwrap()] {
            let modular = rank_mod_p(&m, &prime).unwrap().rank;
            above += usize::from(modular > exact);
            lower += usize::from(modular < exact);
        }
    }
    ok &= above == 0 && lower <= 10;
    notes.push(format!("battery: {lower} lower, {above} higher of 1000"));

    // thread-count determinism
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let m = minor_koszul_matrix(4, 2, 2).unwrap();
                let cert = rank_mod_p(&m.matrix, &PrimeField::default()).unwrap();
                (m, cert)
            })
    };
    let ((m1, c1), (m8, c8)) = (run(1), run(8));
    let same = m1 == m8 && c1.same_result(&c8);
    ok &= same;
    notes.push(format!("threads {same}"));
    outcome(ok, notes.join(", "))
}

fn criterion_9() -> Outcome {
    let baseline: serde_json::Value =
        serde_json::from_str(include_str!("../../cli/baseline.json")).unwrap();
    let recorded = baseline["ranks"]["koszul_minor/det/4/2/2"].as_u64();
    let m = minor_koszul_matrix(4, 2, 2).unwrap();
    let Some(rank) = two_prime_rank(&m.matrix) else {
        return outcome(false, "the two primes disagree");
    };
    let rank = rank as u64;
    let bound = flattening_bound(rank, 105).unwrap();
    let formula = theoretical_image_dim(4, 2, 2).unwrap() as u64;
    let passed = recorded == Some(rank) && rank <= 3990 && bound >= 38;
    outcome(
        passed,
        format!(
            "rank {rank} (baseline {recorded:?}), ceil(rank/105) = {bound}, rank <= 3990: {}, nine-module count {formula}",
            rank <= 3990
        ),
    )
}

trait MultiCartesian: Iterator + Sized {
    fn multi_cartesian(self) -> Vec<Vec<u8>>;
}

impl<I: Iterator<Item = std::ops::RangeInclusive<u8>>> MultiCartesian for I {
    fn multi_cartesian(self) -> Vec<Vec<u8>> {
        let mut out = vec![Vec::new()];
        for range in self {
            out = out
                .into_iter()
                .flat_map(|w| range.clone().map(move |v| {
                    let mut w = w.clone();
                    w.push(v);
                    w
                }))
                .collect();
        }
        out
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 Schur dimensions 1050/1050/70", criterion_1),
        ("2 Pieri ranks 70/950/934, bounds 14/14", criterion_2),
        ("3 minor n=4 p=1 rank 560, bound 38", criterion_3),
        ("4 full Koszul det3 bound 12, t = 28", criterion_4),
        ("5 minor n=5 p=2 rank 29376, bound 107", criterion_5),
        ("6 formula identities", criterion_6),
        ("7 highest weight vectors n=5..8", criterion_7),
        ("8 property suites", criterion_8),
        ("9 n=4 p=2 gap report", criterion_9),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let o = check();
        failed += usize::from(!o.passed);
        println!("{} criterion {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
