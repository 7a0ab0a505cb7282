use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use flatrank::combinat::{binomial, monomials, permutations_with_sign};
use flatrank::flattening::{
    full_koszul_matrix, minor_image_of_basis, minor_koszul_matrix, BasisLabel, FlatteningMatrix,
};
use flatrank::linalg::{rank_mod_p, rank_rational, CooMatrix, PrimeField, RankOptions, Scalar};
use flatrank::partitions::{pieri_column, pieri_row, schur_dim, Partition};
use flatrank::polynomials::{
    contract, determinant_poly, monomial, random_low_rank, Polynomial, VarIndex,
};
use flatrank::schur::{ssyt_enumerate, straighten, Tableau};

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn partition() -> impl Strategy<Value = Partition> {
    prop::collection::vec(1usize..8, 0..8).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition::new(v).unwrap()
    })
}

fn modular_rank(m: &CooMatrix) -> usize {
    rank_mod_p(m, &PrimeField::default()).unwrap().rank
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn conjugation_is_an_involution(pi in partition()) {
        prop_assert_eq!(pi.conjugate().conjugate(), pi.clone());
        prop_assert_eq!(pi.conjugate().size(), pi.size());
    }

    #[test]
    fn column_pieri_is_conjugate_row_pieri(pi in partition(), k in 0usize..4) {
        let mut via_rows: Vec<Partition> =
            pieri_row(&pi.conjugate(), k, 64).iter().map(|m| m.conjugate()).collect();
        via_rows.sort();
        let mut direct = pieri_column(&pi, k, 64);
        direct.sort();
        prop_assert_eq!(direct, via_rows);
    }

    #[test]
    fn tableau_count_is_schur_dimension(pi in partition(), n in 1usize..10) {
        let dim = schur_dim(&pi, n);
        prop_assume!(pi.size() <= 12 && dim <= 5000);
        prop_assert_eq!(ssyt_enumerate(&pi, n).len() as u128, dim);
    }

    #[test]
    fn straightening_is_idempotent_and_keeps_content(
        entries in prop::collection::vec(1u8..5, 5),
        shape_idx in 0usize..4,
    ) {
        let shapes = [vec![3, 2], vec![2, 2, 1], vec![3, 1, 1], vec![2, 1, 1, 1]];
        let shape = Partition::new(shapes[shape_idx].clone()).unwrap();
        let lens = shape.conjugate().parts().to_vec();
        let mut cols = Vec::new();
        let mut start = 0;
        for l in lens {
            cols.push(entries[start..start + l].to_vec());
            start += l;
        }
        let t = Tableau::from_columns(&shape, &cols).unwrap();
        for (s, c) in straighten(&t) {
            prop_assert!(s.is_semistandard());
            prop_assert!(!c.is_zero());
            prop_assert_eq!(s.content(), t.content());
            let again = straighten(&s);
            prop_assert_eq!(again.len(), 1);
            prop_assert_eq!(&again[&s], &q(1));
        }
    }

    #[test]
    fn contraction_is_bilinear_and_matches_differentiation(seed in any::<u64>(), n in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = rng.gen_range(1..=4usize);
        let m = rng.gen_range(0..=e);
        let random_poly = |rng: &mut ChaCha8Rng, deg: usize| {
            let monos = monomials(n * n, deg);
            let terms: Vec<_> = (0..4)
                .map(|_| (monos[rng.gen_range(0..monos.len())].clone(), q(rng.gen_range(-4..=4))))
                .collect();
            Polynomial::from_terms(n, deg, terms).unwrap()
        };
        let p1 = random_poly(&mut rng, e);
        let p2 = random_poly(&mut rng, e);
        let monos = monomials(n * n, m);
        let a = monos[rng.gen_range(0..monos.len())].clone();
        let alpha = monomial(n, a.clone()).unwrap();

        let sum = contract(&alpha, &p1.add(&p2).unwrap()).unwrap();
        let parts = contract(&alpha, &p1).unwrap().add(&contract(&alpha, &p2).unwrap()).unwrap();
        prop_assert_eq!(&sum, &parts);

        let mut derived = p1.clone();
        for (var, &k) in a.iter().enumerate() {
            for _ in 0..k {
                derived = derived.partial(var);
            }
        }
        prop_assert_eq!(contract(&alpha, &p1).unwrap(), derived);
    }

    #[test]
    fn rank_is_invariant_under_permutations(
        rows in 1usize..16,
        cols in 1usize..16,
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dense: Vec<Vec<i64>> = (0..rows)
            .map(|_| (0..cols).map(|_| if rng.gen_bool(0.3) { rng.gen_range(-5..=5) } else { 0 }).collect())
            .collect();
        let m = CooMatrix::from_dense(&dense);
        let mut rp: Vec<usize> = (0..rows).collect();
        let mut cp: Vec<usize> = (0..cols).collect();
        for i in (1..rows).rev() { rp.swap(i, rng.gen_range(0..=i)); }
        for i in (1..cols).rev() { cp.swap(i, rng.gen_range(0..=i)); }
        let pm = m.permuted(&rp, &cp);
        prop_assert_eq!(modular_rank(&m), modular_rank(&pm));
        prop_assert_eq!(
            rank_rational(&m, &RankOptions::default()).unwrap().rank,
            rank_rational(&pm, &RankOptions::default()).unwrap().rank
        );
    }

    #[test]
    fn scaling_phi_keeps_pieri_rank(num in 1i64..7, den in 1i64..7) {
        let shape = Partition::new(vec![1, 1]).unwrap();
        let det = determinant_poly(2).unwrap();
        let scaled = det.scale(&BigRational::new(num.into(), den.into()));
        let a = flatrank::schur::pieri_flattening_matrix(&det, &shape, &[1, 3], 4).unwrap();
        let b = flatrank::schur::pieri_flattening_matrix(&scaled, &shape, &[1, 3], 4).unwrap();
        prop_assert_eq!(modular_rank(&a.matrix), modular_rank(&b.matrix));
    }
}

#[test]
fn modular_and_rational_ranks_agree_on_random_matrices() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (f1, f2) = (PrimeField::default(), PrimeField::new(1000003).unwrap());
    let mut lower = 0;
    for trial in 0..500 {
        let rows = rng.gen_range(1..=40);
        let cols = rng.gen_range(1..=40);
        let density = rng.gen_range(0.05..0.6);
        // half of the matrices are products of thin factors, so rank deficiency is common
        let dense: Vec<Vec<i64>> = if trial % 2 == 0 {
            (0..rows)
                .map(|_| (0..cols).map(|_| if rng.gen_bool(density) { rng.gen_range(-5..=5) } else { 0 }).collect())
                .collect()
        } else {
            let k = rng.gen_range(1..=rows.min(cols));
            let a: Vec<Vec<i64>> = (0..rows).map(|_| (0..k).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            let b: Vec<Vec<i64>> = (0..k).map(|_| (0..cols).map(|_| rng.gen_range(-2..=2)).collect()).collect();
            (0..rows)
                .map(|i| (0..cols).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect())
                .collect()
        };
        let m = CooMatrix::from_dense(&dense);
        let exact = rank_rational(&m, &RankOptions::default()).unwrap().rank;
        let r1 = rank_mod_p(&m, &f1).unwrap().rank;
        let r2 = rank_mod_p(&m, &f2).unwrap().rank;
        assert!(r1 <= exact && r2 <= exact, "trial {trial}: modular rank above rational");
        if r1 < exact || r2 < exact {
            lower += 1;
        }
    }
    assert!(lower <= 5, "{lower} of 500 matrices lost rank modulo a prime");
}

#[test]
fn low_rank_polynomials_satisfy_the_flattening_inequality() {
    for n in 2..=3usize {
        for p in 1..=2usize {
            let t = binomial((n * n - 1) as u64, p as u64) as usize;
            for seed in 0..50u64 {
                let r = 1 + (seed as usize % 4);
                let poly = random_low_rank(r, n, n, seed).unwrap();
                let m = full_koszul_matrix(&poly, 1, p).unwrap();
                let rank = modular_rank(&m.matrix);
                assert!(rank <= r * t, "n={n} p={p} seed={seed}: rank {rank} > {r} * {t}");
            }
        }
    }
}

fn random_invertible(n: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
    loop {
        let g: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect()).collect();
        if modular_rank(&CooMatrix::from_dense(&g)) == n {
            return g;
        }
    }
}

#[test]
fn flattening_rank_is_invariant_under_change_of_basis() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for (n, d, p) in [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1)] {
        let det = determinant_poly(n).unwrap();
        let base = modular_rank(&full_koszul_matrix(&det, d, p).unwrap().matrix);
        for _ in 0..3 {
            let (g, h) = (random_invertible(n, &mut rng), random_invertible(n, &mut rng));
            let moved = det.substitute_two_sided(&g, &h);
            let rank = modular_rank(&full_koszul_matrix(&moved, d, p).unwrap().matrix);
            assert_eq!(rank, base, "n={n} d={d} p={p}");
        }
    }
}

/// `Delta^I_J` expanded by permutations, in the `n^2` variables.
fn minor_polynomial(n: usize, rows: &[usize], cols: &[usize]) -> BTreeMap<Vec<u16>, i64> {
    let mut out = BTreeMap::new();
    for (perm, sign) in permutations_with_sign(rows.len()) {
        let mut e = vec![0u16; n * n];
        for (a, &b) in perm.iter().enumerate() {
            e[VarIndex::new(rows[a], cols[b]).index(n)] += 1;
        }
        *out.entry(e).or_insert(0) += sign as i64;
    }
    out
}

fn index_of(labels: &[BasisLabel]) -> HashMap<&BasisLabel, usize> {
    labels.iter().enumerate().map(|(i, l)| (l, i)).collect()
}

/// Each minor column `Delta^I_J (x) w` is the full column `w (x) alpha`
/// with `alpha` the product of the complementary variables, up to the sign
/// of `alpha _| det` against `Delta^I_J`.
fn check_restriction(n: usize, d: usize, p: usize) {
    let det = determinant_poly(n).unwrap();
    let minor: FlatteningMatrix = minor_koszul_matrix(n, d, p).unwrap();
    let full = full_koszul_matrix(&det, d, p).unwrap();
    let full_cols = index_of(&full.col_labels);
    let full_rows = index_of(&full.row_labels);
    for label in &minor.col_labels {
        let BasisLabel::Minor { rows, cols, wedge, .. } = label else {
            panic!("unexpected label {label}");
        };
        let rc: Vec<usize> = (1..=n).filter(|i| !rows.contains(i)).collect();
        let cc: Vec<usize> = (1..=n).filter(|j| !cols.contains(j)).collect();
        let mut alpha = vec![0u16; n * n];
        for (&i, &j) in rc.iter().zip(&cc) {
            alpha[VarIndex::new(i, j).index(n)] += 1;
        }
        let cat = contract(&monomial(n, alpha.clone()).unwrap(), &det).unwrap();
        let expanded = minor_polynomial(n, rows, cols);
        let (e0, c0) = expanded.iter().next().unwrap();
        let eps = cat.coefficient(e0) / q(*c0);
        assert!(eps == q(1) || eps == q(-1));

        let mut expected: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (r2, c2, w2, sign) in minor_image_of_basis(n, rows, cols, wedge) {
            for (e, coef) in minor_polynomial(n, &r2, &c2) {
                let key = BasisLabel::Koszul { wedge: w2.clone(), monomial: e, n };
                *expected.entry(full_rows[&key]).or_insert_with(BigRational::zero) +=
                    &eps * q(sign as i64 * coef);
            }
        }
        expected.retain(|_, v| !v.is_zero());
        let col = full_cols[&BasisLabel::Koszul { wedge: wedge.clone(), monomial: alpha, n }];
        let actual: BTreeMap<usize, BigRational> = full.matrix.column(col).into_iter().collect();
        assert_eq!(actual, expected, "column {label}");
    }
    assert!(modular_rank(&minor.matrix) <= modular_rank(&full.matrix));
}

#[test]
fn minor_map_is_a_restriction_of_the_full_map() {
    for (n, d, p) in [(2, 1, 1), (2, 1, 2), (3, 1, 1), (3, 1, 2), (3, 2, 1), (3, 2, 2)] {
        check_restriction(n, d, p);
    }
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let det = determinant_poly(3).unwrap();
    let run = |threads| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let full = full_koszul_matrix(&det, 1, 2).unwrap();
            let minor = minor_koszul_matrix(4, 2, 2).unwrap();
            let field = PrimeField::default();
            let certs = (
                rank_mod_p(&full.matrix, &field).unwrap(),
                rank_mod_p(&minor.matrix, &field).unwrap(),
                rank_rational(&full.matrix, &RankOptions::default()).unwrap(),
            );
            (full, minor, certs)
        })
    };
    let (f1, m1, c1) = run(1);
    let (f4, m4, c4) = run(4);
    assert_eq!(f1, f4);
    assert_eq!(m1, m4);
    assert!(c1.0.same_result(&c4.0));
    assert!(c1.1.same_result(&c4.1));
    assert!(c1.2.same_result(&c4.2));
}

#[test]
fn identity_and_all_ones_evaluations() {
    for n in 1..=4usize {
        let identity: Vec<BigRational> =
            (0..n * n).map(|k| if k / n == k % n { BigRational::one() } else { BigRational::zero() }).collect();
        assert_eq!(determinant_poly(n).unwrap().evaluate(&identity), q(1));
        let ones = vec![BigRational::one(); n * n];
        let fact: i64 = (1..=n as i64).product();
        assert_eq!(flatrank::polynomials::permanent_poly(n).unwrap().evaluate(&ones), q(fact));
    }
}

#[test]
fn dense_and_coo_agree_on_scalars() {
    let m = CooMatrix::from_triplets(
        2,
        2,
        [
            (0, 0, Scalar::Int(2)),
            (1, 1, Scalar::from_rational(BigRational::new(1.into(), 3.into()))),
        ],
    )
    .unwrap();
    assert_eq!(rank_rational(&m, &RankOptions::default()).unwrap().rank, 2);
}
