#![allow(clippy::needless_range_loop)]

//! Independent oracles and property tests.

use nalgebra::{DMatrix, Matrix3, Vector3};
use pcm_core::bounds::{certify, certify_scalars};
use pcm_core::*;
use proptest::prelude::*;

mod common;
use common::{kendall_oracle, ki_oracle, permutations, spearman_oracle};

fn from_upper(n: usize, upper: &[f64]) -> PcMatrix {
    let mut rows = vec![vec![1.0; n]; n];
    let mut it = upper.iter();
    for i in 0..n {
        for j in (i + 1)..n {
            let a = *it.next().unwrap();
            rows[i][j] = a;
            rows[j][i] = 1.0 / a;
        }
    }
    PcMatrix::new(rows).unwrap()
}

/// Upper-triangle comparisons log-uniform on `[1/9, 9]`.
fn arb_matrix(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = PcMatrix> {
    sizes.prop_flat_map(|n| {
        prop::collection::vec(-(9f64.ln())..9f64.ln(), n * (n - 1) / 2)
            .prop_map(move |logs| from_upper(n, &logs.iter().map(|l| l.exp()).collect::<Vec<_>>()))
    })
}

fn arb_weights(sizes: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<f64>> {
    sizes.prop_flat_map(|n| prop::collection::vec(0.01f64..10.0, n))
}

fn normalized(w: &[f64]) -> Vec<f64> {
    let s: f64 = w.iter().sum();
    w.iter().map(|x| x / s).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

// ---------------------------------------------------------------- KI

#[test]
fn ki_matches_triad_scan_on_example() {
    let m = io::parse_csv("1,2,8\n1/2,1,2\n1/8,1/2,1").unwrap();
    assert_eq!(ki_oracle(&m), 0.5);
    assert!((koczkodaj_ki(&m) - 0.5).abs() < 1e-15);
}

#[test]
fn random_consistent_has_zero_ki() {
    for n in 2..=10 {
        for seed in 0..1000 {
            let m = PcMatrix::random_consistent(n, seed, ScaleBound::default()).unwrap();
            assert!(koczkodaj_ki(&m) < 1e-12, "n={n} seed={seed}");
            assert!(ki_oracle(&m) < 1e-12);
            assert!(m.is_consistent(1e-9));
        }
    }
}

#[test]
fn strong_disturbance_is_usually_inconsistent() {
    let base = PcMatrix::random_consistent(3, 11, ScaleBound::default()).unwrap();
    let positive = (0..200)
        .filter(|&s| koczkodaj_ki(&base.disturb(30.0, s, None).unwrap()) > 0.0)
        .count();
    assert!(positive as f64 / 200.0 > 0.95, "{positive}/200");
}

#[test]
fn single_perturbation_ki() {
    for f in [1.0, 1.5, 2.0, 3.7, 9.0, 30.0] {
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let w = [0.5, 0.3, 0.2];
            let mut rows: Vec<Vec<f64>> = (0..3)
                .map(|a| (0..3).map(|b| w[a] / w[b]).collect())
                .collect();
            rows[i][j] *= f;
            rows[j][i] = 1.0 / rows[i][j];
            let m = PcMatrix::new(rows).unwrap();
            assert!((koczkodaj_ki(&m) - (1.0 - 1.0 / f)).abs() < 1e-10, "f={f}");
        }
    }
}

// ------------------------------------------------------ dense eigen oracle

/// Perron eigenpair of a 3x3 matrix via nalgebra's Schur-based eigenvalues
/// and a cross product of two rows of `A - λI` for the null vector.
fn eigen_oracle3(m: &PcMatrix) -> (f64, Vec<f64>) {
    let a = Matrix3::from_fn(|i, j| m.get(i, j));
    let lambda = a
        .complex_eigenvalues()
        .iter()
        .filter(|c| c.im.abs() < 1e-9)
        .map(|c| c.re)
        .fold(f64::MIN, f64::max);
    let s = a - Matrix3::identity() * lambda;
    let r0 = Vector3::new(s[(0, 0)], s[(0, 1)], s[(0, 2)]);
    let r1 = Vector3::new(s[(1, 0)], s[(1, 1)], s[(1, 2)]);
    let v = r0.cross(&r1);
    let sum = v.sum();
    (lambda, v.iter().map(|x| x / sum).collect())
}

fn lambda_oracle(m: &PcMatrix) -> f64 {
    let n = m.n();
    DMatrix::from_fn(n, n, |i, j| m.get(i, j))
        .complex_eigenvalues()
        .iter()
        .map(|c| c.re)
        .fold(f64::MIN, f64::max)
}

#[test]
fn evm_matches_dense_eigensolver() {
    let m = io::parse_csv("1,2,8\n1/2,1,2\n1/8,1/2,1").unwrap();
    let (lambda, w) = eigen_oracle3(&m);
    let ev = evm_default(&m).unwrap();
    assert!(max_abs_diff(ev.weights(), &w) < 1e-8);
    assert!((ev.lambda_max().unwrap() - lambda).abs() < 1e-8);
    let ci = saaty_ci(ev.lambda_max().unwrap(), 3).unwrap();
    assert!((ci - (lambda - 3.0) / 2.0).abs() < 1e-8);
    let report = InconsistencyReport::compute(&m).unwrap();
    assert!((report.ci - (lambda - 3.0) / 2.0).abs() < 1e-8);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn evm_residual_and_oracle(m in arb_matrix(3..=3)) {
        let ev = evm_default(&m).unwrap();
        let lambda = ev.lambda_max().unwrap();
        let (l_or, w_or) = eigen_oracle3(&m);
        prop_assert!((lambda - l_or).abs() < 1e-8);
        prop_assert!(max_abs_diff(ev.weights(), &w_or) < 1e-8);
        let n = m.n();
        let residual: f64 = (0..n)
            .map(|i| (m.row(i).iter().zip(ev.weights()).map(|(a, w)| a * w).sum::<f64>()
                - lambda * ev.weights()[i]).abs())
            .sum();
        prop_assert!(residual <= 1e-8 * lambda);
    }

    #[test]
    fn lambda_max_at_least_n(m in arb_matrix(2..=7)) {
        let ev = evm_default(&m).unwrap();
        let lambda = ev.lambda_max().unwrap();
        prop_assert!(lambda >= m.n() as f64 - 1e-9);
        prop_assert!((lambda - lambda_oracle(&m)).abs() < 1e-7);
        // λmax = n exactly when the matrix is consistent; these random
        // matrices are consistent only for n = 2.
        let consistent = m.is_consistent(1e-9);
        prop_assert_eq!(consistent, (lambda - m.n() as f64).abs() < 1e-9);
    }

    #[test]
    fn weights_sum_to_one(m in arb_matrix(2..=9)) {
        let ev = evm_default(&m).unwrap();
        let gm = gmm(&m);
        for w in [&ev, &gm] {
            prop_assert!((w.weights().iter().sum::<f64>() - 1.0).abs() < 1e-10);
            prop_assert!(w.weights().iter().all(|&x| x > 0.0));
        }
    }

    #[test]
    fn methods_coincide_when_consistent(w in arb_weights(2..=10)) {
        let m = PcMatrix::from_weights(&w).unwrap();
        prop_assert!(m.is_consistent(1e-9));
        let ev = evm_default(&m).unwrap();
        let gm = gmm(&m);
        prop_assert!(max_abs_diff(ev.weights(), gm.weights()) < 1e-8);
        prop_assert!(max_abs_diff(gm.weights(), &normalized(&w)) < 1e-10);
        prop_assert!((ev.lambda_max().unwrap() - m.n() as f64).abs() < 1e-9);
        prop_assert!(koczkodaj_ki(&m) < 1e-12);
        let md = manhattan_distance(&ev, &gm).unwrap();
        prop_assert!(md < 2e-8);
    }

    #[test]
    fn methods_coincide_for_three_objects(m in arb_matrix(3..=3)) {
        let ev = evm_default(&m).unwrap();
        prop_assert!(max_abs_diff(ev.weights(), gmm(&m).weights()) < 1e-8);
    }

    #[test]
    fn gm_scale_equivariance(m in arb_matrix(3..=7), pick in 0usize..7, c in 1.01f64..5.0) {
        let n = m.n();
        let i = pick % n;
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|s| {
                let a = m.get(r, s);
                if r == s { a } else if r == i { a * c } else if s == i { a / c } else { a }
            }).collect())
            .collect();
        let scaled = PcMatrix::new(rows).unwrap();
        let before = ordinal_ranking(&gmm(&m));
        let after = ordinal_ranking(&gmm(&scaled));
        prop_assert!(gmm(&scaled).weights()[i] > gmm(&m).weights()[i]);
        prop_assert!(after.rank_of()[i] <= before.rank_of()[i]);
        let others = |o: &OrdinalRanking| o.order().iter().copied().filter(|&x| x != i).collect::<Vec<_>>();
        prop_assert_eq!(others(&before), others(&after));
    }

    #[test]
    fn reciprocity_survives_disturbance(
        m in arb_matrix(2..=8), beta in 1.0f64..50.0, seed: u64, clamp: bool,
    ) {
        let bound = clamp.then(ScaleBound::fundamental);
        let d = m.disturb(beta, seed, bound).unwrap();
        for i in 0..m.n() {
            for j in 0..m.n() {
                prop_assert!((d.get(i, j) * d.get(j, i) - 1.0).abs() <= 1e-12);
            }
        }
        prop_assert_eq!(d, m.disturb(beta, seed, bound).unwrap());
    }

    #[test]
    fn ki_matches_oracle(m in arb_matrix(2..=6)) {
        let ki = koczkodaj_ki(&m);
        prop_assert!((ki - ki_oracle(&m)).abs() < 1e-12);
        prop_assert!((0.0..1.0).contains(&ki));
    }

    #[test]
    fn ki_relabel_and_transpose_invariant(m in arb_matrix(3..=6), perm_seed: u64) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut perm: Vec<usize> = (0..m.n()).collect();
        perm.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed));
        let ki = koczkodaj_ki(&m);
        prop_assert!((koczkodaj_ki(&m.permuted(&perm).unwrap()) - ki).abs() < 1e-12);
        prop_assert!((koczkodaj_ki(&m.transposed()) - ki).abs() < 1e-12);
    }

    #[test]
    fn ki_zero_iff_ci_zero(m in arb_matrix(2..=6), consistent: bool, w in arb_weights(2..=6)) {
        let m = if consistent { PcMatrix::from_weights(&w).unwrap() } else { m };
        let r = InconsistencyReport::compute(&m).unwrap();
        prop_assert_eq!(r.ki < 1e-12, r.ci <= 1e-9);
        prop_assert_eq!(r.kappa, 1.0 - r.ki);
        prop_assert!(r.ci >= -1e-9);
    }

    #[test]
    fn md_within_simplex_range(m in arb_matrix(2..=9)) {
        let md = manhattan_distance(&evm_default(&m).unwrap(), &gmm(&m)).unwrap();
        prop_assert!((0.0..2.0).contains(&md));
    }

    #[test]
    fn distance_bound_holds(m in arb_matrix(3..=8)) {
        let md = manhattan_distance(&evm_default(&m).unwrap(), &gmm(&m)).unwrap();
        let (lo, hi) = md_bounds(koczkodaj_ki(&m)).unwrap();
        prop_assert!(lo <= md && md <= hi + 1e-8);
    }

    #[test]
    fn find_k_inequalities(d in 1e-4f64..1.0, budget in 1e-4f64..2.0, n in 2usize..12) {
        let k = find_k(d, budget, n).unwrap();
        let cap = n * (n - 1) / 2;
        prop_assert!(k <= cap);
        prop_assert!((k as f64) * d < budget || k == 0);
        if k < cap {
            prop_assert!((k + 1) as f64 * d >= budget);
        }
    }

    #[test]
    fn gap_never_exceeds_feasible_max(w in arb_weights(2..=10)) {
        let w = normalized(&w);
        let pv = PriorityVector::new(w, Method::Ev, None).unwrap();
        if let Ok((d, d_star)) = weight_gaps(&pv) {
            prop_assert!(d <= max_feasible_gap(pv.len()) + 1e-12);
            prop_assert!(d <= d_star);
        }
    }

    #[test]
    fn certificate_invariants(w in arb_weights(2..=8), ki in 0.0f64..0.95) {
        let pv = PriorityVector::new(normalized(&w), Method::Ev, None).unwrap();
        let Ok(c) = certify(&pv, ki) else { return Ok(()) };
        prop_assert!(c.md_lower <= 0.0 && 0.0 <= c.distance_budget);
        prop_assert!(c.d <= c.d_star);
        prop_assert!(c.max_swaps <= c.n * (c.n - 1) / 2);
        prop_assert!(!c.prop1_holds || c.prop2_holds);
        prop_assert_eq!(c.prop1_holds, c.max_swaps == 0);
        prop_assert!((-1.0..=1.0).contains(&c.tau_lower));
        prop_assert!(c.rho_lower <= 1.0);
        prop_assert_eq!(c.prop1_holds, prop1_certify(&pv, ki).unwrap());
        prop_assert_eq!(c.prop2_holds, prop2_certify(&pv, ki).unwrap());
    }

    #[test]
    fn certificate_soundness_on_random_matrices(m in arb_matrix(3..=6)) {
        let ev = evm_default(&m).unwrap();
        let gm = gmm(&m);
        let (o_ev, o_gm) = (ordinal_ranking(&ev), ordinal_ranking(&gm));
        prop_assume!(!o_ev.has_ties() && !o_gm.has_ties());
        let c = full_certificate(&m).unwrap();
        if c.prop1_holds {
            prop_assert_eq!(o_ev.order(), o_gm.order());
        }
        if c.prop2_holds {
            prop_assert_eq!(o_ev.best(), o_gm.best());
        }
        prop_assert!(kendall_tau(&o_ev, &o_gm).unwrap() >= c.tau_lower - 1e-12);
        prop_assert!(spearman_rho(&o_ev, &o_gm).unwrap() >= c.rho_lower - 1e-12);
    }
}

#[test]
fn disturbed_certificate_fields_recompute() {
    for seed in 0..50 {
        let base = PcMatrix::random_consistent(5, seed, ScaleBound::default()).unwrap();
        let m = base.disturb(1.5, seed + 1000, None).unwrap();
        let c = full_certificate(&m).unwrap();
        // Recompute every field from primitives.
        let ev = evm_default(&m).unwrap();
        let mut w = ev.weights().to_vec();
        w.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let d = w.windows(2).map(|p| p[0] - p[1]).fold(f64::INFINITY, f64::min);
        let ki = ki_oracle(&m);
        let kappa = 1.0 - ki;
        let budget = 1.0 / (kappa * kappa) - 1.0;
        let mut k = 0;
        while k < 10 && ((k + 1) as f64) * d < budget {
            k += 1;
        }
        assert!((c.d - d).abs() < 1e-15);
        assert!((c.d_star - (w[0] - w[1])).abs() < 1e-15);
        assert!((c.ki - ki).abs() < 1e-12);
        assert!((c.distance_budget - budget).abs() < 1e-10);
        assert_eq!(c.max_swaps, k);
        assert_eq!(c.prop1_holds, d > budget);
        assert_eq!(c.tau_lower, (10.0 - 2.0 * k as f64) / 10.0);
        assert!((c.rho_lower - (1.0 - 6.0 * (k * k + k) as f64 / 120.0)).abs() < 1e-15);
    }
}

#[test]
fn example_scalars_through_certificate() {
    let c = certify_scalars(3, 0.03, 0.2, 0.3).unwrap();
    assert!(c.prop1_holds && c.prop2_holds);
    let c = certify_scalars(5, 0.11, 0.08, 0.08).unwrap();
    assert_eq!(c.max_swaps, 3);
    assert_eq!(c.tau_lower, 0.4);
}

// ----------------------------------------------------- rank correlations

#[test]
fn correlations_match_exhaustive_oracle() {
    for n in 2..=5 {
        let perms = permutations(n);
        for x in &perms {
            let rx = OrdinalRanking::from_order(x.clone()).unwrap();
            let rev: Vec<usize> = x.iter().rev().copied().collect();
            for y in &perms {
                let ry = OrdinalRanking::from_order(y.clone()).unwrap();
                let tau = kendall_tau(&rx, &ry).unwrap();
                let rho = spearman_rho(&rx, &ry).unwrap();
                assert_eq!(tau, kendall_oracle(x, y));
                assert_eq!(rho, spearman_oracle(x, y));
                assert_eq!(tau, kendall_tau(&ry, &rx).unwrap());
                assert_eq!(rho, spearman_rho(&ry, &rx).unwrap());
                assert_eq!(tau == 1.0, x == y);
                assert_eq!(rho == 1.0, x == y);
                assert_eq!(tau == -1.0, *y == rev);
                assert_eq!(rho == -1.0, *y == rev);
            }
        }
    }
}

#[test]
fn correlations_invariant_under_relabeling() {
    let perms = permutations(4);
    for relabel in &perms {
        for x in &perms[..6] {
            for y in &perms[6..12] {
                let map = |o: &Vec<usize>| o.iter().map(|&i| relabel[i]).collect::<Vec<_>>();
                let (a, b) = (
                    OrdinalRanking::from_order(x.clone()).unwrap(),
                    OrdinalRanking::from_order(y.clone()).unwrap(),
                );
                let (c, d) = (
                    OrdinalRanking::from_order(map(x)).unwrap(),
                    OrdinalRanking::from_order(map(y)).unwrap(),
                );
                assert_eq!(kendall_tau(&a, &b), kendall_tau(&c, &d));
                assert_eq!(spearman_rho(&a, &b), spearman_rho(&c, &d));
            }
        }
    }
}
