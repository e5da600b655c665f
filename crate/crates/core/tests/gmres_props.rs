mod common;

use common::*;
use lrgmres::dense::{cholesky, lu_factor, Matrix, Vector};
use lrgmres::generators::{eigvec_cond_case, householder_lee_case, SpectrumSpec};
use lrgmres::{
    gmres_solve, run_left_right_pair, stopping_report, true_residual_norm, GmresConfig,
    GmresResult, GmresStatus, LinearOperator, PreconditionerPair, PreconditioningMode,
    StoppingVerdict,
};
use proptest::prelude::*;

fn system(n: usize, seed: u64) -> (LinearOperator, Vector, Vector) {
    let a = LinearOperator::Dense(shifted_random(n, 1.0, 4.0, 1.0, seed));
    let b = gaussian_vector(n, seed.wrapping_add(1));
    let x0 = gaussian_vector(n, seed.wrapping_add(2)).scaled(0.1);
    (a, b, x0)
}

fn dense_precond(n: usize, seed: u64) -> LinearOperator {
    LinearOperator::Dense(shifted_random(n, 0.5, 2.0, 0.5, seed ^ 0x5EED))
}

fn pair_for(mode: PreconditioningMode, n: usize, seed: u64) -> PreconditionerPair {
    match mode {
        PreconditioningMode::NoPrecond => PreconditionerPair::none(n),
        PreconditioningMode::Left => PreconditionerPair::left(dense_precond(n, seed)),
        PreconditioningMode::Right => PreconditionerPair::right(dense_precond(n, seed)),
        PreconditioningMode::Split => PreconditionerPair::new(
            dense_precond(n, seed),
            LinearOperator::Diagonal(positive_diagonal(n, 0.5, 2.0, seed ^ 9)),
        )
        .unwrap(),
    }
}

fn cfg(mode: PreconditioningMode, rtol: f64, max_iter: usize) -> GmresConfig {
    GmresConfig {
        mode,
        rtol_preconditioned: rtol,
        max_iter,
        ..GmresConfig::default()
    }
}

fn solve(
    a: &LinearOperator,
    b: &Vector,
    x0: &Vector,
    pair: &PreconditionerPair,
    config: &GmresConfig,
) -> GmresResult {
    gmres_solve(a, b, x0, pair, config).unwrap()
}

fn iterates_rel_diff(r1: &GmresResult, r2: &GmresResult) -> f64 {
    r1.history
        .iterates
        .iter()
        .zip(&r2.history.iterates)
        .map(|(x, y)| rel_err(x, y))
        .fold(0.0, f64::max)
}

const MODES: [PreconditioningMode; 4] = [
    PreconditioningMode::NoPrecond,
    PreconditioningMode::Left,
    PreconditioningMode::Right,
    PreconditioningMode::Split,
];

#[test]
fn identity_system_converges_at_first_step() {
    let b = gaussian_vector(5, 1);
    let r = solve(
        &LinearOperator::Identity(5),
        &b,
        &Vector::zeros(5),
        &PreconditionerPair::none(5),
        &GmresConfig::default(),
    );
    assert_eq!(r.iterations, 1);
    assert!(r.history.preconditioned[1] <= 1e-15 * b.norm());
}

#[test]
fn right_mode_on_six_by_six_matches_krylov_oracle() {
    let (a, b, _) = system(6, 77);
    let h = dense_precond(6, 77);
    let x0 = Vector::zeros(6);
    let r = solve(
        &a,
        &b,
        &x0,
        &PreconditionerPair::right(h.clone()),
        &cfg(PreconditioningMode::Right, 1e-14, 6),
    );
    let ah = naive_matmul(&a.as_dense(), &h.as_dense());
    let oracle = krylov_least_squares(&ah, &b, r.iterations);
    for k in 1..=r.iterations {
        let t = r.history.true_residual[k].unwrap();
        assert!((t - oracle[k]).abs() <= 1e-9 * b.norm(), "k = {k}");
    }
}

#[test]
fn stopping_report_for_badly_scaled_left_preconditioner() {
    let n = 30;
    let d: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
    let a = LinearOperator::Diagonal(Vector::new(d).unwrap());
    let hd: Vec<f64> = (0..n)
        .map(|i| 10f64.powf(-6.0 * i as f64 / (n - 1) as f64))
        .collect();
    let h = LinearOperator::Diagonal(Vector::new(hd).unwrap());
    let b = gaussian_vector(n, 3);
    let rtol = 1e-6;
    let r = solve(
        &a,
        &b,
        &Vector::zeros(n),
        &PreconditionerPair::left(h),
        &cfg(PreconditioningMode::Left, 1e-13, n),
    );
    let report = stopping_report(&r.history, rtol).unwrap();
    let pre = r.history.preconditioned_relative();
    let tru = r.history.true_relative();
    let kp = pre.iter().position(|&x| x <= rtol);
    let kt = tru.iter().position(|x| x.unwrap() <= rtol);
    assert_eq!(report.k_preconditioned, kp);
    assert_eq!(report.k_true, kt);
    let expected = match kp.cmp(&kt) {
        std::cmp::Ordering::Less => StoppingVerdict::Premature,
        std::cmp::Ordering::Greater => StoppingVerdict::Delayed,
        std::cmp::Ordering::Equal => StoppingVerdict::Aligned,
    };
    assert_eq!(report.verdict, expected);
    assert_ne!(report.verdict, StoppingVerdict::Aligned);
}

#[test]
fn unpreconditioned_and_right_runs_stop_aligned() {
    let (a, b, x0) = system(20, 5);
    for pair in [
        PreconditionerPair::none(20),
        PreconditionerPair::right(dense_precond(20, 5)),
    ] {
        let mode = if pair.right.is_identity() {
            PreconditioningMode::NoPrecond
        } else {
            PreconditioningMode::Right
        };
        let r = solve(&a, &b, &x0, &pair, &cfg(mode, 1e-10, 40));
        let rep = stopping_report(&r.history, 1e-8).unwrap();
        assert_eq!(rep.verdict, StoppingVerdict::Aligned);
    }
}

#[test]
fn strongly_nonnormal_right_runs_do_not_stop_early() {
    // ||A H v|| reaches 1e6 or more here while the next Arnoldi direction is
    // still genuine, so a bare `h <= tol ||M v||` test would stop at k = 2.
    for seed in [4, 6, 7] {
        let case = eigvec_cond_case(100, 1e8, SpectrumSpec::default(), seed, seed + 1).unwrap();
        let mode = PreconditioningMode::Right;
        let r = solve(
            &case.a,
            &case.b,
            &case.x0,
            &mode.pair_for(case.h.clone()),
            &cfg(mode, 1e-10, 100),
        );
        assert_eq!(
            r.status,
            GmresStatus::ConvergedPreconditioned,
            "seed {seed}"
        );
        assert!(r.iterations > 2);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn minimized_residuals_match_krylov_oracle(n in 2usize..=8, seed in any::<u64>(), m in 0usize..4) {
        let mode = MODES[m];
        let (a, b, x0) = system(n, seed);
        let pair = pair_for(mode, n, seed);
        let r = solve(&a, &b, &x0, &pair, &cfg(mode, 1e-15, n));
        let mm = naive_matmul(&naive_matmul(&pair.left.as_dense(), &a.as_dense()), &pair.right.as_dense());
        let r0: Vec<f64> = b.iter().zip(naive_mat_vec(&a.as_dense(), &x0)).map(|(b, ax)| b - ax).collect();
        let pr0 = naive_mat_vec(&pair.left.as_dense(), &r0);
        let oracle = krylov_least_squares(&mm, &pr0, r.iterations);
        for k in 0..=r.iterations {
            prop_assert!(
                (r.history.preconditioned[k] - oracle[k]).abs() <= 1e-9 * norm(&pr0),
                "k = {}: {} vs {}", k, r.history.preconditioned[k], oracle[k]
            );
        }
    }

    #[test]
    fn preconditioned_residuals_never_increase(n in 2usize..=40, seed in any::<u64>(), m in 0usize..4) {
        let mode = MODES[m];
        let (a, b, x0) = system(n, seed);
        let r = solve(&a, &b, &x0, &pair_for(mode, n, seed), &cfg(mode, 1e-12, n));
        let p = &r.history.preconditioned;
        for w in p.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
        if r.status == GmresStatus::ConvergedPreconditioned {
            prop_assert!(r.history.preconditioned_relative()[r.iterations] <= 1e-12);
        }
    }

    #[test]
    fn sampled_true_residuals_are_exact(n in 2usize..=30, seed in any::<u64>(), stride in 1usize..4) {
        let (a, b, x0) = system(n, seed);
        let pair = pair_for(PreconditioningMode::Left, n, seed);
        let config = GmresConfig {
            true_residual_stride: stride,
            store_iterates: true,
            ..cfg(PreconditioningMode::Left, 1e-12, n)
        };
        let r = solve(&a, &b, &x0, &pair, &config);
        for (k, t) in r.history.true_residual.iter().enumerate() {
            let sampled = k % stride == 0 || k == r.iterations;
            prop_assert_eq!(t.is_some(), sampled);
            if let Some(t) = t {
                let want = true_residual_norm(&a, &b, &r.history.iterates[k]).unwrap();
                prop_assert!((t - want).abs() <= 1e-12 * b.norm().max(want));
            }
        }
        let final_true = true_residual_norm(&a, &b, &r.x).unwrap();
        prop_assert!((r.history.true_residual[r.iterations].unwrap() - final_true).abs() <= 1e-12 * b.norm());
    }

    #[test]
    fn right_true_residual_never_exceeds_left(n in 2usize..=40, seed in any::<u64>(), diagonal in any::<bool>()) {
        let (a, b, x0) = system(n, seed);
        let h = if diagonal {
            LinearOperator::Diagonal(positive_diagonal(n, 0.01, 10.0, seed ^ 4))
        } else {
            dense_precond(n, seed)
        };
        let (left, right) = run_left_right_pair(&a, &b, &x0, &h, &cfg(PreconditioningMode::Left, 1e-12, n)).unwrap();
        let r0 = right.history.true_residual[0].unwrap();
        for (l, r) in left.history.true_residual.iter().zip(&right.history.true_residual) {
            prop_assert!(r.unwrap() <= l.unwrap() + 1e-10 * r0);
        }
    }

    #[test]
    fn identity_preconditioner_gives_identical_runs(n in 2usize..=30, seed in any::<u64>()) {
        let (a, b, x0) = system(n, seed);
        let (left, right) = run_left_right_pair(&a, &b, &x0, &LinearOperator::Identity(n), &cfg(PreconditioningMode::Left, 1e-12, n)).unwrap();
        prop_assert_eq!(left.iterations, right.iterations);
        let r0 = b.norm();
        for (l, r) in left.history.preconditioned.iter().zip(&right.history.preconditioned) {
            prop_assert!((l - r).abs() <= 1e-12 * r0);
        }
    }

    #[test]
    fn weighting_is_a_similarity_split(n in 2usize..=40, seed in any::<u64>()) {
        let (a, b, x0) = system(n, seed);
        let l = cholesky(&spd(n, seed ^ 0xB0B)).unwrap();
        let lt = l.transpose();
        let weighted = GmresConfig {
            weight_cholesky: Some(l.clone()),
            store_iterates: true,
            ..cfg(PreconditioningMode::NoPrecond, 1e-10, n)
        };
        let r1 = solve(&a, &b, &x0, &PreconditionerPair::none(n), &weighted);
        let pair = PreconditionerPair::new(
            LinearOperator::Dense(lt.clone()),
            LinearOperator::InverseOf(lu_factor(&lt).unwrap()),
        ).unwrap();
        let split = GmresConfig { store_iterates: true, ..cfg(PreconditioningMode::Split, 1e-10, n) };
        let r2 = solve(&a, &b, &x0, &pair, &split);
        prop_assert!(iterates_rel_diff(&r1, &r2) <= 1e-8);
    }

    #[test]
    fn spd_preconditioner_equivalences(n in 2usize..=40, seed in any::<u64>()) {
        let (a, b, x0) = system(n, seed);
        let h = spd(n, seed ^ 0xC0DE);
        let l = cholesky(&h).unwrap();
        let l_inv = lu_factor(&l).unwrap().inverse();
        let h_inv = l_inv.transpose().matmul(&l_inv).unwrap();
        let l_hinv = cholesky(&h_inv).unwrap();
        let h_op = LinearOperator::Dense(h);
        let with = |mode, w: Option<Matrix>| GmresConfig {
            weight_cholesky: w,
            store_iterates: true,
            ..cfg(mode, 1e-10, n)
        };
        let right = solve(&a, &b, &x0, &PreconditionerPair::right(h_op.clone()), &with(PreconditioningMode::Right, Some(l.clone())));
        let left = solve(&a, &b, &x0, &PreconditionerPair::left(h_op), &with(PreconditioningMode::Left, Some(l_hinv)));
        let pair = PreconditionerPair::new(LinearOperator::Dense(l.transpose()), LinearOperator::Dense(l)).unwrap();
        let split = solve(&a, &b, &x0, &pair, &with(PreconditioningMode::Split, None));
        prop_assert!(iterates_rel_diff(&right, &split) <= 1e-8);
        prop_assert!(iterates_rel_diff(&left, &split) <= 1e-8);
    }

    #[test]
    fn search_space_depends_on_product_only(n in 4usize..=30, seed in any::<u64>()) {
        let (a, b, x0) = system(n, seed);
        let hl = dense_precond(n, seed);
        let hr = LinearOperator::Diagonal(positive_diagonal(n, 0.5, 2.0, seed ^ 5));
        let t = shifted_random(n, 1.0, 1.0, 0.3, seed ^ 6);
        let hl_t = LinearOperator::Dense(naive_matmul(&t, &hl.as_dense()));
        let hr_t = LinearOperator::compose(hr.clone(), LinearOperator::InverseOf(lu_factor(&t).unwrap())).unwrap();
        let config = GmresConfig { store_basis: true, ..cfg(PreconditioningMode::Split, 1e-12, n) };
        let r1 = solve(&a, &b, &x0, &PreconditionerPair::new(hl, hr).unwrap(), &config);
        let r2 = solve(&a, &b, &x0, &PreconditionerPair::new(hl_t, hr_t).unwrap(), &config);
        let (z1, z2) = (r1.search_basis.unwrap(), r2.search_basis.unwrap());
        let p1 = r1.history.preconditioned_relative();
        let p2 = r2.history.preconditioned_relative();
        let cols = |z: &Matrix, k: usize| (0..k).map(|j| z.column(j).into_vec()).collect::<Vec<_>>();
        let mut k = 1;
        while k <= z1.cols().min(z2.cols()) && p1[k - 1] > 1e-4 && p2[k - 1] > 1e-4 {
            let q1 = orthonormal_columns(&cols(&z1, k));
            let q2 = orthonormal_columns(&cols(&z2, k));
            prop_assert_eq!(q1.len(), k);
            prop_assert!(max_principal_sine(&q1, &q2) <= 1e-8, "k = {}", k);
            k += 1;
        }
    }

    #[test]
    fn grade_two_operators_terminate_in_two_steps(n in 5usize..=40, seed in any::<u64>(), left in any::<bool>()) {
        let case = householder_lee_case(n, 1e-3, 10.0, seed, seed ^ 1).unwrap();
        let mode = if left { PreconditioningMode::Left } else { PreconditioningMode::Right };
        let m = if left {
            case.h_dense.matmul(&case.a_dense).unwrap()
        } else {
            case.a_dense.matmul(&case.h_dense).unwrap()
        };
        let grade = naive_matmul(&m, &m).sub(&m.scaled(2.0).sub(&Matrix::identity(n)).unwrap()).unwrap();
        prop_assert!(grade.max_abs() <= 1e-8);
        let b = gaussian_vector(n, seed ^ 2);
        let x0 = gaussian_vector(n, seed ^ 3);
        let r = solve(&case.a, &b, &x0, &mode.pair_for(case.h.clone()), &cfg(mode, 1e-12, 10));
        prop_assert!(r.iterations <= 2);
        prop_assert!(r.history.preconditioned_relative()[r.iterations] <= 1e-12);
    }
}
