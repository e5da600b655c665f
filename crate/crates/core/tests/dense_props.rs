mod common;

use common::*;
use lrgmres::dense::{
    cholesky, cond2, jacobi_sym_eig, lu_factor, lu_solve, mat_vec, qr_orthonormal, svd, Matrix,
    Vector,
};
use lrgmres::generators::random_orthogonal;
use proptest::prelude::*;

fn permuted(m: &Matrix, perm: &[usize]) -> Matrix {
    let rows: Vec<Vec<f64>> = perm.iter().map(|&p| m.row(p).to_vec()).collect();
    Matrix::from_rows(&rows).unwrap()
}

#[test]
fn mat_vec_matches_triple_loop() {
    for (n, seed) in [(1, 1), (3, 2), (17, 3), (40, 4)] {
        let a = gaussian(n, n + 2, seed);
        let x = gaussian_vector(n + 2, seed + 100);
        let got = mat_vec(&a, &x).unwrap();
        assert!(rel_err(&got, &naive_mat_vec(&a, &x)) <= 1e-14);
    }
}

#[test]
fn matmul_matches_triple_loop() {
    let a = gaussian(7, 5, 11);
    let b = gaussian(5, 9, 12);
    let got = a.matmul(&b).unwrap();
    assert!(got.rel_diff(&naive_matmul(&a, &b)).unwrap() <= 1e-14);
}

#[test]
fn cond2_examples() {
    assert!((cond2(&Matrix::identity(4)).unwrap().value - 1.0).abs() < 1e-14);
    assert!((cond2(&Matrix::from_diag(&[1.0, 10.0])).unwrap().value - 10.0).abs() < 1e-12);
    let c = cond2(&Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap()).unwrap();
    assert!(c.singular && c.value.is_infinite());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lu_reconstructs(n in 2usize..=50, seed in any::<u64>()) {
        let a = gaussian(n, n, seed);
        let f = lu_factor(&a).unwrap();
        let pa = permuted(&a, f.permutation());
        let lu = naive_matmul(&f.lower(), &f.upper());
        prop_assert!(lu.rel_diff(&pa).unwrap() <= 1e-12 * n as f64);
    }

    #[test]
    fn lu_solve_inverts_mat_vec(n in 2usize..=50, seed in any::<u64>()) {
        let a = shifted_random(n, 1.0, 3.0, 1.0, seed);
        let x = gaussian_vector(n, seed.wrapping_add(1));
        let b = Vector::new(naive_mat_vec(&a, &x)).unwrap();
        let got = lu_solve(&lu_factor(&a).unwrap(), &b).unwrap();
        prop_assert!(rel_err(&got, &x) <= 1e-9);
    }

    #[test]
    fn qr_reconstructs(n in 2usize..=50, seed in any::<u64>()) {
        let a = gaussian(n, n, seed);
        let (q, r) = qr_orthonormal(&a).unwrap();
        prop_assert!(naive_matmul(&q, &r).rel_diff(&a).unwrap() <= 1e-12 * n as f64);
        let qtq = naive_matmul(&q.transpose(), &q);
        prop_assert!(qtq.sub(&Matrix::identity(n)).unwrap().max_abs() <= 1e-12 * n as f64);
        for i in 0..n {
            prop_assert!(r[(i, i)] > 0.0);
            for j in 0..i {
                prop_assert_eq!(r[(i, j)], 0.0);
            }
        }
    }

    #[test]
    fn cholesky_reconstructs(n in 2usize..=50, seed in any::<u64>()) {
        let a = spd(n, seed);
        let l = cholesky(&a).unwrap();
        prop_assert!(naive_matmul(&l, &l.transpose()).rel_diff(&a).unwrap() <= 1e-12 * n as f64);
    }

    #[test]
    fn jacobi_diagonalizes(n in 2usize..=30, seed in any::<u64>()) {
        let g = gaussian(n, n, seed);
        let s = g.add(&g.transpose()).unwrap();
        let e = jacobi_sym_eig(&s).unwrap();
        let v = &e.eigenvectors;
        let rebuilt = naive_matmul(&naive_matmul(v, &Matrix::from_diag(&e.eigenvalues)), &v.transpose());
        prop_assert!(rebuilt.rel_diff(&s).unwrap() <= 1e-10);
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        // Trace and Frobenius norm are spectral invariants.
        let tr: f64 = e.eigenvalues.iter().sum();
        prop_assert!((tr - s.trace()).abs() <= 1e-10 * s.norm_fro());
        let fro = norm(&e.eigenvalues);
        prop_assert!((fro - s.norm_fro()).abs() <= 1e-10 * s.norm_fro());
    }

    #[test]
    fn svd_reconstructs(rows in 2usize..=30, cols in 2usize..=30, seed in any::<u64>()) {
        let a = gaussian(rows, cols, seed);
        let s = svd(&a).unwrap();
        let k = s.singular_values.len();
        prop_assert_eq!(k, rows.min(cols));
        prop_assert!(s.singular_values.windows(2).all(|w| w[0] >= w[1]));
        let mut us = s.u.clone();
        for j in 0..k {
            for i in 0..rows {
                us[(i, j)] *= s.singular_values[j];
            }
        }
        prop_assert!(naive_matmul(&us, &s.v.transpose()).rel_diff(&a).unwrap() <= 1e-10);
        let fro = norm(&s.singular_values);
        prop_assert!((fro - a.norm_fro()).abs() <= 1e-12 * a.norm_fro());
    }

    #[test]
    fn orthogonal_matrices_have_unit_condition(n in 2usize..=40, seed in any::<u64>()) {
        let q = random_orthogonal(n, seed).unwrap();
        prop_assert!((cond2(&q).unwrap().value - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn cond2_of_diagonal_is_ratio(d in proptest::collection::vec(0.1f64..100.0, 2..20)) {
        let hi = d.iter().cloned().fold(f64::MIN, f64::max);
        let lo = d.iter().cloned().fold(f64::MAX, f64::min);
        let c = cond2(&Matrix::from_diag(&d)).unwrap();
        prop_assert!((c.value - hi / lo).abs() <= 1e-12 * hi / lo);
    }
}
