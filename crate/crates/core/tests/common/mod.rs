#![allow(dead_code)]

use lrgmres::dense::{Matrix, Vector};
use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal, Uniform};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut r = rng(seed);
    let data = (0..rows * cols)
        .map(|_| StandardNormal.sample(&mut r))
        .collect();
    Matrix::new(rows, cols, data).unwrap()
}

pub fn gaussian_vector(n: usize, seed: u64) -> Vector {
    let mut r = rng(seed);
    Vector::new((0..n).map(|_| StandardNormal.sample(&mut r)).collect()).unwrap()
}

/// `D + s G / sqrt(n)` with `D` uniform in `[lo, hi]`: nonsymmetric, comfortably
/// nonsingular.
pub fn shifted_random(n: usize, lo: f64, hi: f64, s: f64, seed: u64) -> Matrix {
    let mut r = rng(seed ^ 0xA5A5);
    let dist = Uniform::new_inclusive(lo, hi).unwrap();
    let d: Vec<f64> = (0..n).map(|_| dist.sample(&mut r)).collect();
    Matrix::from_diag(&d)
        .add(&gaussian(n, n, seed).scaled(s / (n as f64).sqrt()))
        .unwrap()
}

pub fn positive_diagonal(n: usize, lo: f64, hi: f64, seed: u64) -> Vector {
    let mut r = rng(seed);
    let dist = Uniform::new_inclusive(lo, hi).unwrap();
    Vector::new((0..n).map(|_| dist.sample(&mut r)).collect()).unwrap()
}

/// `G G^T / n + I`.
pub fn spd(n: usize, seed: u64) -> Matrix {
    let g = gaussian(n, n, seed);
    g.matmul(&g.transpose())
        .unwrap()
        .scaled(1.0 / n as f64)
        .add(&Matrix::identity(n))
        .unwrap()
}

pub fn naive_matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let mut out = Matrix::zeros(a.rows(), b.cols());
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            let mut s = 0.0;
            for k in 0..a.cols() {
                s += a[(i, k)] * b[(k, j)];
            }
            out[(i, j)] = s;
        }
    }
    out
}

pub fn naive_mat_vec(a: &Matrix, x: &[f64]) -> Vec<f64> {
    (0..a.rows())
        .map(|i| (0..a.cols()).map(|j| a[(i, j)] * x[j]).sum())
        .collect()
}

pub fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn rel_err(got: &[f64], want: &[f64]) -> f64 {
    let d: Vec<f64> = got.iter().zip(want).map(|(a, b)| a - b).collect();
    norm(&d) / norm(want).max(f64::MIN_POSITIVE)
}

/// Orthonormal basis of the columns by classical Gram-Schmidt, run twice.
/// Columns that vanish after projection are dropped.
pub fn orthonormal_columns(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    for c in cols {
        let scale = norm(c);
        let mut v = c.clone();
        for _ in 0..2 {
            let coeffs: Vec<f64> = q
                .iter()
                .map(|qj| qj.iter().zip(&v).map(|(a, b)| a * b).sum())
                .collect();
            for (qj, cj) in q.iter().zip(&coeffs) {
                for (vi, qi) in v.iter_mut().zip(qj) {
                    *vi -= cj * qi;
                }
            }
        }
        let nv = norm(&v);
        if nv > 1e-12 * scale {
            q.push(v.iter().map(|x| x / nv).collect());
        }
    }
    q
}

/// Distance of `x` from the span of orthonormal `q`.
pub fn distance_to_span(q: &[Vec<f64>], x: &[f64]) -> f64 {
    let mut v = x.to_vec();
    for _ in 0..2 {
        for qj in q {
            let c: f64 = qj.iter().zip(&v).map(|(a, b)| a * b).sum();
            for (vi, qi) in v.iter_mut().zip(qj) {
                *vi -= c * qi;
            }
        }
    }
    norm(&v)
}

/// Upper bound on the sine of the largest principal angle between two
/// subspaces with orthonormal bases `q1`, `q2`: `||(I - P_1) Q_2||_F`.
pub fn max_principal_sine(q1: &[Vec<f64>], q2: &[Vec<f64>]) -> f64 {
    q2.iter()
        .map(|x| distance_to_span(q1, x).powi(2))
        .sum::<f64>()
        .sqrt()
}

/// Minimal `||r - M K_k c||` over `c`, `K_k = span{r, M r, ..., M^{k-1} r}`,
/// by explicit least squares on a normalized power basis. Returns the values
/// for `k = 0..=k_max`.
pub fn krylov_least_squares(m: &Matrix, r: &[f64], k_max: usize) -> Vec<f64> {
    let mut out = vec![norm(r)];
    let mut images: Vec<Vec<f64>> = Vec::new();
    let r_norm = norm(r);
    let mut w: Vec<f64> = r.iter().map(|x| x / r_norm).collect();
    for _ in 0..k_max {
        let mw = naive_mat_vec(m, &w);
        images.push(mw.clone());
        let q = orthonormal_columns(&images);
        out.push(distance_to_span(&q, r));
        let nw = norm(&mw);
        w = mw.iter().map(|x| x / nw).collect();
    }
    out
}
