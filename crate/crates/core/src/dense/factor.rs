use super::{dot, norm2, Matrix, Vector};
use crate::error::{check_dim, Error, Result};

/// Pivots below this fraction of the largest input entry are treated as zero.
const SINGULAR_PIVOT_REL: f64 = 1e-14;
const SYMMETRY_REL_TOL: f64 = 1e-12;
const RANK_REL_TOL: f64 = 1e-14;

/// LU factorization with partial pivoting, `P A = L U`.
///
/// `L` (unit lower) and `U` are packed in one row-major buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct LuFactorization {
    n: usize,
    packed: Vec<f64>,
    perm: Vec<usize>,
    swaps: usize,
}

impl LuFactorization {
    pub fn dim(&self) -> usize {
        self.n
    }

    /// Row permutation: row `i` of `P A` is row `perm[i]` of `A`.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn lower(&self) -> Matrix {
        let mut l = Matrix::identity(self.n);
        for i in 0..self.n {
            for j in 0..i {
                l[(i, j)] = self.packed[i * self.n + j];
            }
        }
        l
    }

    pub fn upper(&self) -> Matrix {
        let mut u = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in i..self.n {
                u[(i, j)] = self.packed[i * self.n + j];
            }
        }
        u
    }

    pub fn determinant(&self) -> f64 {
        let sign = if self.swaps % 2 == 0 { 1.0 } else { -1.0 };
        (0..self.n).fold(sign, |d, i| d * self.packed[i * self.n + i])
    }

    pub(crate) fn solve_slice(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s = dot(&self.packed[i * n..i * n + i], &x[..i]);
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s = dot(&self.packed[i * n + i + 1..(i + 1) * n], &x[i + 1..]);
            x[i] = (x[i] - s) / self.packed[i * n + i];
        }
        x
    }

    /// Dense inverse, one solve per column.
    pub fn inverse(&self) -> Matrix {
        let mut inv = Matrix::zeros(self.n, self.n);
        let mut e = vec![0.0; self.n];
        for j in 0..self.n {
            e[j] = 1.0;
            inv.set_column(j, &self.solve_slice(&e));
            e[j] = 0.0;
        }
        inv
    }
}

pub fn lu_factor(m: &Matrix) -> Result<LuFactorization> {
    check_dim("lu_factor (square)", m.rows(), m.cols())?;
    let n = m.rows();
    let threshold = SINGULAR_PIVOT_REL * m.max_abs();
    let mut a = m.as_slice().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;

    for k in 0..n {
        let (p, pivot_abs) =
            (k..n)
                .map(|i| (i, a[i * n + k].abs()))
                .fold(
                    (k, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        if pivot_abs <= threshold || pivot_abs == 0.0 {
            return Err(Error::Singular {
                step: k,
                pivot: pivot_abs,
            });
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            swaps += 1;
        }
        let pivot = a[k * n + k];
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            a[i * n + k] = factor;
            if factor != 0.0 {
                for j in k + 1..n {
                    a[i * n + j] -= factor * a[k * n + j];
                }
            }
        }
    }
    Ok(LuFactorization {
        n,
        packed: a,
        perm,
        swaps,
    })
}

pub fn lu_solve(f: &LuFactorization, b: &Vector) -> Result<Vector> {
    check_dim("lu_solve", f.dim(), b.dim())?;
    Ok(Vector::from_vec(f.solve_slice(b)))
}

/// Cholesky factor `L` (lower triangular) with `m = L L^T`.
pub fn cholesky(m: &Matrix) -> Result<Matrix> {
    check_dim("cholesky (square)", m.rows(), m.cols())?;
    let asymmetry = m.asymmetry();
    if asymmetry > SYMMETRY_REL_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let n = m.rows();
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let row_j: Vec<f64> = (0..j).map(|k| l[(j, k)]).collect();
        let d = m[(j, j)] - dot(&row_j, &row_j);
        if d <= 0.0 || !d.is_finite() {
            return Err(Error::NotPositiveDefinite { step: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let s: f64 = (0..j).map(|k| l[(i, k)] * row_j[k]).sum();
            l[(i, j)] = (m[(i, j)] - s) / ljj;
        }
    }
    Ok(l)
}

/// Householder QR of a square full-rank matrix, normalized so that `R` has a
/// positive diagonal.
pub fn qr_orthonormal(m: &Matrix) -> Result<(Matrix, Matrix)> {
    check_dim("qr_orthonormal (square)", m.rows(), m.cols())?;
    let n = m.rows();
    let threshold = RANK_REL_TOL * m.norm_fro();
    let mut r = m.clone();
    let mut reflectors: Vec<Vec<f64>> = Vec::with_capacity(n);

    for k in 0..n {
        let x: Vec<f64> = (k..n).map(|i| r[(i, k)]).collect();
        let alpha = norm2(&x);
        if alpha <= threshold || alpha == 0.0 {
            return Err(Error::RankDeficient { column: k });
        }
        let mut v = x;
        let sign = if v[0] >= 0.0 { 1.0 } else { -1.0 };
        v[0] += sign * alpha;
        let vnorm = norm2(&v);
        v.iter_mut().for_each(|vi| *vi /= vnorm);
        for j in k..n {
            let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * r[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                r[(k + t, j)] -= 2.0 * vi * s;
            }
        }
        for i in k + 1..n {
            r[(i, k)] = 0.0;
        }
        reflectors.push(v);
    }

    // Q = H_0 H_1 ... H_{n-1}, accumulated backwards onto the identity.
    let mut q = Matrix::identity(n);
    for (k, v) in reflectors.iter().enumerate().rev() {
        for j in 0..n {
            let s: f64 = v.iter().enumerate().map(|(t, vi)| vi * q[(k + t, j)]).sum();
            for (t, vi) in v.iter().enumerate() {
                q[(k + t, j)] -= 2.0 * vi * s;
            }
        }
    }

    for k in 0..n {
        if r[(k, k)] < 0.0 {
            for j in k..n {
                r[(k, j)] = -r[(k, j)];
            }
            for i in 0..n {
                q[(i, k)] = -q[(i, k)];
            }
        }
    }
    Ok((q, r))
}
