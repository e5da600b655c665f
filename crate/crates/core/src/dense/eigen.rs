use super::{dot, norm2, Matrix, Vector};
use crate::error::{check_dim, Error, Result};

const SYMMETRY_REL_TOL: f64 = 1e-12;
const JACOBI_OFF_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
const SVD_ORTH_TOL: f64 = 1e-15;
const SVD_MAX_SWEEPS: usize = 80;
const SINGULAR_COND_REL: f64 = 1e-15;

/// Eigen-decomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub eigenvalues: Vector,
    /// Column `i` is the unit eigenvector for `eigenvalues[i]`.
    pub eigenvectors: Matrix,
}

/// Cyclic Jacobi eigensolver for symmetric matrices.
pub fn jacobi_sym_eig(m: &Matrix) -> Result<SymmetricEigen> {
    check_dim("jacobi_sym_eig (square)", m.rows(), m.cols())?;
    let asymmetry = m.asymmetry();
    if asymmetry > SYMMETRY_REL_TOL {
        return Err(Error::NotSymmetric { asymmetry });
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = Matrix::identity(n);
    let target = JACOBI_OFF_REL_TOL * m.norm_fro();

    let off = |a: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = off(&a) <= target;
    let mut sweeps = 0;
    while !converged {
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NumericalFailure(format!(
                "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
            )));
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = off(&a) <= target;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
    let eigenvalues = Vector::from_vec(order.iter().map(|&i| a[(i, i)]).collect());
    let mut eigenvectors = Matrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        eigenvectors.set_column(dst, &v.column(src));
    }
    Ok(SymmetricEigen {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular value decomposition `M = U diag(sigma) V^T`, sigma non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub singular_values: Vector,
    pub u: Matrix,
    pub v: Matrix,
}

impl SvdResult {
    pub fn sigma_max(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn sigma_min(&self) -> f64 {
        self.singular_values[self.singular_values.dim() - 1]
    }
}

/// One-sided (Hestenes) Jacobi SVD.
pub fn svd(m: &Matrix) -> Result<SvdResult> {
    if m.rows() < m.cols() {
        let t = svd(&m.transpose())?;
        return Ok(SvdResult {
            singular_values: t.singular_values,
            u: t.v,
            v: t.u,
        });
    }
    let (rows, cols) = (m.rows(), m.cols());
    // Work column-wise: cols[j] is column j of the iterated matrix.
    let mut work: Vec<Vec<f64>> = (0..cols).map(|j| m.column(j).into_vec()).collect();
    let mut vcols: Vec<Vec<f64>> = (0..cols)
        .map(|j| Vector::unit(cols, j).into_vec())
        .collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for i in 0..cols {
            for j in i + 1..cols {
                let alpha = dot(&work[i], &work[i]);
                let beta = dot(&work[j], &work[j]);
                let gamma = dot(&work[i], &work[j]);
                if gamma == 0.0 || gamma.abs() <= SVD_ORTH_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                rotate_pair(&mut work, i, j, c, s);
                rotate_pair(&mut vcols, i, j, c, s);
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps == SVD_MAX_SWEEPS {
            return Err(Error::NumericalFailure(format!(
                "one-sided Jacobi SVD did not converge in {SVD_MAX_SWEEPS} sweeps"
            )));
        }
    }

    let sigma: Vec<f64> = work.iter().map(|c| norm2(c)).collect();
    if sigma.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite { index: 0 });
    }
    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
    let sigma_max = sigma[order[0]];

    let mut u = Matrix::zeros(rows, cols);
    let mut v = Matrix::zeros(cols, cols);
    let mut u_cols: Vec<Vec<f64>> = Vec::with_capacity(cols);
    for (dst, &src) in order.iter().enumerate() {
        let s = sigma[src];
        let ucol = if s > 0.0 && s > sigma_max * f64::EPSILON * 1e-3 {
            work[src].iter().map(|x| x / s).collect()
        } else {
            complete_orthonormal(&u_cols, rows)
        };
        u.set_column(dst, &ucol);
        u_cols.push(ucol);
        v.set_column(dst, &vcols[src]);
    }
    Ok(SvdResult {
        singular_values: Vector::from_vec(order.iter().map(|&i| sigma[i]).collect()),
        u,
        v,
    })
}

fn rotate_pair(cols: &mut [Vec<f64>], i: usize, j: usize, c: f64, s: f64) {
    let (left, right) = cols.split_at_mut(j);
    for (xi, xj) in left[i].iter_mut().zip(right[0].iter_mut()) {
        let (a, b) = (*xi, *xj);
        *xi = c * a - s * b;
        *xj = s * a + c * b;
    }
}

/// A unit vector orthogonal to `basis`, from Gram-Schmidt on the standard basis.
fn complete_orthonormal(basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let mut best = vec![0.0; n];
    let mut best_norm = -1.0;
    for k in 0..n {
        let mut e = vec![0.0; n];
        e[k] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let h = dot(b, &e);
                e.iter_mut().zip(b).for_each(|(ei, bi)| *ei -= h * bi);
            }
        }
        let nrm = norm2(&e);
        if nrm > best_norm {
            best_norm = nrm;
            best = e;
        }
    }
    best.iter().map(|x| x / best_norm).collect()
}

/// Spectral condition number. `singular` is set, and `value` is infinite, when
/// the smallest singular value is below `1e-15` times the largest.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Condition {
    pub value: f64,
    pub singular: bool,
}

pub fn cond2(m: &Matrix) -> Result<Condition> {
    check_dim("cond2 (square)", m.rows(), m.cols())?;
    let s = svd(m)?;
    let (max, min) = (s.sigma_max(), s.sigma_min());
    if max == 0.0 || min < SINGULAR_COND_REL * max {
        Ok(Condition {
            value: f64::INFINITY,
            singular: true,
        })
    } else {
        Ok(Condition {
            value: max / min,
            singular: false,
        })
    }
}
