//! Support function of the field of values `W(M) = { z* M z / z* z }`.

use crate::dense::{jacobi_sym_eig, Matrix};
use crate::error::{check_dim, Result};

pub const DEFAULT_ANGLES: usize = 64;

#[derive(Debug, Clone)]
pub struct RangeSupport {
    pub angles: Vec<f64>,
    /// `h(theta) = max Re(e^{-i theta} w)` over `w` in `W(M)`.
    pub support: Vec<f64>,
}

impl RangeSupport {
    /// Largest deviation from a reference support function.
    pub fn max_abs_error(&self, reference: impl Fn(f64) -> f64) -> f64 {
        self.angles
            .iter()
            .zip(&self.support)
            .map(|(&t, &h)| (h - reference(t)).abs())
            .fold(0.0, f64::max)
    }
}

/// Samples the support function at `theta_j = 2 pi j / n_angles`.
///
/// `h(theta)` is the largest eigenvalue of the Hermitian part of
/// `e^{-i theta} M`, which for real `M` is `cos(theta) S - i sin(theta) K`
/// with `S`, `K` the symmetric and skew parts. That complex Hermitian matrix
/// `C = C_re + i C_im` is handled through the real symmetric embedding
/// `[[C_re, -C_im], [C_im, C_re]]`, whose eigenvalues are those of `C`, each
/// twice.
pub fn numerical_range_support(m: &Matrix, n_angles: usize) -> Result<RangeSupport> {
    check_dim("numerical_range_support (square)", m.rows(), m.cols())?;
    let n = m.rows();
    let mt = m.transpose();
    let sym = m.add(&mt)?.scaled(0.5);
    let skew = m.sub(&mt)?.scaled(0.5);

    let mut angles = Vec::with_capacity(n_angles);
    let mut support = Vec::with_capacity(n_angles);
    for j in 0..n_angles {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n_angles as f64;
        let (s, c) = theta.sin_cos();
        let mut emb = Matrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for k in 0..n {
                let re = c * sym[(i, k)];
                let im = -s * skew[(i, k)];
                emb[(i, k)] = re;
                emb[(n + i, n + k)] = re;
                emb[(i, n + k)] = -im;
                emb[(n + i, k)] = im;
            }
        }
        let eig = jacobi_sym_eig(&emb)?;
        angles.push(theta);
        support.push(eig.eigenvalues[2 * n - 1]);
    }
    Ok(RangeSupport { angles, support })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_support_is_cosine() {
        let r = numerical_range_support(&Matrix::identity(3), 16).unwrap();
        assert!(r.max_abs_error(f64::cos) < 1e-12);
    }

    #[test]
    fn rank_one_orthogonal_update_is_a_disk() {
        let lambda = 3.0;
        let mut m = Matrix::identity(3);
        m[(0, 1)] = lambda; // I + lambda e_1 e_2^T
        let r = numerical_range_support(&m, DEFAULT_ANGLES).unwrap();
        assert!(r.max_abs_error(|t| t.cos() + lambda / 2.0) < 1e-9);
    }

    #[test]
    fn rotation_generator_is_a_segment() {
        // W([[0, -1], [1, 0]]) is the segment [-i, i]: h(theta) = |sin theta|.
        let m = Matrix::from_rows(&[vec![0.0, -1.0], vec![1.0, 0.0]]).unwrap();
        let r = numerical_range_support(&m, 12).unwrap();
        assert!(r.max_abs_error(|t| t.sin().abs()) < 1e-12);
    }
}
