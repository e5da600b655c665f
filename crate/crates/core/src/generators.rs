//! Seeded constructions of the two preconditioned test families.
//!
//! * Householder-Lee: symmetric `A` with spectrum in `[mu, lambda]` and
//!   `H = A^{-1} + u v^T`, where `A u = lambda u` and `v^T A = mu v^T`. Then
//!   `HA = I + mu u v^T` and `AH = I + lambda u v^T`.
//! * Eigenvector conditioning: `A = X Lambda Y^{-1}`, `H = Y X^{-1}` with `Y`
//!   orthogonal and `X` ill-conditioned, so `HA = Y Lambda Y^T` is normal while
//!   `AH = X Lambda X^{-1}` is not.

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::dense::{cond2, lu_factor, qr_orthonormal, Matrix, Vector};
use crate::error::{Error, Result};
use crate::operators::LinearOperator;

const HL_UNIT_TOL: f64 = 1e-12;
const HL_PRODUCT_TOL: f64 = 1e-9;
const HL_GRADE_TOL: f64 = 1e-8;
const EC_LEFT_REL_TOL: f64 = 1e-7;
const EC_RIGHT_KAPPA_TOL: f64 = 1e-6;

/// Offset mixed into the seed of the second orthogonal factor.
const SECOND_FACTOR_SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseFamily {
    HouseholderLee,
    EigvecCond,
}

/// Parameters and recorded quantities of a generated case; serialized as `case.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseMetadata {
    pub family: CaseFamily,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub center: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub half_width: Option<f64>,
    pub seed: u64,
    pub rhs_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_seed: Option<u64>,
    /// Prescribed eigenvalues: of `A` for Householder-Lee, of `HA` and `AH`
    /// for the eigenvector-conditioning family.
    pub eigenvalues: Vec<f64>,
    #[serde(rename = "kappa_X", default, skip_serializing_if = "Option::is_none")]
    pub kappa_x: Option<f64>,
    #[serde(rename = "kappa_Y", default, skip_serializing_if = "Option::is_none")]
    pub kappa_y: Option<f64>,
    /// Condition number of the eigenvector matrix of `A` (Householder-Lee).
    #[serde(rename = "kappa_Q", default, skip_serializing_if = "Option::is_none")]
    pub kappa_q: Option<f64>,
}

/// Factors behind a generated case.
#[derive(Debug, Clone)]
pub enum CaseFactors {
    HouseholderLee { q: Matrix, u: Vector, v: Vector },
    EigvecCond { x: Matrix, y: Matrix },
}

#[derive(Debug, Clone)]
pub struct GeneratedCase {
    pub a: LinearOperator,
    pub a_dense: Matrix,
    pub h: LinearOperator,
    pub h_dense: Matrix,
    pub b: Vector,
    pub x0: Vector,
    pub eigenvalues: Vector,
    pub metadata: CaseMetadata,
    pub factors: CaseFactors,
}

pub fn random_orthogonal(n: usize, seed: u64) -> Result<Matrix> {
    if n < 2 {
        return Err(Error::Domain(format!(
            "random_orthogonal needs n >= 2, got {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let data: Vec<f64> = (0..n * n)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect();
        let g = Matrix::new(n, n, data)?;
        match qr_orthonormal(&g) {
            Ok((q, _)) => return Ok(q),
            Err(Error::RankDeficient { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

pub fn standard_normal_vector(n: usize, seed: u64) -> Vector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Vector::from_vec((0..n).map(|_| StandardNormal.sample(&mut rng)).collect())
}

/// `n` values uniformly spaced from `lo` to `hi`, endpoints included.
fn uniform_spectrum(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| {
            if i + 1 == n {
                hi
            } else {
                lo + (hi - lo) * i as f64 / (n - 1) as f64
            }
        })
        .collect()
}

fn scale_columns(m: &Matrix, d: &[f64]) -> Matrix {
    let mut out = m.clone();
    for i in 0..m.rows() {
        for (j, dj) in d.iter().enumerate() {
            out[(i, j)] *= dj;
        }
    }
    out
}

pub fn householder_lee_case(
    n: usize,
    mu: f64,
    lambda: f64,
    seed: u64,
    rhs_seed: u64,
) -> Result<GeneratedCase> {
    if !(mu > 0.0 && mu < lambda && lambda.is_finite()) {
        return Err(Error::Domain(format!(
            "Householder-Lee case needs 0 < mu < lambda, got mu = {mu}, lambda = {lambda}"
        )));
    }
    let q = random_orthogonal(n, seed)?;
    let eigs = uniform_spectrum(mu, lambda, n);
    let a_dense = scale_columns(&q, &eigs).matmul(&q.transpose())?;
    let u = q.column(n - 1);
    let v = q.column(0);

    let a = LinearOperator::dense(a_dense.clone())?;
    let h = LinearOperator::rank_one_update(
        LinearOperator::InverseOf(lu_factor(&a_dense)?),
        u.clone(),
        v.clone(),
    )?;
    let h_dense = h.as_dense();

    let fail = |what: &str, err: f64| {
        Err(Error::Construction(format!(
            "Householder-Lee postcondition `{what}` failed (error {err:.3e})"
        )))
    };
    for (name, err) in [
        ("||u|| = 1", (u.norm() - 1.0).abs()),
        ("||v|| = 1", (v.norm() - 1.0).abs()),
        ("v . u = 0", v.dot(&u).abs()),
    ] {
        if err > HL_UNIT_TOL {
            return fail(name, err);
        }
    }
    let eye = Matrix::identity(n);
    let uv = Matrix::outer(&u, &v);
    let ha = h_dense.matmul(&a_dense)?;
    let ah = a_dense.matmul(&h_dense)?;
    let err = ha.sub(&eye.add(&uv.scaled(mu))?)?.max_abs();
    if err > HL_PRODUCT_TOL {
        return fail("HA = I + mu u v^T", err);
    }
    let err = ah.sub(&eye.add(&uv.scaled(lambda))?)?.max_abs();
    if err > HL_PRODUCT_TOL {
        return fail("AH = I + lambda u v^T", err);
    }
    let err = ha.matmul(&ha)?.sub(&ha.scaled(2.0).sub(&eye)?)?.max_abs();
    if err > HL_GRADE_TOL {
        return fail("(HA)^2 = 2 HA - I", err);
    }

    let kappa_q = cond2(&q)?.value;
    Ok(GeneratedCase {
        a,
        a_dense,
        h,
        h_dense,
        b: standard_normal_vector(n, rhs_seed),
        x0: Vector::zeros(n),
        eigenvalues: Vector::from_vec(eigs.clone()),
        metadata: CaseMetadata {
            family: CaseFamily::HouseholderLee,
            n,
            mu: Some(mu),
            lambda: Some(lambda),
            k: None,
            center: None,
            half_width: None,
            seed,
            rhs_seed,
            x_seed: None,
            eigenvalues: eigs,
            kappa_x: None,
            kappa_y: None,
            kappa_q: Some(kappa_q),
        },
        factors: CaseFactors::HouseholderLee { q, u, v },
    })
}

/// Spectrum of `Lambda`: uniformly spaced in `[center - half_width, center + half_width]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumSpec {
    pub center: f64,
    pub half_width: f64,
}

impl Default for SpectrumSpec {
    fn default() -> Self {
        Self {
            center: 1.5,
            half_width: 0.5,
        }
    }
}

pub fn eigvec_cond_case(
    n: usize,
    k: f64,
    spectrum: SpectrumSpec,
    seed: u64,
    rhs_seed: u64,
) -> Result<GeneratedCase> {
    if n < 3 {
        return Err(Error::Domain(format!(
            "eigvec-cond case needs n >= 3, got {n}"
        )));
    }
    if !(k >= 1.0 && k.is_finite()) {
        return Err(Error::Domain(format!(
            "K must be a finite value >= 1, got {k}"
        )));
    }
    let SpectrumSpec { center, half_width } = spectrum;
    if !(half_width >= 0.0 && half_width < center && center.is_finite()) {
        return Err(Error::Domain(format!(
            "spectrum must satisfy 0 <= half_width < center, got center = {center}, half_width = {half_width}"
        )));
    }

    let y = random_orthogonal(n, seed)?;
    let x_seed = seed ^ SECOND_FACTOR_SEED_MIX;
    let mut x = random_orthogonal(n, x_seed)?;
    let first: Vec<f64> = (0..n).map(|i| x[(i, 0)] / k + x[(i, n - 1)]).collect();
    x.set_column(0, &first);

    let eigs = uniform_spectrum(center - half_width, center + half_width, n);
    let a_dense = scale_columns(&x, &eigs).matmul(&y.transpose())?;
    let x_inv = lu_factor(&x)?.inverse();
    let h_dense = y.matmul(&x_inv)?;

    let kappa_x = cond2(&x)?.value;
    let kappa_y = cond2(&y)?.value;

    let ha = h_dense.matmul(&a_dense)?;
    let ha_ref = scale_columns(&y, &eigs).matmul(&y.transpose())?;
    let err = ha.rel_diff(&ha_ref)?;
    if err > EC_LEFT_REL_TOL {
        return Err(Error::Construction(format!(
            "HA = Y Lambda Y^T failed (relative error {err:.3e})"
        )));
    }
    let ah = a_dense.matmul(&h_dense)?;
    let ah_ref = scale_columns(&x, &eigs).matmul(&x_inv)?;
    let err = ah.sub(&ah_ref)?.norm_fro();
    if err > EC_RIGHT_KAPPA_TOL * kappa_x {
        return Err(Error::Construction(format!(
            "AH = X Lambda X^-1 failed (error {err:.3e}, kappa(X) = {kappa_x:.3e})"
        )));
    }

    Ok(GeneratedCase {
        a: LinearOperator::dense(a_dense.clone())?,
        a_dense,
        h: LinearOperator::dense(h_dense.clone())?,
        h_dense,
        b: standard_normal_vector(n, rhs_seed),
        x0: Vector::zeros(n),
        eigenvalues: Vector::from_vec(eigs.clone()),
        metadata: CaseMetadata {
            family: CaseFamily::EigvecCond,
            n,
            mu: None,
            lambda: None,
            k: Some(k),
            center: Some(center),
            half_width: Some(half_width),
            seed,
            rhs_seed,
            x_seed: Some(x_seed),
            eigenvalues: eigs,
            kappa_x: Some(kappa_x),
            kappa_y: Some(kappa_y),
            kappa_q: None,
        },
        factors: CaseFactors::EigvecCond { x, y },
    })
}

/// Dense forms of the case's operators, rebuilt by probing with unit vectors.
pub fn materialize(case: &GeneratedCase) -> (Matrix, Matrix) {
    (case.a.as_dense(), case.h.as_dense())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonal_is_deterministic() {
        assert_eq!(
            random_orthogonal(5, 42).unwrap(),
            random_orthogonal(5, 42).unwrap()
        );
        assert_ne!(
            random_orthogonal(5, 42).unwrap(),
            random_orthogonal(5, 43).unwrap()
        );
        assert!(random_orthogonal(1, 0).is_err());
    }

    #[test]
    fn orthogonal_has_unit_determinant() {
        let q = random_orthogonal(7, 3).unwrap();
        let det = lu_factor(&q).unwrap().determinant();
        assert!((det * det - 1.0).abs() < 1e-8);
        assert!((cond2(&q).unwrap().value - 1.0).abs() < 1e-10);
    }

    #[test]
    fn householder_lee_small_case() {
        let case = householder_lee_case(3, 1.0, 2.0, 5, 6).unwrap();
        let CaseFactors::HouseholderLee { u, v, .. } = &case.factors else {
            unreachable!()
        };
        let ha = case.h_dense.matmul(&case.a_dense).unwrap();
        let expected = Matrix::identity(3).add(&Matrix::outer(u, v)).unwrap();
        assert!(ha.sub(&expected).unwrap().max_abs() < 1e-12);
    }

    #[test]
    fn householder_lee_domain() {
        assert!(matches!(
            householder_lee_case(5, 5.0, 1.0, 1, 2),
            Err(Error::Domain(_))
        ));
        assert!(householder_lee_case(5, 0.0, 1.0, 1, 2).is_err());
    }

    #[test]
    fn eigvec_cond_domain() {
        let s = SpectrumSpec::default();
        assert!(eigvec_cond_case(2, 10.0, s, 1, 2).is_err());
        assert!(eigvec_cond_case(5, 0.5, s, 1, 2).is_err());
        let bad = SpectrumSpec {
            center: 1.0,
            half_width: 1.0,
        };
        assert!(eigvec_cond_case(5, 10.0, bad, 1, 2).is_err());
    }

    #[test]
    fn eigvec_cond_unit_k_is_well_conditioned() {
        let case = eigvec_cond_case(20, 1.0, SpectrumSpec::default(), 11, 12).unwrap();
        assert!(case.metadata.kappa_x.unwrap() <= 10.0);
    }

    #[test]
    fn metadata_json_uses_external_field_names() {
        let case = eigvec_cond_case(4, 100.0, SpectrumSpec::default(), 1, 2).unwrap();
        let json = serde_json::to_value(&case.metadata).unwrap();
        assert_eq!(json["family"], "eigvec-cond");
        assert!(json["K"].is_number());
        assert!(json["kappa_X"].is_number());
        assert!(json.get("mu").is_none());
    }
}
