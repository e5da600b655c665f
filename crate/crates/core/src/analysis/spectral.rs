use crate::dense::Matrix;
use crate::error::{check_dim, Error, Result};

const SIMILARITY_REL_TOL: f64 = 1e-8;
const MAX_POWER: usize = 10;

/// Entrywise distance of `HA` and `AH` from the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntrywiseGap {
    /// `max |I - HA|`.
    pub gap_left: f64,
    /// `max |I - AH|`.
    pub gap_right: f64,
    /// `gap_right / gap_left`, infinite when `gap_left < 1e-300`.
    pub ratio: f64,
}

pub fn entrywise_gap(ha: &Matrix, ah: &Matrix) -> Result<EntrywiseGap> {
    check_dim("entrywise_gap (square)", ha.rows(), ha.cols())?;
    check_dim("entrywise_gap dimensions", ha.rows(), ah.rows())?;
    check_dim("entrywise_gap dimensions", ha.cols(), ah.cols())?;
    let eye = Matrix::identity(ha.rows());
    let gap_left = eye.sub(ha)?.max_abs();
    let gap_right = eye.sub(ah)?.max_abs();
    let ratio = if gap_left < 1e-300 {
        f64::INFINITY
    } else {
        gap_right / gap_left
    };
    Ok(EntrywiseGap {
        gap_left,
        gap_right,
        ratio,
    })
}

#[derive(Debug, Clone)]
pub struct SimilarityReport {
    /// `tr(M1^j)` for `j = 1..=j_max`.
    pub traces_first: Vec<f64>,
    pub traces_second: Vec<f64>,
    /// `|tr(M1^j) - tr(M2^j)|`.
    pub differences: Vec<f64>,
    /// Every difference is within `1e-8 (1 + |tr(M1^j)|)`.
    pub similar: bool,
}

/// Certifies equal spectra through the traces of the first `j_max` powers.
pub fn similarity_check(m1: &Matrix, m2: &Matrix, j_max: usize) -> Result<SimilarityReport> {
    check_dim("similarity_check (square)", m1.rows(), m1.cols())?;
    check_dim("similarity_check dimensions", m1.rows(), m2.rows())?;
    check_dim("similarity_check dimensions", m1.cols(), m2.cols())?;
    if j_max > MAX_POWER {
        return Err(Error::Domain(format!(
            "similarity_check supports powers up to {MAX_POWER}, got {j_max}"
        )));
    }
    let traces = |m: &Matrix| -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(j_max);
        let mut p = m.clone();
        for j in 1..=j_max {
            if j > 1 {
                p = p.matmul(m)?;
            }
            out.push(p.trace());
        }
        Ok(out)
    };
    let traces_first = traces(m1)?;
    let traces_second = traces(m2)?;
    let differences: Vec<f64> = traces_first
        .iter()
        .zip(&traces_second)
        .map(|(a, b)| (a - b).abs())
        .collect();
    let similar = differences
        .iter()
        .zip(&traces_first)
        .all(|(d, t)| *d <= SIMILARITY_REL_TOL * (1.0 + t.abs()));
    Ok(SimilarityReport {
        traces_first,
        traces_second,
        differences,
        similar,
    })
}
