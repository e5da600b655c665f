//! Per-iteration comparison of residual norms from runs that share the same
//! minimization space: `lower_k <= middle_k <= kappa * lower_k`.

use crate::dense::{cond2, lu_factor, norm2, Matrix};
use crate::error::{Error, Result};
use crate::gmres::GmresResult;
use crate::operators::{LinearOperator, PreconditionerPair};

/// Allowed violation of either inequality, relative to the initial residual.
pub const SANDWICH_SLACK: f64 = 1e-10;
const COMBINED_MATCH_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichRow {
    pub k: usize,
    /// Residual of the run whose norm is minimized (`||r_k||`, `||H_L r_k||`).
    pub lower: f64,
    /// Residual of the other run in the same norm.
    pub middle: f64,
    /// `kappa * lower`.
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct SandwichReport {
    pub rows: Vec<SandwichRow>,
    pub kappa: f64,
    /// `max_k (lower_k - middle_k) / scale`; non-positive when the first inequality holds.
    pub max_violation_lower: f64,
    /// `max_k (middle_k - upper_k) / scale`.
    pub max_violation_upper: f64,
    /// Normalization: the larger of the two initial residuals.
    pub scale: f64,
}

impl SandwichReport {
    fn from_rows(rows: Vec<SandwichRow>, kappa: f64) -> Self {
        let scale = rows
            .first()
            .map(|r| r.lower.max(r.middle))
            .filter(|&s| s > 0.0)
            .unwrap_or(1.0);
        let max_violation_lower = rows
            .iter()
            .map(|r| (r.lower - r.middle) / scale)
            .fold(f64::NEG_INFINITY, f64::max);
        let max_violation_upper = rows
            .iter()
            .map(|r| {
                if r.upper.is_infinite() {
                    f64::NEG_INFINITY
                } else {
                    (r.middle - r.upper) / scale
                }
            })
            .fold(f64::NEG_INFINITY, f64::max);
        Self {
            rows,
            kappa,
            max_violation_lower,
            max_violation_upper,
            scale,
        }
    }

    pub fn holds(&self) -> bool {
        self.max_violation_lower <= SANDWICH_SLACK && self.max_violation_upper <= SANDWICH_SLACK
    }

    pub fn verdict(&self) -> String {
        format!(
            "sandwich {}: kappa = {:.6e}, iterations compared = {}, max lower violation = {:.3e}, max upper violation = {:.3e}",
            if self.holds() { "HOLDS" } else { "VIOLATED" },
            self.kappa,
            self.rows.len(),
            self.max_violation_lower,
            self.max_violation_upper,
        )
    }
}

/// Checks `||r_k|| <= ||r~_k|| <= kappa(H) ||r_k||` for right-preconditioned
/// residuals `r_k` and left-preconditioned residuals `r~_k`.
pub fn sandwich_check(
    left: &GmresResult,
    right: &GmresResult,
    h: &LinearOperator,
) -> Result<SandwichReport> {
    let kappa = cond2(&h.as_dense())?.value;
    let len = left.history.len().min(right.history.len());
    let mut rows = Vec::with_capacity(len);
    for k in 0..len {
        let (Some(lower), Some(middle)) = (
            right.history.true_residual[k],
            left.history.true_residual[k],
        ) else {
            return Err(Error::ContractViolation(format!(
                "true residual not sampled at iteration {k}"
            )));
        };
        rows.push(SandwichRow {
            k,
            lower,
            middle,
            upper: kappa * lower,
        });
    }
    Ok(SandwichReport::from_rows(rows, kappa))
}

/// Checks `||H_L r_k|| <= ||H_L r~_k|| <= kappa(G) ||H_L r_k||`,
/// `G = H~_L H_L^{-1}`, for two split preconditioners with equal products
/// `H_R H_L = H~_R H~_L`. Both results must carry their iterates.
pub fn split_sandwich_check(
    a: &LinearOperator,
    b: &[f64],
    pair: &PreconditionerPair,
    result: &GmresResult,
    pair_tilde: &PreconditionerPair,
    result_tilde: &GmresResult,
) -> Result<SandwichReport> {
    let h = pair.combined()?.as_dense();
    let h_tilde = pair_tilde.combined()?.as_dense();
    let mismatch = h_tilde.rel_diff(&h)?;
    if mismatch > COMBINED_MATCH_TOL {
        return Err(Error::ContractViolation(format!(
            "combined preconditioners differ (relative {mismatch:.3e})"
        )));
    }
    if result.history.iterates.is_empty() || result_tilde.history.iterates.is_empty() {
        return Err(Error::ContractViolation(
            "split sandwich check needs stored iterates".into(),
        ));
    }
    let hl = pair.left.as_dense();
    let g: Matrix = pair_tilde
        .left
        .as_dense()
        .matmul(&lu_factor(&hl)?.inverse())?;
    let kappa = cond2(&g)?.value;

    let weighted_residual = |x: &[f64]| -> f64 {
        let ax = a.apply_slice(x);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        norm2(&pair.left.apply_slice(&r))
    };
    let len = result
        .history
        .iterates
        .len()
        .min(result_tilde.history.iterates.len());
    let rows = (0..len)
        .map(|k| {
            let lower = weighted_residual(&result.history.iterates[k]);
            let middle = weighted_residual(&result_tilde.history.iterates[k]);
            SandwichRow {
                k,
                lower,
                middle,
                upper: kappa * lower,
            }
        })
        .collect();
    Ok(SandwichReport::from_rows(rows, kappa))
}
