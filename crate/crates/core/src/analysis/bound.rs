use super::minimax::{chebyshev_interval_eps, remez_discrete_eps};
use crate::error::Result;
use crate::gmres::GmresHistory;

const BOUND_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundRow {
    pub k: usize,
    pub eps: f64,
    /// `eps * multiplier`.
    pub bound: f64,
    /// Relative residual of the run in its minimized norm.
    pub observed: f64,
    pub satisfied: bool,
}

#[derive(Debug, Clone)]
pub struct BoundReport {
    pub multiplier: f64,
    pub rows: Vec<BoundRow>,
    /// Iterations where the exchange algorithm failed and the interval bound was used.
    pub fallback_iterations: Vec<usize>,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }
}

/// Compares a run's minimized relative residual with `eps(k) * kappa(P)`.
pub fn saad_bound_check(history: &GmresHistory, eigs: &[f64], p_cond: f64) -> Result<BoundReport> {
    let observed = history.preconditioned_relative();
    let (lo, hi) = eigs
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), &e| {
            (l.min(e), h.max(e))
        });
    let mut rows = Vec::with_capacity(observed.len());
    let mut fallback_iterations = Vec::new();
    for (k, &obs) in observed.iter().enumerate() {
        let eps = match remez_discrete_eps(eigs, k) {
            Ok(r) => r.eps,
            Err(crate::Error::NumericalFailure(_)) => {
                fallback_iterations.push(k);
                chebyshev_interval_eps(lo, hi, k)?
            }
            Err(e) => return Err(e),
        };
        let bound = if p_cond.is_infinite() {
            f64::INFINITY
        } else {
            eps * p_cond
        };
        rows.push(BoundRow {
            k,
            eps,
            bound,
            observed: obs,
            satisfied: obs <= bound + BOUND_SLACK,
        });
    }
    Ok(BoundReport {
        multiplier: p_cond,
        rows,
        fallback_iterations,
    })
}
