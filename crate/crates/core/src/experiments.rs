//! Experiment drivers behind the command-line tool: left/right comparison,
//! eigenvalue-bound evaluation, and the CSV layouts they emit.

use serde::{Deserialize, Serialize};

use crate::analysis::{
    numerical_range_support, saad_bound_check, sandwich_check, BoundReport, RangeSupport,
    SandwichReport,
};
use crate::dense::{Matrix, Vector};
use crate::error::{Error, Result};
use crate::generators::{CaseFamily, CaseMetadata};
use crate::gmres::{
    gmres_solve, run_left_right_pair, GmresConfig, GmresHistory, GmresResult, GmresStatus,
    PreconditioningMode,
};
use crate::operators::LinearOperator;

fn cell(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

/// CSV with columns `iter,precond_resid_rel,true_resid_rel`.
pub fn history_csv(h: &GmresHistory) -> String {
    let mut out = String::from("iter,precond_resid_rel,true_resid_rel\n");
    for (k, (p, t)) in h
        .preconditioned_relative()
        .iter()
        .zip(h.true_relative())
        .enumerate()
    {
        out.push_str(&format!("{k},{},{}\n", cell(Some(*p)), cell(t)));
    }
    out
}

/// CSV with columns `theta,support`.
pub fn support_csv(r: &RangeSupport) -> String {
    let mut out = String::from("theta,support\n");
    for (t, h) in r.angles.iter().zip(&r.support) {
        out.push_str(&format!("{t:e},{h:e}\n"));
    }
    out
}

pub fn field_of_values(m: &Matrix, n_angles: usize) -> Result<RangeSupport> {
    numerical_range_support(m, n_angles)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareRow {
    pub iter: usize,
    pub right_true_rel: Option<f64>,
    pub left_precond_rel: Option<f64>,
    pub left_true_rel: Option<f64>,
    /// `kappa(H) * right_true_rel`.
    pub kappa_h_bound: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct LeftRightComparison {
    pub left: GmresResult,
    pub right: GmresResult,
    pub sandwich: SandwichReport,
    pub rows: Vec<CompareRow>,
}

impl LeftRightComparison {
    pub fn to_csv(&self) -> String {
        let mut out =
            String::from("iter,right_true_rel,left_precond_rel,left_true_rel,kappaH_bound\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                r.iter,
                cell(r.right_true_rel),
                cell(r.left_precond_rel),
                cell(r.left_true_rel),
                cell(r.kappa_h_bound)
            ));
        }
        out
    }
}

/// Left- and right-preconditioned solves from `x0 = 0` with the sandwich check.
pub fn compare_left_right(
    a: &LinearOperator,
    b: &Vector,
    h: &LinearOperator,
    rtol: f64,
    max_iter: usize,
) -> Result<LeftRightComparison> {
    let config = GmresConfig {
        rtol_preconditioned: rtol,
        max_iter,
        ..GmresConfig::default()
    };
    let x0 = Vector::zeros(a.dim());
    let (left, right) = run_left_right_pair(a, b, &x0, h, &config)?;
    let sandwich = sandwich_check(&left, &right, h)?;
    let kappa = sandwich.kappa;

    let right_true = right.history.true_relative();
    let left_true = left.history.true_relative();
    let left_pre = left.history.preconditioned_relative();
    let len = right_true.len().max(left_true.len());
    let rows = (0..len)
        .map(|k| {
            let r = right_true.get(k).copied().flatten();
            CompareRow {
                iter: k,
                right_true_rel: r,
                left_precond_rel: left_pre.get(k).copied(),
                left_true_rel: left_true.get(k).copied().flatten(),
                kappa_h_bound: r.map(|r| kappa * r),
            }
        })
        .collect();
    Ok(LeftRightComparison {
        left,
        right,
        sandwich,
        rows,
    })
}

/// Spectrum and eigenvector-conditioning multiplier of the operator GMRES
/// actually iterates with, per family and placement.
///
/// * Householder-Lee, unpreconditioned: `A = Q diag Q^T`, multiplier `kappa(Q)`.
/// * Householder-Lee, left or right: `HA` and `AH` are `I` plus a nilpotent
///   rank-one term, so they are not diagonalizable; the multiplier is infinite.
/// * Eigenvector conditioning: `HA = Y Lambda Y^T` (left, `kappa(Y)`) and
///   `AH = X Lambda X^{-1}` (right, `kappa(X)`); the spectrum of `A` itself is
///   not known.
pub fn bound_inputs(meta: &CaseMetadata, mode: PreconditioningMode) -> Result<(Vec<f64>, f64)> {
    let missing = |what: &str| Error::ContractViolation(format!("case.json lacks {what}"));
    match (meta.family, mode) {
        (CaseFamily::HouseholderLee, PreconditioningMode::NoPrecond) => Ok((
            meta.eigenvalues.clone(),
            meta.kappa_q.ok_or_else(|| missing("kappa_Q"))?,
        )),
        (CaseFamily::HouseholderLee, PreconditioningMode::Left | PreconditioningMode::Right) => {
            Ok((vec![1.0], f64::INFINITY))
        }
        (CaseFamily::EigvecCond, PreconditioningMode::Left) => Ok((
            meta.eigenvalues.clone(),
            meta.kappa_y.ok_or_else(|| missing("kappa_Y"))?,
        )),
        (CaseFamily::EigvecCond, PreconditioningMode::Right) => Ok((
            meta.eigenvalues.clone(),
            meta.kappa_x.ok_or_else(|| missing("kappa_X"))?,
        )),
        (CaseFamily::EigvecCond, PreconditioningMode::NoPrecond) => Err(Error::Domain(
            "the spectrum of A is not prescribed for the eigvec-cond family".into(),
        )),
        (_, PreconditioningMode::Split) => Err(Error::Domain(
            "bounds are available for none, left and right placements".into(),
        )),
    }
}

#[derive(Debug, Clone)]
pub struct BoundsRun {
    pub result: GmresResult,
    pub report: BoundReport,
}

impl BoundsRun {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,eps,multiplier,bound,observed,satisfied\n");
        for r in &self.report.rows {
            out.push_str(&format!(
                "{},{:e},{:e},{:e},{:e},{}\n",
                r.k, r.eps, self.report.multiplier, r.bound, r.observed, r.satisfied
            ));
        }
        out
    }
}

/// Runs GMRES for at most `k_max` iterations and compares each iteration with
/// the eigenvalue bound.
pub fn bounds_run(
    a: &LinearOperator,
    b: &Vector,
    h: &LinearOperator,
    meta: &CaseMetadata,
    mode: PreconditioningMode,
    k_max: usize,
    rtol: f64,
) -> Result<BoundsRun> {
    let (eigs, multiplier) = bound_inputs(meta, mode)?;
    let config = GmresConfig {
        mode,
        rtol_preconditioned: rtol,
        max_iter: k_max.max(1),
        ..GmresConfig::default()
    };
    let pair = mode.pair_for(h.clone());
    let result = gmres_solve(a, b, &Vector::zeros(a.dim()), &pair, &config)?;
    let report = saad_bound_check(&result.history, &eigs, multiplier)?;
    Ok(BoundsRun { result, report })
}

/// Iterations each placement needed, with final relative residuals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: String,
    pub iterations: usize,
    pub status: String,
    pub final_precond_resid_rel: f64,
    pub final_true_resid_rel: f64,
}

impl ModeSummary {
    pub fn from_result(mode: PreconditioningMode, r: &GmresResult) -> Self {
        let k = r.iterations;
        Self {
            mode: mode_name(mode).to_string(),
            iterations: k,
            status: status_name(r.status).to_string(),
            final_precond_resid_rel: r.history.preconditioned_relative()[k],
            final_true_resid_rel: r.history.true_relative()[k].unwrap_or(f64::NAN),
        }
    }
}

/// Digest of one experiment run, written next to the CSV outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub case: Option<CaseMetadata>,
    pub rtol: f64,
    pub modes: Vec<ModeSummary>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sandwich: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<String>,
    /// Files produced by the run.
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
}

pub fn mode_name(mode: PreconditioningMode) -> &'static str {
    match mode {
        PreconditioningMode::NoPrecond => "none",
        PreconditioningMode::Left => "left",
        PreconditioningMode::Right => "right",
        PreconditioningMode::Split => "split",
    }
}

pub fn status_name(status: GmresStatus) -> &'static str {
    match status {
        GmresStatus::ConvergedPreconditioned => "converged-preconditioned",
        GmresStatus::ConvergedTrue => "converged-true",
        GmresStatus::MaxIterations => "max-iterations",
        GmresStatus::HappyBreakdown => "happy-breakdown",
        GmresStatus::BreakdownFailure => "breakdown-failure",
    }
}

pub fn bound_digest(report: &BoundReport) -> String {
    let worst = report
        .rows
        .iter()
        .map(|r| r.observed / r.bound)
        .filter(|x| x.is_finite())
        .fold(0.0, f64::max);
    format!(
        "bound {}: multiplier = {:.6e}, iterations = {}, max observed/bound = {:.3e}{}",
        if report.all_satisfied() {
            "SATISFIED"
        } else {
            "VIOLATED"
        },
        report.multiplier,
        report.rows.len(),
        worst,
        if report.fallback_iterations.is_empty() {
            String::new()
        } else {
            format!(
                ", interval fallback at k = {:?}",
                report.fallback_iterations
            )
        }
    )
}
