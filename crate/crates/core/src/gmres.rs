//! Full (non-restarted) GMRES with left, right and split preconditioning and
//! an optional weighted inner product.
//!
//! The Arnoldi process runs on `M = H_L A H_R` from `H_L r_0`, using modified
//! Gram-Schmidt (optionally repeated once) and Givens rotations for the small
//! least-squares problem. The iterate is `x_k = x_0 + H_R V_k y_k`.
//!
//! Two residual curves are recorded per run: the minimized one,
//! `||H_L r_k||` in the active inner product, read off the Givens recurrence,
//! and the Euclidean true residual `||b - A x_k||`, recomputed explicitly
//! every `true_residual_stride` iterations and at termination.

use crate::dense::{axpy, dot, norm2, Matrix, Vector};
use crate::error::{check_dim, Error, Result};
use crate::operators::{LinearOperator, PreconditionerPair};

/// Placement of the preconditioner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PreconditioningMode {
    NoPrecond,
    Left,
    Right,
    Split,
}

impl PreconditioningMode {
    /// Preconditioner pair for a single preconditioner `h` in this placement.
    /// `Split` places `h` on the right; use [`PreconditionerPair::new`] for a
    /// genuine split.
    pub fn pair_for(self, h: LinearOperator) -> PreconditionerPair {
        match self {
            Self::NoPrecond => PreconditionerPair::none(h.dim()),
            Self::Left => PreconditionerPair::left(h),
            Self::Right | Self::Split => PreconditionerPair::right(h),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GmresConfig {
    pub mode: PreconditioningMode,
    pub rtol_preconditioned: f64,
    /// When set, convergence additionally requires `||r_k|| <= rtol_true ||r_0||`.
    pub rtol_true: Option<f64>,
    pub max_iter: usize,
    pub breakdown_tol: f64,
    pub reorthogonalize: bool,
    pub true_residual_stride: usize,
    /// Lower-triangular `L` with `W = L L^T`; the minimized norm becomes `||L^T y||`.
    pub weight_cholesky: Option<Matrix>,
    /// Keep every iterate `x_k` in the history.
    pub store_iterates: bool,
    /// Keep the mapped Arnoldi basis `H_R V_k` in the result.
    pub store_basis: bool,
}

impl Default for GmresConfig {
    fn default() -> Self {
        Self {
            mode: PreconditioningMode::NoPrecond,
            rtol_preconditioned: 1e-10,
            rtol_true: None,
            max_iter: 500,
            breakdown_tol: 1e-14,
            reorthogonalize: true,
            true_residual_stride: 1,
            weight_cholesky: None,
            store_iterates: false,
            store_basis: false,
        }
    }
}

impl GmresConfig {
    pub fn new(mode: PreconditioningMode) -> Self {
        Self {
            mode,
            ..Self::default()
        }
    }

    fn validate(&self, n: usize) -> Result<()> {
        let in_unit = |v: f64| v > 0.0 && v < 1.0;
        if !in_unit(self.rtol_preconditioned) {
            return Err(Error::InvalidConfig(format!(
                "rtol_preconditioned must lie in (0, 1), got {}",
                self.rtol_preconditioned
            )));
        }
        if let Some(t) = self.rtol_true {
            if !in_unit(t) {
                return Err(Error::InvalidConfig(format!(
                    "rtol_true must lie in (0, 1), got {t}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidConfig("max_iter must be at least 1".into()));
        }
        if self.true_residual_stride == 0 {
            return Err(Error::InvalidConfig(
                "true_residual_stride must be at least 1".into(),
            ));
        }
        if !(self.breakdown_tol >= 0.0) {
            return Err(Error::InvalidConfig(
                "breakdown_tol must be non-negative".into(),
            ));
        }
        if let Some(l) = &self.weight_cholesky {
            check_dim("weight_cholesky rows", n, l.rows())?;
            check_dim("weight_cholesky columns", n, l.cols())?;
            for i in 0..n {
                if !(l[(i, i)] > 0.0) {
                    return Err(Error::InvalidConfig(format!(
                        "weight_cholesky diagonal entry {i} is not positive"
                    )));
                }
                if (i + 1..n).any(|j| l[(i, j)] != 0.0) {
                    return Err(Error::InvalidConfig(
                        "weight_cholesky must be lower triangular".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Per-iteration residual records. Index `k` is iteration `k`; entry 0 is
/// the initial residual.
#[derive(Debug, Clone, Default)]
pub struct GmresHistory {
    /// `||H_L r_k||` in the active inner product.
    pub preconditioned: Vec<f64>,
    /// Euclidean `||b - A x_k||`, `None` where not sampled.
    pub true_residual: Vec<Option<f64>>,
    /// Iterates `x_0, x_1, ...`; empty unless `store_iterates` was set.
    pub iterates: Vec<Vector>,
}

impl GmresHistory {
    pub fn len(&self) -> usize {
        self.preconditioned.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preconditioned.is_empty()
    }

    pub fn preconditioned_relative(&self) -> Vec<f64> {
        let r0 = self.preconditioned[0];
        self.preconditioned
            .iter()
            .map(|r| if r0 > 0.0 { r / r0 } else { 0.0 })
            .collect()
    }

    pub fn true_relative(&self) -> Vec<Option<f64>> {
        let r0 = self.true_residual[0].unwrap_or(0.0);
        self.true_residual
            .iter()
            .map(|r| r.map(|r| if r0 > 0.0 { r / r0 } else { 0.0 }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GmresStatus {
    ConvergedPreconditioned,
    ConvergedTrue,
    MaxIterations,
    /// The Krylov space became invariant and the least-squares solution is exact.
    HappyBreakdown,
    /// The Krylov space became invariant but the projected matrix is singular.
    BreakdownFailure,
}

impl GmresStatus {
    pub fn is_success(self) -> bool {
        matches!(
            self,
            Self::ConvergedPreconditioned | Self::ConvergedTrue | Self::HappyBreakdown
        )
    }
}

#[derive(Debug, Clone)]
pub struct GmresResult {
    pub x: Vector,
    pub history: GmresHistory,
    pub status: GmresStatus,
    pub iterations: usize,
    /// Columns `H_R v_j`, present when `store_basis` was set.
    pub search_basis: Option<Matrix>,
}

/// Euclidean norm of `b - A x`.
pub fn true_residual_norm(a: &LinearOperator, b: &Vector, x: &Vector) -> Result<f64> {
    check_dim("true_residual_norm rhs", a.dim(), b.dim())?;
    check_dim("true_residual_norm x", a.dim(), x.dim())?;
    Ok(norm2(&residual(a, b, x)))
}

fn residual(a: &LinearOperator, b: &[f64], x: &[f64]) -> Vec<f64> {
    let ax = a.apply_slice(x);
    b.iter().zip(&ax).map(|(bi, axi)| bi - axi).collect()
}

fn check_mode(mode: PreconditioningMode, p: &PreconditionerPair) -> Result<()> {
    let ok = match mode {
        PreconditioningMode::NoPrecond => p.left.is_identity() && p.right.is_identity(),
        PreconditioningMode::Left => p.right.is_identity(),
        PreconditioningMode::Right => p.left.is_identity(),
        PreconditioningMode::Split => true,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "preconditioner pair does not match mode {mode:?}"
        )))
    }
}

struct Arnoldi<'a> {
    a: &'a LinearOperator,
    precond: &'a PreconditionerPair,
    /// `F = L^T` for the weighted inner product.
    weight: Option<Matrix>,
    basis: Vec<Vec<f64>>,
    /// `F v_j`, kept alongside the basis when weighted.
    weighted_basis: Vec<Vec<f64>>,
    /// Columns of the triangular factor after Givens rotations.
    r_cols: Vec<Vec<f64>>,
    cos: Vec<f64>,
    sin: Vec<f64>,
    g: Vec<f64>,
    g_initial: f64,
}

enum Step {
    Continue,
    Breakdown,
    Singular,
}

impl<'a> Arnoldi<'a> {
    fn weigh(&self, y: &[f64]) -> Option<Vec<f64>> {
        self.weight.as_ref().map(|f| f.mat_vec_slice(y))
    }

    fn norm(&self, y: &[f64], fy: &Option<Vec<f64>>) -> f64 {
        match fy {
            Some(fy) => norm2(fy),
            None => norm2(y),
        }
    }

    fn start(&mut self, z0: Vec<f64>, fz0: Option<Vec<f64>>, beta: f64) {
        self.basis.push(z0.iter().map(|v| v / beta).collect());
        if let Some(fz0) = fz0 {
            self.weighted_basis
                .push(fz0.iter().map(|v| v / beta).collect());
        }
        self.g.push(beta);
        self.g_initial = beta;
    }

    /// Extends the basis by one vector. `k` is the index of the newest basis vector.
    fn step(&mut self, k: usize, reorth: bool, breakdown_tol: f64) -> Result<Step> {
        let mut w = self.precond.left.apply_slice(
            &self
                .a
                .apply_slice(&self.precond.right.apply_slice(&self.basis[k])),
        );
        if w.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFiniteIterate { iteration: k + 1 });
        }
        let mut fw = self.weigh(&w);
        let w_norm = self.norm(&w, &fw);

        let mut h = vec![0.0; k + 2];
        let passes = if reorth { 2 } else { 1 };
        for _ in 0..passes {
            for i in 0..=k {
                let hij = match &fw {
                    Some(fw) => dot(fw, &self.weighted_basis[i]),
                    None => dot(&w, &self.basis[i]),
                };
                axpy(-hij, &self.basis[i], &mut w);
                if let Some(fw) = fw.as_mut() {
                    axpy(-hij, &self.weighted_basis[i], fw);
                }
                h[i] += hij;
            }
        }
        let h_next = self.norm(&w, &fw);
        h[k + 1] = h_next;

        for i in 0..k {
            let (c, s) = (self.cos[i], self.sin[i]);
            let (hi, hi1) = (h[i], h[i + 1]);
            h[i] = c * hi + s * hi1;
            h[i + 1] = -s * hi + c * hi1;
        }
        let rho = h[k].hypot(h[k + 1]);
        if !rho.is_finite() {
            return Err(Error::NonFiniteIterate { iteration: k + 1 });
        }
        if rho == 0.0 || rho <= breakdown_tol * w_norm {
            return Ok(Step::Singular);
        }
        let (c, s) = (h[k] / rho, h[k + 1] / rho);
        h[k] = rho;
        h.truncate(k + 1);
        self.cos.push(c);
        self.sin.push(s);
        let gk = self.g[k];
        self.g[k] = c * gk;
        self.g.push(-s * gk);
        self.r_cols.push(h);

        // A tiny subdiagonal only ends the run when the residual is small as
        // well; for strongly non-normal M, `||M v_k||` can dwarf a genuine new
        // direction. Otherwise the remainder is still an orthonormal extension.
        if h_next == 0.0
            || (h_next <= breakdown_tol * w_norm
                && self.g[k + 1].abs() <= breakdown_tol.sqrt() * self.g_initial)
        {
            return Ok(Step::Breakdown);
        }
        self.basis.push(w.iter().map(|v| v / h_next).collect());
        if let Some(fw) = fw {
            self.weighted_basis
                .push(fw.iter().map(|v| v / h_next).collect());
        }
        Ok(Step::Continue)
    }

    fn residual_estimate(&self) -> f64 {
        self.g.last().copied().unwrap_or(0.0).abs()
    }

    /// `x_0 + H_R V_k y_k` using the first `k` basis vectors.
    fn iterate(&self, x0: &[f64], k: usize) -> Vec<f64> {
        let mut y = self.g[..k].to_vec();
        for i in (0..k).rev() {
            let s: f64 = (i + 1..k).map(|j| self.r_cols[j][i] * y[j]).sum();
            y[i] = (y[i] - s) / self.r_cols[i][i];
        }
        let mut z = vec![0.0; x0.len()];
        for (yj, vj) in y.iter().zip(&self.basis) {
            axpy(*yj, vj, &mut z);
        }
        let mut x = self.precond.right.apply_slice(&z);
        x.iter_mut().zip(x0).for_each(|(xi, x0i)| *xi += x0i);
        x
    }

    fn mapped_basis(&self, k: usize) -> Option<Matrix> {
        if k == 0 {
            return None;
        }
        let n = self.basis[0].len();
        let mut m = Matrix::zeros(n, k);
        for (j, v) in self.basis.iter().take(k).enumerate() {
            m.set_column(j, &self.precond.right.apply_slice(v));
        }
        Some(m)
    }
}

/// Solves `A x = b` by GMRES on the split-preconditioned system
/// `H_L A H_R u = H_L b`, `x = H_R u`.
pub fn gmres_solve(
    a: &LinearOperator,
    b: &Vector,
    x0: &Vector,
    precond: &PreconditionerPair,
    config: &GmresConfig,
) -> Result<GmresResult> {
    let n = a.dim();
    check_dim("gmres rhs", n, b.dim())?;
    check_dim("gmres initial guess", n, x0.dim())?;
    check_dim("gmres preconditioner", n, precond.dim())?;
    config.validate(n)?;
    check_mode(config.mode, precond)?;

    let mut solver = Arnoldi {
        a,
        precond,
        weight: config.weight_cholesky.as_ref().map(Matrix::transpose),
        basis: Vec::new(),
        weighted_basis: Vec::new(),
        r_cols: Vec::new(),
        cos: Vec::new(),
        sin: Vec::new(),
        g: Vec::new(),
        g_initial: 0.0,
    };

    let r0 = residual(a, b, x0);
    let true0 = norm2(&r0);
    let z0 = precond.left.apply_slice(&r0);
    if z0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIterate { iteration: 0 });
    }
    let fz0 = solver.weigh(&z0);
    let beta = solver.norm(&z0, &fz0);

    let mut history = GmresHistory {
        preconditioned: vec![beta],
        true_residual: vec![Some(true0)],
        iterates: Vec::new(),
    };
    if config.store_iterates {
        history.iterates.push(x0.clone());
    }
    if beta == 0.0 {
        return Ok(GmresResult {
            x: x0.clone(),
            history,
            status: GmresStatus::ConvergedPreconditioned,
            iterations: 0,
            search_basis: None,
        });
    }
    solver.start(z0, fz0, beta);

    let sample_true = |x: &[f64]| -> Result<f64> {
        let t = norm2(&residual(a, b, x));
        if t.is_finite() {
            Ok(t)
        } else {
            Err(Error::NonFiniteIterate { iteration: 0 })
        }
    };

    let mut status = GmresStatus::MaxIterations;
    let mut k_done = 0;
    for k in 0..config.max_iter {
        let step = solver.step(k, config.reorthogonalize, config.breakdown_tol)?;
        if let Step::Singular = step {
            status = GmresStatus::BreakdownFailure;
            break;
        }
        k_done = k + 1;
        let estimate = solver.residual_estimate();
        history.preconditioned.push(estimate);
        history.true_residual.push(None);

        let stride_hit = k_done % config.true_residual_stride == 0;
        let precond_converged = estimate <= config.rtol_preconditioned * beta;
        let breakdown = matches!(step, Step::Breakdown);
        let need_x = config.store_iterates
            || stride_hit
            || breakdown
            || (precond_converged && config.rtol_true.is_some());
        let x_k = need_x.then(|| solver.iterate(x0, k_done));
        let mut true_k = None;
        if let Some(x_k) = &x_k {
            if x_k.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFiniteIterate { iteration: k_done });
            }
            if stride_hit || breakdown || precond_converged {
                let t =
                    sample_true(x_k).map_err(|_| Error::NonFiniteIterate { iteration: k_done })?;
                history.true_residual[k_done] = Some(t);
                true_k = Some(t);
            }
        }
        if let (true, Some(x_k)) = (config.store_iterates, x_k) {
            history.iterates.push(Vector::from_vec(x_k));
        }

        if breakdown {
            status = GmresStatus::HappyBreakdown;
            break;
        }
        if precond_converged {
            match config.rtol_true {
                None => {
                    status = GmresStatus::ConvergedPreconditioned;
                    break;
                }
                Some(t) => {
                    if true_k.is_some_and(|r| r <= t * true0) {
                        status = GmresStatus::ConvergedTrue;
                        break;
                    }
                }
            }
        }
    }

    let x = solver.iterate(x0, k_done);
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFiniteIterate { iteration: k_done });
    }
    if history.true_residual[k_done].is_none() {
        history.true_residual[k_done] = Some(sample_true(&x)?);
    }
    Ok(GmresResult {
        x: Vector::from_vec(x),
        history,
        status,
        iterations: k_done,
        search_basis: if config.store_basis {
            solver.mapped_basis(k_done)
        } else {
            None
        },
    })
}

/// Runs left- and right-preconditioned GMRES with the same inputs, sampling
/// the true residual at every iteration.
pub fn run_left_right_pair(
    a: &LinearOperator,
    b: &Vector,
    x0: &Vector,
    h: &LinearOperator,
    config: &GmresConfig,
) -> Result<(GmresResult, GmresResult)> {
    let base = GmresConfig {
        true_residual_stride: 1,
        ..config.clone()
    };
    let left_cfg = GmresConfig {
        mode: PreconditioningMode::Left,
        ..base.clone()
    };
    let right_cfg = GmresConfig {
        mode: PreconditioningMode::Right,
        ..base
    };
    let left = gmres_solve(a, b, x0, &PreconditionerPair::left(h.clone()), &left_cfg)?;
    let right = gmres_solve(a, b, x0, &PreconditionerPair::right(h.clone()), &right_cfg)?;
    Ok((left, right))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StoppingVerdict {
    /// The preconditioned criterion fires before the true one.
    Premature,
    /// The preconditioned criterion fires after the true one.
    Delayed,
    Aligned,
    /// Neither criterion was reached.
    NotReached,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoppingReport {
    pub k_preconditioned: Option<usize>,
    pub k_true: Option<usize>,
    pub verdict: StoppingVerdict,
}

/// Compares when the preconditioned and the true relative residual first drop
/// below `rtol`.
pub fn stopping_report(h: &GmresHistory, rtol: f64) -> Result<StoppingReport> {
    if h.true_residual.iter().all(Option::is_none) {
        return Err(Error::ContractViolation(
            "history has no sampled true residuals".into(),
        ));
    }
    let k_preconditioned = h.preconditioned_relative().iter().position(|&r| r <= rtol);
    let k_true = h
        .true_relative()
        .iter()
        .position(|r| r.is_some_and(|r| r <= rtol));
    let verdict = match (k_preconditioned, k_true) {
        (None, None) => StoppingVerdict::NotReached,
        (Some(_), None) => StoppingVerdict::Premature,
        (None, Some(_)) => StoppingVerdict::Delayed,
        (Some(p), Some(t)) if p < t => StoppingVerdict::Premature,
        (Some(p), Some(t)) if p > t => StoppingVerdict::Delayed,
        _ => StoppingVerdict::Aligned,
    };
    Ok(StoppingReport {
        k_preconditioned,
        k_true,
        verdict,
    })
}
