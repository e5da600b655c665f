//! Browser bindings: each export returns a JSON string for the page in `www/`.

use lrgmres::analysis::{
    chebyshev_interval_eps, entrywise_gap, numerical_range_support, remez_discrete_eps,
};
use lrgmres::experiments::compare_left_right;
use lrgmres::generators::{eigvec_cond_case, householder_lee_case, SpectrumSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Largest dimension the page may request; dense work grows as `n^3`.
const MAX_N: usize = 200;

#[derive(Debug, Serialize)]
pub struct FovView {
    pub angles: Vec<f64>,
    pub support_ah: Vec<f64>,
    pub support_ha: Vec<f64>,
    pub gap_left: f64,
    pub gap_right: f64,
    pub ratio: f64,
}

#[derive(Debug, Serialize)]
pub struct CurvesView {
    pub kappa_x: f64,
    pub left_iterations: usize,
    pub right_iterations: usize,
    pub left_precond: Vec<f64>,
    pub left_true: Vec<Option<f64>>,
    pub right_precond: Vec<f64>,
    pub right_true: Vec<Option<f64>>,
    pub sandwich: String,
}

#[derive(Debug, Serialize)]
pub struct MinimaxView {
    pub eigenvalues: Vec<f64>,
    pub remez: Vec<f64>,
    pub chebyshev: Vec<f64>,
}

fn check_n(n: usize) -> Result<(), String> {
    if (3..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 3 and {MAX_N}"))
    }
}

/// Support functions of the fields of values of `AH` and `HA` for a
/// Householder-Lee case.
pub fn fov_view(
    n: usize,
    mu: f64,
    lambda: f64,
    seed: u64,
    n_angles: usize,
) -> Result<FovView, String> {
    check_n(n)?;
    let case = householder_lee_case(n, mu, lambda, seed, seed.wrapping_add(1))
        .map_err(|e| e.to_string())?;
    let ah = case
        .a_dense
        .matmul(&case.h_dense)
        .map_err(|e| e.to_string())?;
    let ha = case
        .h_dense
        .matmul(&case.a_dense)
        .map_err(|e| e.to_string())?;
    let gap = entrywise_gap(&ha, &ah).map_err(|e| e.to_string())?;
    let s_ah = numerical_range_support(&ah, n_angles).map_err(|e| e.to_string())?;
    let s_ha = numerical_range_support(&ha, n_angles).map_err(|e| e.to_string())?;
    Ok(FovView {
        angles: s_ah.angles,
        support_ah: s_ah.support,
        support_ha: s_ha.support,
        gap_left: gap.gap_left,
        gap_right: gap.gap_right,
        ratio: gap.ratio,
    })
}

/// Left and right residual histories for an eigenvector-conditioning case.
pub fn curves_view(n: usize, k: f64, seed: u64, rtol: f64) -> Result<CurvesView, String> {
    check_n(n)?;
    let case = eigvec_cond_case(n, k, SpectrumSpec::default(), seed, seed.wrapping_add(1))
        .map_err(|e| e.to_string())?;
    let cmp = compare_left_right(&case.a, &case.b, &case.h, rtol, n).map_err(|e| e.to_string())?;
    Ok(CurvesView {
        kappa_x: case.metadata.kappa_x.unwrap_or(f64::NAN),
        left_iterations: cmp.left.iterations,
        right_iterations: cmp.right.iterations,
        left_precond: cmp.left.history.preconditioned_relative(),
        left_true: cmp.left.history.true_relative(),
        right_precond: cmp.right.history.preconditioned_relative(),
        right_true: cmp.right.history.true_relative(),
        sandwich: cmp.sandwich.verdict(),
    })
}

/// Discrete minimax values on `m` eigenvalues spaced evenly in `[lo, hi]`
/// against the interval Chebyshev bound, for `k = 0..=k_max`.
pub fn minimax_view(lo: f64, hi: f64, m: usize, k_max: usize) -> Result<MinimaxView, String> {
    if !((2..=400).contains(&m) && k_max <= 60) {
        return Err("need 2 <= m <= 400 and k_max <= 60".into());
    }
    let eigenvalues: Vec<f64> = (0..m)
        .map(|i| lo + (hi - lo) * i as f64 / (m - 1) as f64)
        .collect();
    let mut remez = Vec::with_capacity(k_max + 1);
    let mut chebyshev = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        remez.push(
            remez_discrete_eps(&eigenvalues, k)
                .map_err(|e| e.to_string())?
                .eps,
        );
        chebyshev.push(chebyshev_interval_eps(lo, hi, k).map_err(|e| e.to_string())?);
    }
    Ok(MinimaxView {
        eigenvalues,
        remez,
        chebyshev,
    })
}

fn to_js<T: Serialize>(r: Result<T, String>) -> Result<String, JsValue> {
    r.and_then(|v| serde_json::to_string(&v).map_err(|e| e.to_string()))
        .map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn householder_lee_fov(
    n: usize,
    mu: f64,
    lambda: f64,
    seed: u32,
    n_angles: usize,
) -> Result<String, JsValue> {
    to_js(fov_view(n, mu, lambda, seed.into(), n_angles))
}

#[wasm_bindgen]
pub fn left_right_curves(n: usize, k: f64, seed: u32, rtol: f64) -> Result<String, JsValue> {
    to_js(curves_view(n, k, seed.into(), rtol))
}

#[wasm_bindgen]
pub fn minimax_curves(lo: f64, hi: f64, m: usize, k_max: usize) -> Result<String, JsValue> {
    to_js(minimax_view(lo, hi, m, k_max))
}
