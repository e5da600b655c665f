//! Spectral term of the eigenvalue GMRES bound:
//! `eps(k) = min_{deg q <= k, q(0) = 1} max_{lambda in spectrum} |q(lambda)|`
//! for real positive spectra.

use crate::dense::{lu_factor, Matrix};
use crate::error::{Error, Result};

const MAX_EXCHANGES: usize = 100;
const STAGNATION_REL: f64 = 1e-12;

/// Upper bound on `eps(k)` for any spectrum inside `[a, b]`, `0 < a <= b`:
/// `1 / T_k((b + a) / (b - a))`.
pub fn chebyshev_interval_eps(a: f64, b: f64, k: usize) -> Result<f64> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "interval must satisfy 0 < a, got a = {a}"
        )));
    }
    if b < a {
        return Err(Error::Domain(format!("interval [{a}, {b}] is empty")));
    }
    if k == 0 {
        return Ok(1.0);
    }
    if a == b {
        return Ok(0.0);
    }
    let t = (b + a) / (b - a);
    Ok(1.0 / (k as f64 * t.acosh()).cosh())
}

/// Residual polynomial `q` with `q(0) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ResidualPolynomial {
    /// `q(t) = prod (1 - t / r_i)`.
    Roots(Vec<f64>),
    /// `q(t) = 1 + t * sum_j c_j T_j(s(t))`, `s` the affine map of `[lo, hi]`
    /// onto `[-1, 1]`.
    Chebyshev { lo: f64, hi: f64, coeffs: Vec<f64> },
}

impl ResidualPolynomial {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            Self::Roots(roots) => roots.iter().map(|r| 1.0 - t / r).product(),
            Self::Chebyshev { lo, hi, coeffs } => {
                1.0 + t * chebyshev_row(*lo, *hi, t, coeffs.len())
                    .iter()
                    .zip(coeffs)
                    .map(|(tj, c)| tj * c)
                    .sum::<f64>()
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            Self::Roots(r) => r.len(),
            Self::Chebyshev { coeffs, .. } => coeffs.len(),
        }
    }
}

/// `[T_0(s), ..., T_{m-1}(s)]` with `s` mapping `[lo, hi]` to `[-1, 1]`.
fn chebyshev_row(lo: f64, hi: f64, t: f64, m: usize) -> Vec<f64> {
    let s = if hi > lo {
        (2.0 * t - lo - hi) / (hi - lo)
    } else {
        0.0
    };
    let mut row = Vec::with_capacity(m);
    for j in 0..m {
        row.push(match j {
            0 => 1.0,
            1 => s,
            _ => 2.0 * s * row[j - 1] - row[j - 2],
        });
    }
    row
}

#[derive(Debug, Clone)]
pub struct MinimaxResult {
    pub eps: f64,
    pub polynomial: ResidualPolynomial,
    pub exchanges: usize,
}

/// Exact discrete minimax `eps(k)` over a positive spectrum by the exchange
/// algorithm.
///
/// With `q(0) = 1` fixed the admissible set is `1 + t P_{k-1}`, a Haar system
/// of dimension `k` on `(0, inf)`, so the reference holds `k + 1` points.
pub fn remez_discrete_eps(eigs: &[f64], k: usize) -> Result<MinimaxResult> {
    if eigs.is_empty() {
        return Err(Error::Domain("spectrum is empty".into()));
    }
    if let Some(bad) = eigs.iter().find(|&&l| !(l > 0.0) || !l.is_finite()) {
        return Err(Error::Domain(format!(
            "spectrum must be real and positive, found {bad}"
        )));
    }
    let mut pts = eigs.to_vec();
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    let m = pts.len();

    if k == 0 {
        return Ok(MinimaxResult {
            eps: 1.0,
            polynomial: ResidualPolynomial::Roots(Vec::new()),
            exchanges: 0,
        });
    }
    if m <= k {
        return Ok(MinimaxResult {
            eps: 0.0,
            polynomial: ResidualPolynomial::Roots(pts),
            exchanges: 0,
        });
    }

    let (lo, hi) = (pts[0], pts[m - 1]);
    // Initial reference: points nearest the Chebyshev extrema of [lo, hi].
    let mut reference = initial_reference(&pts, k + 1);
    let mut last_level = 0.0f64;

    for exchanges in 0..=MAX_EXCHANGES {
        let (coeffs, level) = solve_reference(&pts, &reference, lo, hi, k)?;
        let poly = ResidualPolynomial::Chebyshev { lo, hi, coeffs };
        let errors: Vec<f64> = pts.iter().map(|&t| poly.eval(t)).collect();
        let (worst, worst_abs) = errors
            .iter()
            .enumerate()
            .map(|(i, e)| (i, e.abs()))
            .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
        let level = level.abs();

        let settled = worst_abs <= level * (1.0 + STAGNATION_REL) + f64::EPSILON
            || (level - last_level).abs() <= STAGNATION_REL * level;
        if settled {
            return Ok(MinimaxResult {
                eps: worst_abs,
                polynomial: poly,
                exchanges,
            });
        }
        last_level = level;
        if exchanges == MAX_EXCHANGES {
            break;
        }
        reference = exchange(&errors, &reference, worst, k + 1);
    }
    Err(Error::NumericalFailure(format!(
        "discrete Remez exchange did not settle within {MAX_EXCHANGES} exchanges"
    )))
}

fn initial_reference(pts: &[f64], size: usize) -> Vec<usize> {
    let m = pts.len();
    if m == size {
        return (0..m).collect();
    }
    let (lo, hi) = (pts[0], pts[m - 1]);
    let mut chosen: Vec<usize> = Vec::with_capacity(size);
    let mut next_free = 0usize;
    for j in 0..size {
        let x = 0.5 * (lo + hi)
            - 0.5 * (hi - lo) * (std::f64::consts::PI * j as f64 / (size - 1) as f64).cos();
        let mut idx = pts
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - x).abs().total_cmp(&(b.1 - x).abs()))
            .map(|(i, _)| i)
            .unwrap_or(0);
        // Keep indices strictly increasing and leave room for the remaining ones.
        idx = idx.max(next_free).min(m - (size - j));
        chosen.push(idx);
        next_free = idx + 1;
    }
    chosen
}

/// Solves `1 + x_i p(x_i) = (-1)^i E` on the reference for `p` and `E`.
fn solve_reference(
    pts: &[f64],
    reference: &[usize],
    lo: f64,
    hi: f64,
    k: usize,
) -> Result<(Vec<f64>, f64)> {
    let size = k + 1;
    let mut a = Matrix::zeros(size, size);
    let mut rhs = vec![-1.0; size];
    for (i, &r) in reference.iter().enumerate() {
        let x = pts[r];
        for (j, tj) in chebyshev_row(lo, hi, x, k).into_iter().enumerate() {
            a[(i, j)] = x * tj;
        }
        a[(i, k)] = if i % 2 == 0 { -1.0 } else { 1.0 };
        rhs[i] = -1.0;
    }
    let lu = lu_factor(&a)
        .map_err(|e| Error::NumericalFailure(format!("reference system is singular: {e}")))?;
    let sol = lu.solve_slice(&rhs);
    let level = sol[k];
    Ok((sol[..k].to_vec(), level))
}

/// Multiple exchange: one extremum per sign run, then the window of `size`
/// consecutive alternating extrema that contains the global maximum.
fn exchange(errors: &[f64], old: &[usize], worst: usize, size: usize) -> Vec<usize> {
    let mut runs: Vec<usize> = Vec::new();
    for (i, &e) in errors.iter().enumerate() {
        if e == 0.0 {
            continue;
        }
        match runs.last_mut() {
            Some(last) if errors[*last].signum() == e.signum() => {
                if e.abs() > errors[*last].abs() {
                    *last = i;
                }
            }
            _ => runs.push(i),
        }
    }
    if runs.len() < size {
        return single_exchange(errors, old, worst);
    }
    let pos = runs.iter().position(|&i| i == worst).unwrap_or(0);
    // Choose the window maximizing the smallest |error| among those containing `pos`.
    let lo = pos.saturating_sub(size - 1);
    let hi = pos.min(runs.len() - size);
    let best = (lo..=hi)
        .max_by(|&a, &b| {
            let ma = runs[a..a + size]
                .iter()
                .map(|&i| errors[i].abs())
                .fold(f64::INFINITY, f64::min);
            let mb = runs[b..b + size]
                .iter()
                .map(|&i| errors[i].abs())
                .fold(f64::INFINITY, f64::min);
            ma.total_cmp(&mb)
        })
        .unwrap_or(lo);
    runs[best..best + size].to_vec()
}

/// Stiefel single-point exchange keeping sign alternation.
fn single_exchange(errors: &[f64], old: &[usize], worst: usize) -> Vec<usize> {
    let mut r = old.to_vec();
    let sign = |i: usize| errors[i].signum();
    match r.iter().position(|&i| i > worst) {
        Some(0) => {
            if sign(r[0]) == sign(worst) {
                r[0] = worst;
            } else {
                r.insert(0, worst);
                r.pop();
            }
        }
        Some(p) => {
            if sign(r[p - 1]) == sign(worst) {
                r[p - 1] = worst;
            } else {
                r[p] = worst;
            }
        }
        None => {
            let last = r.len() - 1;
            if sign(r[last]) == sign(worst) {
                r[last] = worst;
            } else {
                r.remove(0);
                r.push(worst);
            }
        }
    }
    r
}
