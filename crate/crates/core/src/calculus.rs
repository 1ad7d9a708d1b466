//! Derivative of `t ↦ E_α(λt^α)` and two independent checks on it: central
//! differences, and an L1 discretisation of the Caputo derivative applied to
//! the closed-form solution of `D^α u = λu`.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::mlf::{gamma, ml_at_time_certified, ml_e2_certified, MLParams, SeriesConfig};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Fraction of [0, T] skipped before residuals are measured. The first L1
/// steps carry an O(1) local error from the t^α start-up layer of the exact
/// solution, so the max over every node does not shrink with the mesh.
pub const RESIDUAL_WINDOW_START: f64 = 0.5;

/// d/dt E_α(λt^α) = λ t^{α−1} E_{α,α}(λt^α), for t > 0.
///
/// Uses the one-parameter family regardless of `p.beta`.
pub fn ml_derivative(p: &MLParams, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t, "derivative needs t > 0"));
    }
    if p.lambda == 0.0 {
        return Ok(0.0);
    }
    let z = p.lambda * t.powf(p.alpha);
    let e_aa = ml_e2_certified(p.alpha, p.alpha, z, cfg)?;
    Ok(p.lambda * t.powf(p.alpha - 1.0) * e_aa)
}

/// Relative gap between the central difference (f(t+h) − f(t−h))/2h of
/// `E_α(λt^α)` and [`ml_derivative`].
pub fn finite_difference_check(p: &MLParams, t: f64, h: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(h > 0.0) {
        return Err(domain("h", h, "step must be positive"));
    }
    if !(h < t) {
        return Err(domain("h", h, "step must be smaller than t"));
    }
    let p = MLParams { beta: 1.0, ..*p };
    let exact = ml_derivative(&p, t, cfg)?;
    let forward = ml_at_time_certified(&p, t + h, cfg)?;
    let backward = ml_at_time_certified(&p, t - h, cfg)?;
    let central = (forward - backward) / (2.0 * h);
    Ok((central - exact).abs() / exact.abs().max(1e-300))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualReport {
    pub grid_steps: usize,
    /// max |L1[u](t_k) − λu(t_k)| over nodes with t_k ≥ T/2.
    pub max_residual: f64,
    /// log₂(residual(n) / residual(2n)); `None` when either residual vanishes.
    pub empirical_order: Option<f64>,
}

/// L1 weights bⱼ = (j+1)^{1−α} − j^{1−α}.
fn l1_weights(alpha: f64, count: usize) -> Vec<f64> {
    let e = 1.0 - alpha;
    (0..count)
        .map(|j| {
            if j == 0 {
                1.0
            } else {
                ((j + 1) as f64).powf(e) - (j as f64).powf(e)
            }
        })
        .collect()
}

/// Max residual of the L1 Caputo derivative of the exact solution on an
/// `n`-step uniform grid over [0, T].
pub fn l1_max_residual(p: &MLParams, u0: f64, t_end: f64, n: usize, cfg: &SeriesConfig) -> Result<f64> {
    p.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain("T", t_end, "must be positive"));
    }
    if n < 2 {
        return Err(domain("n_steps", n as f64, "need at least 2 steps"));
    }
    if !u0.is_finite() {
        return Err(domain("u0", u0, "must be finite"));
    }
    let p = MLParams { beta: 1.0, ..*p };
    let tau = t_end / n as f64;
    let u = (0..=n)
        .map(|k| Ok(u0 * ml_at_time_certified(&p, k as f64 * tau, cfg)?))
        .collect::<Result<Vec<f64>>>()?;
    let weights = l1_weights(p.alpha, n);
    let scale = tau.powf(-p.alpha) / gamma(2.0 - p.alpha)?;

    let first = ((RESIDUAL_WINDOW_START * n as f64).ceil() as usize).max(1);
    let residual = (first..=n)
        .map(|k| {
            let history: f64 = weights[..k]
                .iter()
                .enumerate()
                .map(|(j, b)| b * (u[k - j] - u[k - j - 1]))
                .sum();
            (scale * history - p.lambda * u[k]).abs()
        })
        .fold(0.0, f64::max);
    Ok(residual)
}

/// L1 residual at `n_steps` together with the observed order from halving
/// the mesh once more.
pub fn caputo_l1_residual(
    p: &MLParams,
    u0: f64,
    t_end: f64,
    n_steps: usize,
    cfg: &SeriesConfig,
) -> Result<ResidualReport> {
    let coarse = l1_max_residual(p, u0, t_end, n_steps, cfg)?;
    let fine = l1_max_residual(p, u0, t_end, 2 * n_steps, cfg)?;
    let empirical_order = (coarse > 0.0 && fine > 0.0).then(|| (coarse / fine).log2());
    Ok(ResidualReport {
        grid_steps: n_steps,
        max_residual: coarse,
        empirical_order,
    })
}
