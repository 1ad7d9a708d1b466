//! Mittag-Leffler functions on the real line.
//!
//! `E_{α,β}(z) = Σ zⁿ / Γ(αn + β)` is summed directly whenever the partial sums
//! can be certified. On the negative axis the series cancels badly; there the
//! evaluator switches to the real-line integral representation (α < 1) or to
//! the reciprocal identity `e^{−x} = 1 / e^{x}` (α = β = 1). Every result
//! carries the route taken and an a posteriori error estimate.

mod gamma;
mod integral;
mod series;

pub use gamma::{gamma, ln_gamma, MAX_GAMMA_ARG};

use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Truncation controls for the series and the fallback quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesConfig {
    /// Relative tolerance on the truncation error.
    pub tol: f64,
    /// Cap on series terms (and on integrand evaluations for the quadrature route).
    pub max_terms: usize,
    /// Largest |z| accepted.
    pub z_cap: f64,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self {
            tol: 1e-14,
            max_terms: 10_000,
            z_cap: 50.0,
        }
    }
}

impl SeriesConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(domain("tol", self.tol, "must be positive"));
        }
        if self.max_terms < 1 {
            return Err(domain("max_terms", self.max_terms as f64, "must be at least 1"));
        }
        if !(self.z_cap > 0.0) {
            return Err(domain("z_cap", self.z_cap, "must be positive"));
        }
        Ok(())
    }
}

/// How a value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Series,
    /// Quadrature of the negative-axis integral representation.
    Integral,
    /// `1 / E_1(|z|)` for the exponential on the negative axis.
    Reciprocal,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Series => "series",
            Method::Integral => "integral",
            Method::Reciprocal => "reciprocal",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EvalResult {
    pub value: f64,
    /// Truncation bound plus a rounding estimate proportional to Σ|term|.
    pub error_estimate: f64,
    /// Series terms summed, or integrand evaluations for [`Method::Integral`].
    pub terms_used: usize,
    pub converged: bool,
    pub method: Method,
}

impl EvalResult {
    fn exact(value: f64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            terms_used: 1,
            converged: true,
            method: Method::Series,
        }
    }
}

/// Parameters of `t ↦ E_{α,β}(λ t^α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
    pub lambda: f64,
}

impl MLParams {
    /// One-parameter family, β = 1.
    pub fn new(alpha: f64, lambda: f64) -> Self {
        Self {
            alpha,
            beta: 1.0,
            lambda,
        }
    }

    pub fn with_beta(self, beta: f64) -> Self {
        Self { beta, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        check_alpha_beta(self.alpha, self.beta)?;
        if !self.lambda.is_finite() {
            return Err(domain("lambda", self.lambda, "must be finite"));
        }
        Ok(())
    }
}

fn check_alpha_beta(alpha: f64, beta: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(domain("alpha", alpha, "must lie in (0, 1]"));
    }
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(domain("beta", beta, "must be positive"));
    }
    Ok(())
}

// Relative rounding of one integrand evaluation, in ulps: two powf calls,
// exp of an argument up to 80, and the rational part.
const QUADRATURE_ULPS: f64 = 16.0;
// Running sum below this fraction of the largest term cannot be certified.
const CANCELLATION_FLOOR: f64 = 1e-8;

/// Two-parameter Mittag-Leffler function E_{α,β}(z) for real z.
///
/// Errors on |z| > `cfg.z_cap`, invalid parameters, or overflow. A result
/// that could not be certified within `cfg.tol` comes back with
/// `converged = false`.
pub fn ml_e2(alpha: f64, beta: f64, z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    check_alpha_beta(alpha, beta)?;
    cfg.validate()?;
    if !z.is_finite() || z.abs() > cfg.z_cap {
        return Err(domain("z", z, "|z| exceeds the evaluation cap"));
    }

    let series = series::sum_series(alpha, beta, z, cfg);
    if z >= 0.0 {
        return series.map(|s| certify_series(&s, cfg));
    }

    let series = match series {
        Ok(s) => {
            let r = certify_series(&s, cfg);
            if r.converged {
                return Ok(r);
            }
            Some(r)
        }
        Err(Error::Overflow { .. }) => None,
        Err(e) => return Err(e),
    };

    let x = -z;
    if alpha < 1.0 && (1.0 - beta) + alpha > 0.0 {
        // Half the budget for discretisation, half for rounding.
        let q = integral::negative_axis(alpha, beta, x, 0.5 * cfg.tol, cfg.max_terms);
        let error_estimate = q.error + QUADRATURE_ULPS * f64::EPSILON * q.abs_value;
        let quad = EvalResult {
            value: q.value,
            error_estimate,
            terms_used: q.evals,
            converged: q.converged && error_estimate <= cfg.tol * q.value.abs().max(1.0),
            method: Method::Integral,
        };
        return Ok(match series {
            Some(s) if !quad.converged && s.error_estimate < quad.error_estimate => s,
            _ => quad,
        });
    }
    if alpha == 1.0 && beta == 1.0 {
        let s = certify_series(&series::sum_series(1.0, 1.0, x, cfg)?, cfg);
        let value = s.value.recip();
        // Relative error carries over to the reciprocal.
        let error_estimate = s.error_estimate / s.value * value;
        return Ok(EvalResult {
            value,
            error_estimate,
            terms_used: s.terms_used,
            converged: s.converged,
            method: Method::Reciprocal,
        });
    }
    series.ok_or(Error::Overflow {
        what: "series term",
        arg: z,
    })
}

fn certify_series(s: &series::SeriesOutcome, cfg: &SeriesConfig) -> EvalResult {
    let error_estimate = s.tail_bound + s.rounding;
    let cancelled = s.value.abs() < CANCELLATION_FLOOR * s.max_term;
    EvalResult {
        value: s.value,
        error_estimate,
        terms_used: s.terms_used,
        converged: s.tail_met && !cancelled && error_estimate <= cfg.tol * s.value.abs().max(1.0),
        method: Method::Series,
    }
}

/// One-parameter Mittag-Leffler function E_α(z) = E_{α,1}(z).
pub fn ml_e(alpha: f64, z: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    ml_e2(alpha, 1.0, z, cfg)
}

/// `E_{α,β}(λ t^α)`; with β = 1 this is the solution of the Caputo problem
/// `D^α u = λu, u(0) = 1`.
pub fn ml_at_time(p: &MLParams, t: f64, cfg: &SeriesConfig) -> Result<EvalResult> {
    p.validate()?;
    if !(t >= 0.0 && t.is_finite()) {
        return Err(domain("t", t, "must be finite and nonnegative"));
    }
    if t == 0.0 && p.beta == 1.0 {
        return Ok(EvalResult::exact(1.0));
    }
    let z = p.lambda * t.powf(p.alpha);
    ml_e2(p.alpha, p.beta, z, cfg)
}

/// Like [`ml_e2`] but refuses uncertified values.
pub fn ml_e2_certified(alpha: f64, beta: f64, z: f64, cfg: &SeriesConfig) -> Result<f64> {
    let r = ml_e2(alpha, beta, z, cfg)?;
    certified(r, alpha, beta, z)
}

/// Like [`ml_at_time`] but refuses uncertified values.
pub fn ml_at_time_certified(p: &MLParams, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    let r = ml_at_time(p, t, cfg)?;
    certified(r, p.alpha, p.beta, p.lambda * t.powf(p.alpha))
}

fn certified(r: EvalResult, alpha: f64, beta: f64, z: f64) -> Result<f64> {
    if r.converged {
        Ok(r.value)
    } else {
        Err(Error::NotConverged {
            alpha,
            beta,
            z,
            error_estimate: r.error_estimate,
            terms_used: r.terms_used,
        })
    }
}
