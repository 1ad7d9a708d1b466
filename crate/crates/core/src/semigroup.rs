//! The semigroup law `E_α(λ(t+s)^α) = E_α(λt^α)·E_α(λs^α)` and the
//! constructions used to show it holds only when α = 1 or λ = 0.
//!
//! The defect `D(t, s)` is computed pointwise or over a rectangular grid and
//! classified with two thresholds: below `tol` the law holds numerically,
//! above `threshold` it fails, and anything in between is reported as
//! inconclusive. The remaining operations mirror the argument for why a
//! multiplicative `E_α(λt^α)` forces λ = 0: extending a multiplicative function
//! to negative times, fitting the only candidate exponential, and isolating λ
//! from the derivative identity.

use std::fmt;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::mlf::{ml_at_time_certified, ml_e2_certified, MLParams, SeriesConfig};

/// `E_α(λ(t+s)^α) − E_α(λt^α)·E_α(λs^α)`.
///
/// Symmetric in `(t, s)` bit for bit: the sum and the product are both
/// commutative in IEEE arithmetic.
pub fn defect(p: &MLParams, t: f64, s: f64, cfg: &SeriesConfig) -> Result<f64> {
    let p = MLParams { beta: 1.0, ..*p };
    if !(s >= 0.0) {
        return Err(domain("s", s, "must be nonnegative"));
    }
    let joint = ml_at_time_certified(&p, t + s, cfg)?;
    let left = ml_at_time_certified(&p, t, cfg)?;
    let right = ml_at_time_certified(&p, s, cfg)?;
    let d = joint - left * right;
    if !d.is_finite() {
        return Err(Error::Overflow {
            what: "semigroup defect",
            arg: t + s,
        });
    }
    Ok(d)
}

/// Semigroup defect over a rectangular grid, indexed `defect[i][j] = D(tᵢ, sⱼ)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DefectGrid {
    pub t_values: Vec<f64>,
    pub s_values: Vec<f64>,
    pub defect: Vec<Vec<f64>>,
    pub sup_abs: f64,
}

impl DefectGrid {
    /// Cells in row-major order as `(t, s, defect)`.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.t_values
            .iter()
            .zip(&self.defect)
            .flat_map(move |(&t, row)| self.s_values.iter().zip(row).map(move |(&s, &d)| (t, s, d)))
    }
}

fn check_axis(name: &'static str, values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::Shape(format!("{name} grid is empty")));
    }
    if let Some(&bad) = values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        return Err(domain(name, bad, "grid values must be finite and nonnegative"));
    }
    if values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Shape(format!("{name} grid must be strictly ascending")));
    }
    Ok(())
}

pub fn defect_grid(p: &MLParams, t_values: &[f64], s_values: &[f64], cfg: &SeriesConfig) -> Result<DefectGrid> {
    check_axis("t", t_values)?;
    check_axis("s", s_values)?;
    let mut sup_abs = 0.0f64;
    let mut rows = Vec::with_capacity(t_values.len());
    for (i, &t) in t_values.iter().enumerate() {
        let mut row = Vec::with_capacity(s_values.len());
        for (j, &s) in s_values.iter().enumerate() {
            let d = defect(p, t, s, cfg).map_err(|e| Error::GridCell {
                i,
                j,
                t,
                s,
                source: Box::new(e),
            })?;
            sup_abs = sup_abs.max(d.abs());
            row.push(d);
        }
        rows.push(row);
    }
    Ok(DefectGrid {
        t_values: t_values.to_vec(),
        s_values: s_values.to_vec(),
        defect: rows,
        sup_abs,
    })
}

/// Evenly spaced points `start, …, end` (inclusive), used for both axes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub end: f64,
    pub points: usize,
}

impl Default for GridSpec {
    /// Interior square [0.25, 2]² with 8 points per axis; the defect vanishes
    /// on the axes so they carry no signal.
    fn default() -> Self {
        Self {
            start: 0.25,
            end: 2.0,
            points: 8,
        }
    }
}

impl GridSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        if self.points == 0 {
            return Err(Error::Shape("grid needs at least one point".into()));
        }
        if self.points == 1 {
            return Ok(vec![self.start]);
        }
        if !(self.end > self.start) {
            return Err(domain("end", self.end, "grid end must exceed its start"));
        }
        let step = (self.end - self.start) / (self.points - 1) as f64;
        Ok((0..self.points)
            .map(|k| {
                if k + 1 == self.points {
                    self.end
                } else {
                    self.start + step * k as f64
                }
            })
            .collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Holds,
    Fails,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Holds => "HOLDS",
            Verdict::Fails => "FAILS",
        })
    }
}

/// The analytic answer: the law holds iff α = 1 or λ = 0.
pub fn semigroup_predicate(p: &MLParams) -> bool {
    p.alpha == 1.0 || p.lambda == 0.0
}

/// Classifies the semigroup law on `grid × grid`.
///
/// Returns [`Error::Inconclusive`] when the sup-norm defect lands strictly
/// between `tol` and `threshold`.
pub fn classify_semigroup(
    p: &MLParams,
    grid: &GridSpec,
    tol: f64,
    threshold: f64,
    cfg: &SeriesConfig,
) -> Result<Verdict> {
    if !(tol > 0.0) {
        return Err(domain("tol", tol, "must be positive"));
    }
    if !(threshold > tol) {
        return Err(domain("threshold", threshold, "must exceed tol"));
    }
    let values = grid.values()?;
    let sup_abs = defect_grid(p, &values, &values, cfg)?.sup_abs;
    classify_sup(sup_abs, tol, threshold)
}

pub(crate) fn classify_sup(sup_abs: f64, tol: f64, threshold: f64) -> Result<Verdict> {
    if sup_abs <= tol {
        Ok(Verdict::Holds)
    } else if sup_abs >= threshold {
        Ok(Verdict::Fails)
    } else {
        Err(Error::Inconclusive {
            sup_abs,
            tol,
            threshold,
        })
    }
}

/// A real function of time that may fail to evaluate.
pub trait Evaluator {
    fn eval(&self, t: f64) -> Result<f64>;
}

impl<F: Fn(f64) -> Result<f64>> Evaluator for F {
    fn eval(&self, t: f64) -> Result<f64> {
        self(t)
    }
}

/// `t ↦ E_α(λt^α)` as an [`Evaluator`].
#[derive(Debug, Clone, Copy)]
pub struct MlCurve {
    pub params: MLParams,
    pub cfg: SeriesConfig,
}

impl MlCurve {
    pub fn new(params: MLParams, cfg: SeriesConfig) -> Self {
        Self { params, cfg }
    }
}

impl Evaluator for MlCurve {
    fn eval(&self, t: f64) -> Result<f64> {
        ml_at_time_certified(&self.params, t, &self.cfg)
    }
}

/// ψₙ(τ) = f(τ + n) / f(n) on [−n, ∞).
///
/// For multiplicative `f` this agrees with `f` on [0, ∞) and with ψₘ on
/// [−m, ∞) for every m < n.
pub fn extend_multiplicative<F: Evaluator + ?Sized>(f: &F, n: u32, tau: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("n", 0.0, "must be a positive integer"));
    }
    let shift = n as f64;
    if !(tau >= -shift) {
        return Err(domain("tau", tau, "must be at least -n"));
    }
    let base = f.eval(shift)?;
    if !(base > 0.0) {
        return Err(domain("f(n)", base, "must be positive"));
    }
    Ok(f.eval(tau + shift)? / base)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub omega: f64,
    /// max |f(t) − e^{ωt}| over the sample points.
    pub residual: f64,
}

/// Fits `e^{ωt}` with ω = ln f(1) and measures the sup-norm gap on
/// `samples` evenly spaced points of [0, T].
pub fn exponential_fit<F: Evaluator + ?Sized>(f: &F, t_end: f64, samples: usize) -> Result<ExponentialFit> {
    if samples < 2 {
        return Err(domain("samples", samples as f64, "need at least 2 samples"));
    }
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(domain("T", t_end, "must be positive"));
    }
    let at_one = f.eval(1.0)?;
    if !(at_one > 0.0) {
        return Err(domain("f(1)", at_one, "must be positive to take its logarithm"));
    }
    let omega = at_one.ln();
    let mut residual = 0.0f64;
    for k in 0..samples {
        let t = t_end * k as f64 / (samples - 1) as f64;
        residual = residual.max((f.eval(t)? - (omega * t).exp()).abs());
    }
    Ok(ExponentialFit { omega, residual })
}

/// λ isolated from `λ t^{α−1} E_{α,α}(λt^α) = ω e^{ωt}`:
/// `t^{1−α} ω e^{ωt} / E_{α,α}(λt^α)`.
pub fn proof_trace_lambda(p: &MLParams, omega: f64, t: f64, cfg: &SeriesConfig) -> Result<f64> {
    p.validate()?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(domain("t", t, "must be positive"));
    }
    if !omega.is_finite() {
        return Err(domain("omega", omega, "must be finite"));
    }
    let e_aa = ml_e2_certified(p.alpha, p.alpha, p.lambda * t.powf(p.alpha), cfg)?;
    if e_aa.abs() < 1e-300 {
        return Err(Error::Degenerate {
            what: "E_{α,α}(λt^α)",
            value: e_aa,
        });
    }
    Ok(t.powf(1.0 - p.alpha) * omega * (omega * t).exp() / e_aa)
}

/// Least-squares slope of ln|y| against ln t.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::Shape("slope needs at least two points".into()));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(t, y)| (t.ln(), y.abs().ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if !(sxx > 0.0) || !sxy.is_finite() {
        return Err(Error::Shape(
            "slope needs distinct positive abscissae and nonzero ordinates".into(),
        ));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SeriesConfig {
        SeriesConfig::default()
    }

    #[test]
    fn zero_rate_has_no_defect() {
        assert_eq!(defect(&MLParams::new(0.5, 0.0), 1.0, 2.0, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn exponential_law() {
        let d = defect(&MLParams::new(1.0, -1.0), 1.0, 1.0, &cfg()).unwrap();
        assert!(d.abs() <= 1e-12, "{d}");
    }

    #[test]
    fn grid_spec_endpoints_are_exact() {
        let v = GridSpec::default().values().unwrap();
        assert_eq!(v.len(), 8);
        assert_eq!(v[0], 0.25);
        assert_eq!(v[7], 2.0);
        assert!((v[3] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_rejects_unsorted_axes() {
        let r = defect_grid(&MLParams::new(0.5, 1.0), &[1.0, 0.5], &[0.0], &cfg());
        assert!(matches!(r, Err(Error::Shape(_))));
        let r = defect_grid(&MLParams::new(0.5, 1.0), &[-1.0], &[0.0], &cfg());
        assert!(matches!(r, Err(Error::Domain { param: "t", .. })));
    }

    #[test]
    fn grid_errors_carry_the_cell() {
        // (t + s)^α pushes λ(t+s)^α past the evaluation cap only in the last cell.
        let r = defect_grid(&MLParams::new(1.0, 1.0), &[1.0, 30.0], &[1.0, 30.0], &cfg());
        match r {
            Err(Error::GridCell { i: 1, j: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn inconclusive_band() {
        assert_eq!(classify_sup(1e-10, 1e-9, 1e-3).unwrap(), Verdict::Holds);
        assert_eq!(classify_sup(1e-3, 1e-9, 1e-3).unwrap(), Verdict::Fails);
        assert!(matches!(
            classify_sup(1e-5, 1e-9, 1e-3),
            Err(Error::Inconclusive { .. })
        ));
        let p = MLParams::new(1.0, 3.0);
        assert!(matches!(
            classify_semigroup(&p, &GridSpec::default(), 1e-3, 1e-9, &cfg()),
            Err(Error::Domain { param: "threshold", .. })
        ));
    }

    #[test]
    fn extension_of_exponential() {
        let f = |t: f64| Ok((2.0 * t).exp());
        let v = extend_multiplicative(&f, 3, -1.0).unwrap();
        assert!((v - (-2.0f64).exp()).abs() < 1e-15);
        let a = extend_multiplicative(&f, 5, -1.0).unwrap();
        let b = extend_multiplicative(&f, 2, -1.0).unwrap();
        assert!((a - b).abs() <= 1e-12);
        assert!(matches!(
            extend_multiplicative(&f, 2, -2.5),
            Err(Error::Domain { param: "tau", .. })
        ));
        assert!(matches!(
            extend_multiplicative(&f, 0, 1.0),
            Err(Error::Domain { param: "n", .. })
        ));
        let negative = |t: f64| Ok(-t);
        assert!(matches!(
            extend_multiplicative(&negative, 1, 0.0),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn fits_of_exact_exponentials() {
        let fit = exponential_fit(&|t: f64| Ok((-3.0 * t).exp()), 5.0, 101).unwrap();
        assert!((fit.omega + 3.0).abs() < 1e-15);
        assert!(fit.residual <= 1e-12);
        let fit = exponential_fit(&|_t: f64| Ok(1.0), 5.0, 11).unwrap();
        assert_eq!(fit.omega, 0.0);
        assert_eq!(fit.residual, 0.0);
        assert!(exponential_fit(&|t: f64| Ok(1.0 - t), 5.0, 11).is_err());
    }

    #[test]
    fn zero_rate_trace_vanishes() {
        let p = MLParams::new(0.5, 3.0);
        assert_eq!(proof_trace_lambda(&p, 0.0, 0.7, &cfg()).unwrap(), 0.0);
    }

    #[test]
    fn slope_of_power_law() {
        let pts: Vec<_> = (0..5)
            .map(|k| {
                let t = 10f64.powi(-k);
                (t, 3.0 * t.powf(0.7))
            })
            .collect();
        assert!((loglog_slope(&pts).unwrap() - 0.7).abs() < 1e-12);
    }
}
