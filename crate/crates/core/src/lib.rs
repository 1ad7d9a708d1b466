//! Mittag-Leffler functions E_α(λt^α) and numerical checks of when they obey
//! the semigroup law E(t + s) = E(t)·E(s).
//!
//! - [`mlf`]: Γ, E_α and E_{α,β} on the real line with error estimates.
//! - [`calculus`]: the derivative identity and a Caputo L1 residual check.
//! - [`semigroup`]: defect sweeps, the α = 1 / λ = 0 classification and the
//!   extension / exponential-fit constructions.
//! - [`matrix`]: E_α(At^α) for diagonalizable A through its spectrum.
//! - [`cli`]: the `mlf` command-line front end.

pub mod calculus;
pub mod cli;
pub mod error;
pub mod matrix;
pub mod mlf;
pub mod semigroup;

pub use error::{Error, Result};
pub use mlf::{
    gamma, ln_gamma, ml_at_time, ml_at_time_certified, ml_e, ml_e2, ml_e2_certified, EvalResult, MLParams, Method,
    SeriesConfig,
};
