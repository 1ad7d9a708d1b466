use thiserror::Error;

/// Errors raised by evaluation, sweeps and matrix routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{param} = {value} is out of domain: {reason}")]
    Domain {
        param: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{what} overflows double precision (argument {arg})")]
    Overflow { what: &'static str, arg: f64 },

    #[error(
        "E_{{{alpha},{beta}}}({z}) could not be certified: error estimate {error_estimate:e} after {terms_used} terms"
    )]
    NotConverged {
        alpha: f64,
        beta: f64,
        z: f64,
        error_estimate: f64,
        terms_used: usize,
    },

    #[error("grid cell (t[{i}] = {t}, s[{j}] = {s}): {source}")]
    GridCell {
        i: usize,
        j: usize,
        t: f64,
        s: f64,
        source: Box<Error>,
    },

    #[error("eigenvalue {index} ({eigenvalue}): {source}")]
    Eigenvalue {
        index: usize,
        eigenvalue: f64,
        source: Box<Error>,
    },

    #[error("matrix is not symmetric: |a[{i}][{j}] - a[{j}][{i}]| = {gap:e}")]
    NotSymmetric { i: usize, j: usize, gap: f64 },

    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal mass {off_diagonal:e})")]
    JacobiNoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("{0}")]
    Shape(String),

    #[error("{what} is degenerate: |{what}| = {value:e}")]
    Degenerate { what: &'static str, value: f64 },

    #[error("inconclusive: sup |defect| = {sup_abs:e} lies between tol {tol:e} and threshold {threshold:e}")]
    Inconclusive { sup_abs: f64, tol: f64, threshold: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(param: &'static str, value: f64, reason: &'static str) -> Error {
    Error::Domain { param, value, reason }
}
