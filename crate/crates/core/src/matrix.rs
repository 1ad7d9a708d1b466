//! `E_α(At^α)` for real diagonalizable `A = P·diag(λⱼ)·P⁻¹`, evaluated as
//! `P·diag(E_α(λⱼt^α))·P⁻¹`.

use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};
use crate::mlf::{ml_at_time_certified, MLParams, SeriesConfig};
use crate::semigroup::GridSpec;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    order: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(order: usize) -> Self {
        Self {
            order,
            data: vec![0.0; order * order],
        }
    }

    pub fn identity(order: usize) -> Self {
        let mut m = Self::zeros(order);
        for i in 0..order {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::Shape("matrix has no rows".into()));
        }
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != order) {
            return Err(Error::Shape(format!(
                "matrix is not square: row {i} has {} entries, expected {order}",
                r.len()
            )));
        }
        Ok(Self {
            order,
            data: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.order)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.order);
        for i in 0..self.order {
            for j in 0..self.order {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    /// max |aᵢⱼ|
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        (self - other).max_abs()
    }

    fn off_diagonal_norm(&self) -> f64 {
        let mut sum = 0.0;
        for i in 0..self.order {
            for j in 0..self.order {
                if i != j {
                    sum += self[(i, j)].powi(2);
                }
            }
        }
        sum.sqrt()
    }

    fn frobenius(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.order;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r, &s| a[(r, col)].abs().total_cmp(&a[(s, col)].abs()))
                .expect("non-empty range");
            let pv = a[(pivot, col)];
            if pv.abs() <= 1e-14 * scale {
                return Err(Error::Degenerate {
                    what: "pivot",
                    value: pv,
                });
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            for j in 0..n {
                a[(col, j)] /= pv;
                inv[(col, j)] /= pv;
            }
            for r in 0..n {
                if r != col {
                    let f = a[(r, col)];
                    if f != 0.0 {
                        for j in 0..n {
                            a[(r, j)] -= f * a[(col, j)];
                            inv[(r, j)] -= f * inv[(col, j)];
                        }
                    }
                }
            }
        }
        Ok(inv)
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.order + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.order + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        let n = self.order;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.order, rhs.order, "matrix orders differ");
        Matrix {
            order: self.order,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            writeln!(f, "{}", cells.join(","))?;
        }
        Ok(())
    }
}

/// Eigenvalues with a diagonalizing basis: `A = P·diag(λ)·P⁻¹`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    basis: Matrix,
    basis_inverse: Matrix,
}

const BASIS_TOL: f64 = 1e-10;
const RECONSTRUCTION_TOL: f64 = 1e-8;

impl Spectrum {
    /// Checks `‖P·P⁻¹ − I‖_max ≤ 1e-10`.
    pub fn new(eigenvalues: Vec<f64>, basis: Matrix, basis_inverse: Matrix) -> Result<Self> {
        let n = eigenvalues.len();
        if basis.order() != n || basis_inverse.order() != n {
            return Err(Error::Shape(format!(
                "spectrum of order {n} needs {n}x{n} bases, got {} and {}",
                basis.order(),
                basis_inverse.order()
            )));
        }
        let gap = (&basis * &basis_inverse).max_abs_diff(&Matrix::identity(n));
        if gap > BASIS_TOL {
            return Err(Error::Shape(format!(
                "basis times inverse is {gap:e} away from identity"
            )));
        }
        Ok(Self {
            eigenvalues,
            basis,
            basis_inverse,
        })
    }

    /// Spectrum of a general diagonalizable matrix from its eigenvalues and
    /// eigenvector columns; the inverse basis is computed.
    pub fn from_eigenpairs(eigenvalues: Vec<f64>, basis: Matrix) -> Result<Self> {
        let inverse = basis.inverse()?;
        Self::new(eigenvalues, basis, inverse)
    }

    pub fn order(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_inverse(&self) -> &Matrix {
        &self.basis_inverse
    }

    /// `P·diag(g(λⱼ))·P⁻¹`.
    pub fn apply(&self, values: &[f64]) -> Matrix {
        let n = self.order();
        let mut scaled = self.basis.clone();
        for i in 0..n {
            for j in 0..n {
                scaled[(i, j)] *= values[j];
            }
        }
        &scaled * &self.basis_inverse
    }

    pub fn reconstruct(&self) -> Matrix {
        self.apply(&self.eigenvalues)
    }

    /// Checks `‖P·diag(λ)·P⁻¹ − A‖_max ≤ 1e-8`.
    pub fn check_reconstruction(&self, source: &Matrix) -> Result<()> {
        let gap = self.reconstruct().max_abs_diff(source);
        if gap > RECONSTRUCTION_TOL {
            return Err(Error::Shape(format!(
                "spectrum reconstructs the matrix only to {gap:e}"
            )));
        }
        Ok(())
    }
}

const SYMMETRY_TOL: f64 = 1e-12;
const JACOBI_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues come back in the order the diagonal settles (unsorted);
/// the basis is orthogonal and its inverse is its transpose. Sweeps stop once
/// the off-diagonal Frobenius mass is at most 1e-12·max(‖A‖_F, 1).
pub fn eig_symmetric(a: &Matrix) -> Result<Spectrum> {
    let n = a.order();
    for i in 0..n {
        for j in (i + 1)..n {
            let gap = (a[(i, j)] - a[(j, i)]).abs();
            if gap > SYMMETRY_TOL {
                return Err(Error::NotSymmetric { i, j, gap });
            }
        }
    }
    let mut d = a.clone();
    // Symmetrise exactly so rotations see one value per pair.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = 0.5 * (d[(i, j)] + d[(j, i)]);
            d[(i, j)] = m;
            d[(j, i)] = m;
        }
    }
    let mut v = Matrix::identity(n);
    let target = JACOBI_TOL * a.frobenius().max(1.0);

    let mut sweeps = 0;
    while d.off_diagonal_norm() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::JacobiNoConvergence {
                sweeps,
                off_diagonal: d.off_diagonal_norm(),
            });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = d[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (d[(q, q)] - d[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut d, &mut v, p, q, c, s);
            }
        }
        sweeps += 1;
    }

    let eigenvalues = (0..n).map(|i| d[(i, i)]).collect();
    let basis_inverse = v.transpose();
    Spectrum::new(eigenvalues, v, basis_inverse)
}

/// Applies the rotation J(p, q, θ) as D ← JᵀDJ and V ← VJ.
fn rotate(d: &mut Matrix, v: &mut Matrix, p: usize, q: usize, c: f64, s: f64) {
    let n = d.order();
    for k in 0..n {
        let dkp = d[(k, p)];
        let dkq = d[(k, q)];
        d[(k, p)] = c * dkp - s * dkq;
        d[(k, q)] = s * dkp + c * dkq;
    }
    for k in 0..n {
        let dpk = d[(p, k)];
        let dqk = d[(q, k)];
        d[(p, k)] = c * dpk - s * dqk;
        d[(q, k)] = s * dpk + c * dqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

/// `E_α(At^α) = P·diag(E_α(λⱼt^α))·P⁻¹`; the identity at t = 0.
pub fn ml_matrix(alpha: f64, spec: &Spectrum, t: f64, cfg: &SeriesConfig) -> Result<Matrix> {
    if t == 0.0 {
        MLParams::new(alpha, 0.0).validate()?;
        return Ok(Matrix::identity(spec.order()));
    }
    let values = spec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(index, &eigenvalue)| {
            ml_at_time_certified(&MLParams::new(alpha, eigenvalue), t, cfg).map_err(|e| Error::Eigenvalue {
                index,
                eigenvalue,
                source: Box::new(e),
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(spec.apply(&values))
}

/// ‖E_α(A(t+s)^α) − E_α(At^α)·E_α(As^α)‖_max
pub fn matrix_defect(alpha: f64, spec: &Spectrum, t: f64, s: f64, cfg: &SeriesConfig) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(crate::error::domain("s", s, "must be nonnegative"));
    }
    let joint = ml_matrix(alpha, spec, t + s, cfg)?;
    let left = ml_matrix(alpha, spec, t, cfg)?;
    let right = ml_matrix(alpha, spec, s, cfg)?;
    Ok(joint.max_abs_diff(&(&left * &right)))
}

/// Largest [`matrix_defect`] over `grid × grid`.
pub fn matrix_defect_sup(alpha: f64, spec: &Spectrum, grid: &GridSpec, cfg: &SeriesConfig) -> Result<f64> {
    let values = grid.values()?;
    let mut sup = 0.0f64;
    for (i, &t) in values.iter().enumerate() {
        for (j, &s) in values.iter().enumerate() {
            let d = matrix_defect(alpha, spec, t, s, cfg).map_err(|e| Error::GridCell {
                i,
                j,
                t,
                s,
                source: Box::new(e),
            })?;
            sup = sup.max(d);
        }
    }
    Ok(sup)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn swap() -> Matrix {
        Matrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap()
    }

    #[test]
    fn diagonal_input_keeps_identity_basis() {
        let s = eig_symmetric(&Matrix::diagonal(&[2.0, -1.0])).unwrap();
        assert_eq!(s.eigenvalues(), &[2.0, -1.0]);
        assert_eq!(s.basis(), &Matrix::identity(2));
    }

    #[test]
    fn swap_matrix_eigenvalues() {
        let s = eig_symmetric(&swap()).unwrap();
        let mut ev = s.eigenvalues().to_vec();
        ev.sort_by(f64::total_cmp);
        assert!((ev[0] + 1.0).abs() < 1e-14 && (ev[1] - 1.0).abs() < 1e-14);
        s.check_reconstruction(&swap()).unwrap();
    }

    #[test]
    fn zero_matrix() {
        let s = eig_symmetric(&Matrix::zeros(3)).unwrap();
        assert_eq!(s.eigenvalues(), &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn rejects_asymmetric_input() {
        let a = Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(eig_symmetric(&a), Err(Error::NotSymmetric { i: 0, j: 1, .. })));
    }

    #[test]
    fn rejects_ragged_rows() {
        assert!(matches!(
            Matrix::from_rows(&[vec![1.0, 2.0], vec![0.0]]),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn dense_symmetric_reconstructs() {
        let a = Matrix::from_rows(&[
            vec![4.0, 1.0, -2.0, 0.5],
            vec![1.0, 3.0, 0.0, 1.0],
            vec![-2.0, 0.0, -1.0, 2.0],
            vec![0.5, 1.0, 2.0, 0.0],
        ])
        .unwrap();
        let s = eig_symmetric(&a).unwrap();
        s.check_reconstruction(&a).unwrap();
        let orth = (s.basis() * s.basis_inverse()).max_abs_diff(&Matrix::identity(4));
        assert!(orth < 1e-13);
    }

    #[test]
    fn inverse_of_general_basis() {
        let p = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 2.0]]).unwrap();
        let s = Spectrum::from_eigenpairs(vec![1.0, 3.0], p.clone()).unwrap();
        // A = P diag(1, 3) P⁻¹ = [[1, 1], [0, 3]]
        let a = Matrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 3.0]]).unwrap();
        s.check_reconstruction(&a).unwrap();
        let singular = Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(matches!(singular.inverse(), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn identity_at_time_zero() {
        let s = eig_symmetric(&swap()).unwrap();
        let m = ml_matrix(0.5, &s, 0.0, &SeriesConfig::default()).unwrap();
        assert_eq!(m, Matrix::identity(2));
    }

    #[test]
    fn hyperbolic_exponential() {
        let s = eig_symmetric(&swap()).unwrap();
        let m = ml_matrix(1.0, &s, 1.0, &SeriesConfig::default()).unwrap();
        let want = Matrix::from_rows(&[vec![1f64.cosh(), 1f64.sinh()], vec![1f64.sinh(), 1f64.cosh()]]).unwrap();
        assert!(m.max_abs_diff(&want) < 1e-13);
    }

    #[test]
    fn eigenvalue_errors_are_indexed() {
        let s = eig_symmetric(&Matrix::diagonal(&[1.0, 80.0])).unwrap();
        match ml_matrix(1.0, &s, 1.0, &SeriesConfig::default()) {
            Err(Error::Eigenvalue { index: 1, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
    }
}
