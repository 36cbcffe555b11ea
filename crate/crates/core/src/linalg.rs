//! Small dense complex linear systems.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Condition-number threshold above which a system is declared singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Row-major complex matrix as nested vectors.
pub type CMat = Vec<Vec<Complex64>>;

fn to_dmatrix(a: &CMat) -> DMatrix<Complex64> {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| a[i][j])
}

fn norm1(a: &DMatrix<Complex64>) -> f64 {
    (0..a.ncols()).map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// Inverse of a square matrix by partially pivoted LU, with a 1-norm
/// condition check against [`CONDITION_LIMIT`].
pub fn inverse(a: &CMat) -> Result<CMat> {
    let m = to_dmatrix(a);
    let n = m.nrows();
    let inv = m.clone().lu().try_inverse().ok_or(Error::SingularPeriodMatrix(f64::INFINITY))?;
    let cond = norm1(&m) * norm1(&inv);
    if !cond.is_finite() || cond > CONDITION_LIMIT {
        return Err(Error::SingularPeriodMatrix(cond));
    }
    Ok((0..n).map(|i| (0..n).map(|j| inv[(i, j)]).collect()).collect())
}

/// Solves `a·x = b`.
pub fn solve(a: &CMat, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let inv = inverse(a)?;
    Ok(mat_vec(&inv, b))
}

/// Determinant by LU.
pub fn det(a: &CMat) -> Complex64 {
    to_dmatrix(a).lu().determinant()
}

/// Matrix–vector product.
pub fn mat_vec(a: &CMat, x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

/// Transpose.
pub fn transpose(a: &CMat) -> CMat {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    (0..m).map(|j| (0..n).map(|i| a[i][j]).collect()).collect()
}

/// Smallest eigenvalue of a real symmetric matrix.
pub fn min_symmetric_eigenvalue(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let m = DMatrix::from_fn(n, n, |i, j| 0.5 * (a[i][j] + a[j][i]));
    m.symmetric_eigen().eigenvalues.iter().copied().fold(f64::INFINITY, f64::min)
}

/// Solves a real system `a·x = b`.
pub fn solve_real(a: &[Vec<f64>], b: &[f64]) -> Result<Vec<f64>> {
    let ca: CMat = a.iter().map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect()).collect();
    let cb: Vec<Complex64> = b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    Ok(solve(&ca, &cb)?.iter().map(|z| z.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn solves_complex_system() {
        let a = vec![vec![c(2.0, 1.0), c(0.0, -1.0)], vec![c(1.0, 0.0), c(3.0, 0.5)]];
        let x = vec![c(1.0, -2.0), c(0.5, 0.25)];
        let b = mat_vec(&a, &x);
        let y = solve(&a, &b).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).norm() < 1e-14);
        }
    }

    #[test]
    fn flags_singular() {
        let a = vec![vec![c(1.0, 0.0), c(2.0, 0.0)], vec![c(2.0, 0.0), c(4.0, 0.0)]];
        assert!(matches!(inverse(&a), Err(Error::SingularPeriodMatrix(_))));
    }

    #[test]
    fn eigen_min() {
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        assert!((min_symmetric_eigenvalue(&a) - 1.0).abs() < 1e-14);
    }
}
