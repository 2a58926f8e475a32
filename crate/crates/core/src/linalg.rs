//! Eigenvalue certificates for real symmetric and complex Hermitian matrices.
//!
//! Matrices are lifted to `f64` and diagonalized with nalgebra's symmetric
//! eigensolver, which also handles the Hermitian case.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex;

use crate::scalar::Scalar;

/// Ascending eigenvalues of a real symmetric matrix given by rows.
pub fn symmetric_eigenvalues<T: Scalar>(rows: &[Vec<T>]) -> Vec<f64> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(n, n, |i, j| rows[i][j].as_f64());
    sorted(SymmetricEigen::new(m).eigenvalues.iter().copied().collect())
}

/// Ascending eigenvalues of a complex Hermitian matrix given by rows.
pub fn hermitian_eigenvalues<T: Scalar>(rows: &[Vec<Complex<T>>]) -> Vec<f64> {
    let n = rows.len();
    if n == 0 {
        return Vec::new();
    }
    let m = DMatrix::from_fn(n, n, |i, j| Complex::new(rows[i][j].re.as_f64(), rows[i][j].im.as_f64()));
    sorted(SymmetricEigen::new(m).eigenvalues.iter().copied().collect())
}

/// Smallest eigenvalue; `+inf` for the empty matrix.
pub fn min_symmetric_eigenvalue<T: Scalar>(rows: &[Vec<T>]) -> f64 {
    symmetric_eigenvalues(rows).first().copied().unwrap_or(f64::INFINITY)
}

pub fn min_hermitian_eigenvalue<T: Scalar>(rows: &[Vec<Complex<T>>]) -> f64 {
    hermitian_eigenvalues(rows).first().copied().unwrap_or(f64::INFINITY)
}

/// Entrywise (Hadamard) product of two equally shaped matrices.
pub fn hadamard<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| *x * *y).collect())
        .collect()
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.total_cmp(b));
    v
}
