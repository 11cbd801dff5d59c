//! Small shared helpers for Hermitian matrices.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// Largest entry of |m - m^dagger|.
pub(crate) fn hermiticity_deviation(m: &DMatrix<Complex64>) -> f64 {
    let mut max = 0.0_f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > max {
                max = dev;
            }
        }
    }
    max
}

/// Real eigenvalues of a Hermitian matrix.
pub(crate) fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect()
}

/// Smallest eigenvalue of a Hermitian matrix.
#[cfg(test)]
pub(crate) fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}
