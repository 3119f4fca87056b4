//! Fixtures shared by the kernel benchmarks.

use glt_core::matrix::DenseMatrix;

/// Symmetric tridiagonal 1-D Laplacian of size `n`.
pub fn laplacian_tridiag(n: usize) -> (Vec<f64>, Vec<f64>) {
    (vec![2.0; n], vec![-1.0; n.saturating_sub(1)])
}

/// Deterministic nonsymmetric test matrix with a real spectrum: upper
/// triangular part perturbed just below the diagonal.
pub fn nonsymmetric(n: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, |i, j| {
        if i == j {
            1.0 + i as f64
        } else if j > i {
            1.0 / (1 + j - i) as f64
        } else if i == j + 1 {
            1e-3
        } else {
            0.0
        }
    })
}
