use super::tridiag::ql_implicit;
use super::{EigenResult, Method};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Reduce a symmetric matrix to tridiagonal form by Householder reflections.
/// Returns `(diagonal, off-diagonal)`; only the lower triangle is read.
pub fn tridiagonalize(m: &DenseMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a = m.clone();
    let mut off = vec![0.0; n.saturating_sub(1)];
    let mut v = vec![0.0; n];
    let mut p = vec![0.0; n];
    for k in 0..n.saturating_sub(2) {
        // reflector for column k below the diagonal
        let alpha_norm = (k + 1..n).map(|i| a[(i, k)] * a[(i, k)]).sum::<f64>().sqrt();
        if alpha_norm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[(k + 1, k)];
        let alpha = -alpha_norm.copysign(x0);
        off[k] = alpha;
        for i in k + 1..n {
            v[i] = a[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i] * v[i]).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // p = β A22 v (symmetric, use full rows of the trailing block)
        for i in k + 1..n {
            let row = a.row(i);
            let mut s = 0.0;
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            p[i] = beta * s;
        }
        let kappa = 0.5 * beta * (k + 1..n).map(|i| v[i] * p[i]).sum::<f64>();
        for i in k + 1..n {
            p[i] -= kappa * v[i];
        }
        for i in k + 1..n {
            let (vi, pi) = (v[i], p[i]);
            let row = a.row_mut(i);
            for j in k + 1..n {
                row[j] -= vi * p[j] + pi * v[j];
            }
        }
    }
    if n >= 2 {
        off[n - 2] = a[(n - 1, n - 2)];
    }
    let diag = (0..n).map(|i| a[(i, i)]).collect();
    (diag, off)
}

/// All eigenvalues of a dense symmetric matrix.
pub fn eig_dense_sym(m: &DenseMatrix) -> Result<EigenResult> {
    let n = m.dim();
    if !m.is_symmetric(1e-12) {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let (mut d, off) = tridiagonalize(m);
    let mut e: Vec<f64> = off.into_iter().chain(std::iter::once(0.0)).collect();
    e.truncate(n);
    ql_implicit(&mut d, &mut e)?;
    Ok(EigenResult::real(d, Method::DenseSymmetric))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pseudo_random(n: usize, seed: u64) -> DenseMatrix {
        // xorshift, deterministic
        let mut s = seed;
        let mut next = || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s % 10_000) as f64 / 5_000.0 - 1.0
        };
        let mut m = DenseMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let v = next();
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        m
    }

    #[test]
    fn matches_nalgebra() {
        for (n, seed) in [(1usize, 3u64), (2, 5), (7, 11), (40, 17)] {
            let m = pseudo_random(n, seed);
            let ours = eig_dense_sym(&m).unwrap().values;
            let na = nalgebra::DMatrix::from_row_slice(n, n, m.as_slice());
            let mut theirs: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(f64::total_cmp);
            for (a, b) in ours.iter().zip(&theirs) {
                assert!((a - b).abs() < 1e-12 * n as f64, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn trace_is_preserved() {
        let m = pseudo_random(25, 99);
        let (d, _) = tridiagonalize(&m);
        let tr: f64 = (0..25).map(|i| m[(i, i)]).sum();
        assert!((d.iter().sum::<f64>() - tr).abs() < 1e-12);
    }

    #[test]
    fn rejects_nonsymmetric() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![0.0, 1.0]]).unwrap();
        assert!(eig_dense_sym(&m).is_err());
    }
}
