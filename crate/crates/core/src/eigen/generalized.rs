use super::{eig_dense_sym, EigenResult, Method};
use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;

/// Lower Cholesky factor of a symmetric positive-definite matrix.
pub fn cholesky(m: &DenseMatrix) -> Result<DenseMatrix> {
    let n = m.dim();
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut s = m[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if !(s > 0.0) {
            return Err(Error::NotPositiveDefinite(j));
        }
        let d = s.sqrt();
        l[(j, j)] = d;
        for i in j + 1..n {
            let (li, lj) = (l.row(i), l.row(j));
            let mut s = m[(i, j)];
            for k in 0..j {
                s -= li[k] * lj[k];
            }
            l[(i, j)] = s / d;
        }
    }
    Ok(l)
}

/// Solve `L X = B` in place for every column of `B` (stored row-major).
fn forward_solve_rows(l: &DenseMatrix, b: &mut DenseMatrix) {
    let n = l.dim();
    let data = b.as_mut_slice();
    for i in 0..n {
        let (done, rest) = data.split_at_mut(i * n);
        let row = &mut rest[..n];
        for k in 0..i {
            let lik = l[(i, k)];
            if lik != 0.0 {
                for (t, h) in row.iter_mut().zip(&done[k * n..(k + 1) * n]) {
                    *t -= lik * h;
                }
            }
        }
        let inv = 1.0 / l[(i, i)];
        row.iter_mut().for_each(|v| *v *= inv);
    }
}

/// Eigenvalues of the symmetric-definite pencil `K x = λ M x`, through
/// `M = L Lᵀ` and the standard problem `L⁻¹ K L⁻ᵀ`.
pub fn eig_gen_sym(k: &DenseMatrix, m: &DenseMatrix) -> Result<EigenResult> {
    let n = k.dim();
    if m.dim() != n {
        return Err(Error::DimensionMismatch(n, m.dim()));
    }
    if !k.is_symmetric(1e-12) || !m.is_symmetric(1e-12) {
        return Err(Error::InvalidArgument("pencil matrices must be symmetric".into()));
    }
    let l = cholesky(m)?;
    // Y = L⁻¹ K, then C = L⁻¹ Yᵀ = L⁻¹ K L⁻ᵀ
    let mut y = k.clone();
    forward_solve_rows(&l, &mut y);
    let mut c = DenseMatrix::from_fn(n, |i, j| y[(j, i)]);
    forward_solve_rows(&l, &mut c);
    // restore exact symmetry lost to rounding
    for i in 0..n {
        for j in 0..i {
            let avg = 0.5 * (c[(i, j)] + c[(j, i)]);
            c[(i, j)] = avg;
            c[(j, i)] = avg;
        }
    }
    let mut r = eig_dense_sym(&c)?;
    r.method = Method::GeneralizedCholesky;
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_pencils() {
        let m = DenseMatrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let r = eig_gen_sym(&m, &m).unwrap();
        assert!(r.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
        let k = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 4.0]]).unwrap();
        let mm = DenseMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 2.0]]).unwrap();
        let r = eig_gen_sym(&k, &mm).unwrap();
        assert!((r.values[0] - 1.0).abs() < 1e-15 && (r.values[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn cholesky_reconstructs() {
        let m = DenseMatrix::from_fn(6, |i, j| if i == j { 4.0 } else { 1.0 / (1 + i + j) as f64 });
        let l = cholesky(&m).unwrap();
        for i in 0..6 {
            for j in 0..6 {
                let s: f64 = (0..6).map(|k| l[(i, k)] * l[(j, k)]).sum();
                assert!((s - m[(i, j)]).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn indefinite_mass_rejected() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(matches!(eig_gen_sym(&m, &m), Err(Error::NotPositiveDefinite(1))));
    }
}
