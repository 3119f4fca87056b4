//! Eigenvalue solvers. Only eigenvalues are computed.

mod dense_sym;
mod general;
mod generalized;
mod tridiag;

pub use dense_sym::{eig_dense_sym, tridiagonalize};
pub use general::{eig_dense_general, DENSE_CEILING};
pub use generalized::{cholesky, eig_gen_sym};
pub use tridiag::eig_sym_tridiag;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BandedMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    SymTridiagQl,
    DenseSymmetric,
    DenseGeneralQr,
    GeneralizedCholesky,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenResult {
    /// Ascending (real parts for the general solver).
    pub values: Vec<f64>,
    /// Largest `|Im λ|` seen before discarding imaginary parts.
    pub max_imag: f64,
    pub method: Method,
    /// Set when `max_imag > 1e-8 · max(1, spectral radius)`.
    pub flagged: bool,
}

impl EigenResult {
    pub(crate) fn real(mut values: Vec<f64>, method: Method) -> Self {
        values.sort_by(f64::total_cmp);
        EigenResult {
            values,
            max_imag: 0.0,
            method,
            flagged: false,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn imag_limit(&self) -> f64 {
        1e-8 * self.spectral_radius().max(1.0)
    }

    /// Turn a flagged result into an error.
    pub fn ensure_real(self) -> Result<Self> {
        if self.flagged {
            Err(Error::ExcessiveImaginary {
                max_imag: self.max_imag,
                limit: self.imag_limit(),
            })
        } else {
            Ok(self)
        }
    }
}

/// Pick a solver from the structure of `m`: tridiagonal QL for symmetric
/// tridiagonal input, dense symmetric for other symmetric input, dense
/// general QR otherwise.
pub fn eig_banded(m: &BandedMatrix) -> Result<EigenResult> {
    let n = m.dim();
    let bw = m.effective_bandwidth();
    if m.is_symmetric(0.0) {
        if bw <= 1 {
            let d: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
            let e: Vec<f64> = (0..n.saturating_sub(1)).map(|i| m.get(i, i + 1)).collect();
            return eig_sym_tridiag(&d, &e);
        }
        return eig_dense_sym(&m.to_dense());
    }
    eig_dense_general(&m.to_dense())
}

pub(crate) fn hypot(a: f64, b: f64) -> f64 {
    a.hypot(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;

    #[test]
    fn dispatch_picks_methods() {
        let mut t = BandedMatrix::zeros(5, 2);
        for i in 0..5 {
            t.set(i, i, 2.0);
            if i > 0 {
                t.set(i, i - 1, -1.0);
                t.set(i - 1, i, -1.0);
            }
        }
        assert_eq!(eig_banded(&t).unwrap().method, Method::SymTridiagQl);
        t.set(0, 2, 0.1);
        t.set(2, 0, 0.1);
        assert_eq!(eig_banded(&t).unwrap().method, Method::DenseSymmetric);
        t.set(0, 2, 0.3);
        assert_eq!(eig_banded(&t).unwrap().method, Method::DenseGeneralQr);
    }

    #[test]
    fn rotation_is_flagged() {
        let m = DenseMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let r = eig_dense_general(&m).unwrap();
        assert!(r.flagged);
        assert!((r.max_imag - 1.0).abs() < 1e-14);
        assert!(r.ensure_real().is_err());
    }
}
