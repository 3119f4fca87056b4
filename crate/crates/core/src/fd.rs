//! Central (2η+1)-point finite differences for `-(p u')'` with Dirichlet ends.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::BandedMatrix;
use crate::problem::{Grid, OperatorSpec};

pub const MAX_ETA: usize = 30;

/// Coefficients `d_{η,0..=η}` of the symbol polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct FdScheme {
    pub eta: usize,
    pub coefficients: Vec<f64>,
}

impl FdScheme {
    pub fn new(eta: usize) -> Result<Self> {
        Ok(FdScheme {
            eta,
            coefficients: fd_coefficients(eta)?,
        })
    }

    /// `f_η(θ) = d_0 + 2 Σ d_k cos kθ`.
    pub fn symbol(&self, theta: f64) -> f64 {
        // d_0 = -2 Σ d_k turns the sum into -4 Σ d_k sin²(kθ/2), which keeps
        // full relative accuracy near θ = 0
        -4.0 * self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, d)| {
                let s = (0.5 * k as f64 * theta).sin();
                d * s * s
            })
            .sum::<f64>()
    }
}

/// `d_k = (-1)^k η!² / ((η-k)!(η+k)!) · 2/k²`, `d_0 = -2 Σ_{k≥1} d_k`.
pub fn fd_coefficients(eta: usize) -> Result<Vec<f64>> {
    if eta == 0 || eta > MAX_ETA {
        return Err(Error::InvalidArgument(format!(
            "eta must lie in 1..={MAX_ETA}, got {eta}"
        )));
    }
    let mut d = vec![0.0; eta + 1];
    // ratio η!²/((η-k)!(η+k)!) built up one factor at a time
    let mut ratio = 1.0;
    for k in 1..=eta {
        ratio *= (eta + 1 - k) as f64 / (eta + k) as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        d[k] = sign * ratio * 2.0 / (k * k) as f64;
    }
    d[0] = -2.0 * d[1..].iter().sum::<f64>();
    Ok(d)
}

pub fn fd_symbol_f(eta: usize, theta: f64) -> Result<f64> {
    Ok(FdScheme::new(eta)?.symbol(theta))
}

/// Assemble `L^{(n,η)}` on the mapped nodes of `grid`.
///
/// Off-diagonal entries follow the Lagrange-derived formula with `p̄` at the
/// midpoint of the two mapped nodes; the diagonal is minus the sum of all
/// off-diagonal stencil entries, ghosts included, and ghost columns are then
/// dropped. A potential `q` is added on the diagonal and a weight `w` divides
/// each row.
pub fn assemble_fd(spec: &OperatorSpec, grid: &Grid, eta: usize) -> Result<BandedMatrix> {
    if eta == 0 || eta > MAX_ETA {
        return Err(Error::InvalidArgument(format!(
            "eta must lie in 1..={MAX_ETA}, got {eta}"
        )));
    }
    if grid.eta < eta {
        return Err(Error::InvalidArgument(format!(
            "grid ghost depth {} < eta {eta}",
            grid.eta
        )));
    }
    let n = grid.n;
    let width = 2 * eta + 1;
    let rows: Vec<Result<Vec<f64>>> = (1..=n as isize)
        .into_par_iter()
        .map(|i| {
            let xs: Vec<f64> = (i - eta as isize..=i + eta as isize).map(|j| grid.mapped(j)).collect();
            let l = stencil_row(spec, &xs, eta).map_err(|(a, b)| {
                let base = grid.pos(i - eta as isize);
                Error::SingularGrid(base + a, base + b)
            })?;
            let mut row = vec![0.0; width];
            let diag: f64 = -l.iter().sum::<f64>();
            for (s, v) in l.iter().enumerate() {
                let col = i - eta as isize + s as isize;
                if s != eta && col >= 1 && col <= n as isize {
                    row[s] = *v;
                }
            }
            let xi = xs[eta];
            row[eta] = diag + spec.q(xi);
            if spec.has_weight() {
                let w = spec.w(xi);
                row.iter_mut().for_each(|v| *v /= w);
            }
            Ok(row)
        })
        .collect();
    let mut data = Vec::with_capacity(n * width);
    for r in rows {
        data.extend(r?);
    }
    BandedMatrix::from_rows(n, eta, data)
}

/// Stencil weights `l_{i,j}` for the centre node `xs[eta]`; slot `eta` is zero.
/// On a coincident pair the two offending local indices are returned.
fn stencil_row(spec: &OperatorSpec, xs: &[f64], eta: usize) -> std::result::Result<Vec<f64>, (usize, usize)> {
    let c = eta;
    let xc = xs[c];
    let len = xs.len();
    let mut l = vec![0.0; len];
    for j in 0..len {
        if j == c {
            continue;
        }
        let mut num = 0.0;
        for m in 0..len {
            if m == c || m == j {
                continue;
            }
            let mut prod = 1.0;
            for k in 0..len {
                if k != c && k != j && k != m {
                    prod *= xs[k] - xc;
                }
            }
            num += prod;
        }
        let mut den = xs[j] - xc;
        if den == 0.0 {
            return Err((c.min(j), c.max(j)));
        }
        for k in 0..len {
            if k != c && k != j {
                let diff = xs[k] - xs[j];
                if diff == 0.0 {
                    return Err((k.min(j), k.max(j)));
                }
                den *= diff;
            }
        }
        l[j] = 2.0 * spec.p_bar(0.5 * (xc + xs[j])) * num / den;
    }
    Ok(l)
}

/// Entrywise multiplication by `(n+1)^{-2}`.
pub fn weight_matrix(matrix: &BandedMatrix, n: usize) -> BandedMatrix {
    let m = (n + 1) as f64;
    matrix.scaled(1.0 / (m * m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigen::eig_sym_tridiag;
    use crate::problem::{make_uniform_grid, map_grid, EulerCauchyCase};
    use std::f64::consts::{E, PI};

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn classical_coefficients() {
        assert!(close(&fd_coefficients(1).unwrap(), &[2.0, -1.0], 1e-15));
        assert!(close(
            &fd_coefficients(2).unwrap(),
            &[2.5, -4.0 / 3.0, 1.0 / 12.0],
            1e-15
        ));
        assert!(close(
            &fd_coefficients(3).unwrap(),
            &[49.0 / 18.0, -1.5, 0.15, -1.0 / 90.0],
            1e-15
        ));
        assert!(fd_coefficients(0).is_err());
        assert!(fd_coefficients(31).is_err());
        let d = fd_coefficients(30).unwrap();
        assert!(d.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn symbol_values() {
        assert!((fd_symbol_f(1, PI).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(fd_symbol_f(1, 0.0).unwrap(), 0.0);
        assert!((fd_symbol_f(2, PI).unwrap() - 16.0 / 3.0).abs() < 1e-14);
        // agrees with the cosine form away from zero
        let s = FdScheme::new(4).unwrap();
        let d = &s.coefficients;
        let th = 1.3;
        let cos_form = d[0] + 2.0 * (1..=4).map(|k| d[k] * (k as f64 * th).cos()).sum::<f64>();
        assert!((s.symbol(th) - cos_form).abs() < 1e-13);
    }

    #[test]
    fn three_point_rows() {
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        let n = 9;
        let g = make_uniform_grid(0.0, 1.0, n, 1).unwrap();
        let m = assemble_fd(&spec, &g, 1).unwrap();
        let h2 = 0.01;
        for i in 0..n {
            assert!((m.get(i, i) * h2 - 2.0).abs() < 1e-12);
            if i + 1 < n {
                assert!((m.get(i, i + 1) * h2 + 1.0).abs() < 1e-12);
                assert!((m.get(i + 1, i) * h2 + 1.0).abs() < 1e-12);
            }
        }
        let w = weight_matrix(&m, n);
        assert!((w.get(3, 3) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_constant_coefficient_is_toeplitz_of_symbol() {
        for eta in 1..=6 {
            let (a, b) = (0.5, 2.0);
            let n = 30;
            let spec = OperatorSpec::laplacian(a, b).unwrap();
            let g = make_uniform_grid(a, b, n, eta).unwrap();
            let w = weight_matrix(&assemble_fd(&spec, &g, eta).unwrap(), n);
            let d = fd_coefficients(eta).unwrap();
            let s = 1.0 / ((b - a) * (b - a));
            for i in 0..n {
                for j in 0..n {
                    let k = i.abs_diff(j);
                    let expect = if k <= eta { s * d[k] } else { 0.0 };
                    assert!((w.get(i, j) - expect).abs() < 1e-9 * d[0], "eta={eta} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn interior_rows_annihilate_constants() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        for eta in [1usize, 3, 7] {
            let g = map_grid(&make_uniform_grid(1.0, E, 60, eta).unwrap(), &c.liouville_map()).unwrap();
            let m = assemble_fd(&c.spec(), &g, eta).unwrap();
            for i in eta..60 - eta {
                let norm: f64 = m.band_row(i).iter().map(|v| v.abs()).sum();
                assert!(m.row_sum(i).abs() < 1e-9 * norm, "eta={eta} row {i}");
            }
            assert!(!m.is_symmetric(1e-6));
        }
    }

    #[test]
    fn euler_cauchy_first_eigenvalue() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        let lam1 = |n: usize| {
            let g = make_uniform_grid(1.0, E, n, 1).unwrap();
            let m = assemble_fd(&c.spec(), &g, 1).unwrap();
            // symmetrize by the diagonal similarity to reuse the tridiagonal solver
            let d: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
            let e: Vec<f64> = (0..n - 1).map(|i| (m.get(i, i + 1) * m.get(i + 1, i)).sqrt()).collect();
            eig_sym_tridiag(&d, &e).unwrap().values[0]
        };
        let exact = PI * PI + 0.25;
        let l100 = lam1(100);
        assert!((l100 / exact - 1.0).abs() < 1e-2);
        // second-order Richardson from n = 100, 200, 400
        let (l200, l400) = (lam1(200), lam1(400));
        let r1 = (4.0 * l200 - l100) / 3.0;
        let r2 = (4.0 * l400 - l200) / 3.0;
        assert!((r2 / exact - 1.0).abs() < (l400 / exact - 1.0).abs());
        assert!((r2 / exact - 1.0).abs() < 1e-5, "{r1} {r2} {exact}");
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        let mut g = make_uniform_grid(0.0, 1.0, 5, 1).unwrap();
        g.mapped_nodes[3] = g.mapped_nodes[2];
        assert!(matches!(assemble_fd(&spec, &g, 1), Err(Error::SingularGrid(..))));
    }
}
