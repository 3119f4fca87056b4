//! Reference experiments on the Euler–Cauchy family and the hypercube
//! Laplacian: single cells, full tables and figure series.

mod config;
mod figures;
mod output;
mod tables;

pub use config::{ExperimentConfig, GridKind, Reference, Scheme};
pub use figures::{figure_defaults, run_figure_data, FIGURE_IDS};
pub use output::{fmt_num, TableOutput};
pub use tables::{run_table, table_defaults, TABLE_IDS};

use serde::Serialize;

use crate::eigen::{eig_banded, eig_dense_sym, eig_sym_tridiag, EigenResult, Method};
use crate::error::Result;
use crate::fd::assemble_fd;
use crate::iga::assemble_iga;
use crate::matrix::BandedMatrix;
use crate::metrics::{
    asymptotic_error, detect_outliers, local_and_max_errors, local_and_max_errors_excluding_outliers,
    max_error_dropping_top, saturation_constant, weyl_law_euler_cauchy, SpectrumReport, ASYMPTOTIC_GRID,
};
use crate::problem::{make_uniform_grid, map_grid, EulerCauchyCase, GridMap};
use crate::symbol::{euler_cauchy_phi, invert_phi, sample_rearranged, symbol_fd, symbol_iga, SymbolFunction};

/// Relative asymmetry below which an assembled matrix counts as symmetric
/// (uniform-grid stencils are symmetric up to rounding in node differences).
pub const SYMMETRY_TOL: f64 = 1e-10;

pub fn grid_map(case: &EulerCauchyCase, kind: GridKind) -> GridMap {
    match kind {
        GridKind::Uniform => GridMap::identity(case.a(), case.b()),
        GridKind::Liouville => case.liouville_map(),
    }
}

pub fn fd_matrix(alpha: f64, n: usize, eta: usize, kind: GridKind) -> Result<BandedMatrix> {
    let case = EulerCauchyCase::new(alpha)?;
    let grid = map_grid(&make_uniform_grid(case.a(), case.b(), n, eta)?, &grid_map(&case, kind))?;
    assemble_fd(&case.spec(), &grid, eta)
}

/// Eigenvalues of a banded matrix, treating rounding-level asymmetry as
/// symmetric. Sign-symmetric tridiagonal input is symmetrized by a diagonal
/// similarity; other nonsymmetric input goes through the general solver.
pub fn banded_eigenvalues(m: &BandedMatrix) -> Result<EigenResult> {
    let n = m.dim();
    if m.effective_bandwidth() <= 1 && !m.is_symmetric(0.0) {
        // a tridiagonal matrix with positive off-diagonal products is
        // diagonally similar to a symmetric one
        let prods: Vec<f64> = (0..n.saturating_sub(1))
            .map(|i| m.get(i, i + 1) * m.get(i + 1, i))
            .collect();
        if prods.iter().all(|&p| p > 0.0) {
            let d: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
            let e: Vec<f64> = prods.iter().map(|p| p.sqrt()).collect();
            return eig_sym_tridiag(&d, &e);
        }
    }
    if m.is_symmetric(0.0) || !m.is_symmetric(SYMMETRY_TOL) {
        return eig_banded(m);
    }
    if m.effective_bandwidth() <= 1 {
        let d: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
        let e: Vec<f64> = (0..n.saturating_sub(1))
            .map(|i| 0.5 * (m.get(i, i + 1) + m.get(i + 1, i)))
            .collect();
        return eig_sym_tridiag(&d, &e);
    }
    let mut dense = m.to_dense();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (dense[(i, j)] + dense[(j, i)]);
            dense[(i, j)] = v;
            dense[(j, i)] = v;
        }
    }
    eig_dense_sym(&dense)
}

pub fn fd_eigenvalues(alpha: f64, n: usize, eta: usize, kind: GridKind) -> Result<EigenResult> {
    banded_eigenvalues(&fd_matrix(alpha, n, eta, kind)?)
}

pub fn iga_eigenvalues(alpha: f64, n: usize, eta: usize, kind: GridKind) -> Result<EigenResult> {
    let case = EulerCauchyCase::new(alpha)?;
    assemble_iga(&case.spec(), &grid_map(&case, kind), eta, n)?.eigenvalues()
}

pub fn scheme_symbol(scheme: Scheme, alpha: f64, eta: usize, kind: GridKind) -> Result<SymbolFunction> {
    let case = EulerCauchyCase::new(alpha)?;
    let map = grid_map(&case, kind);
    match scheme {
        Scheme::Fd => symbol_fd(&case.spec(), &map, eta),
        Scheme::Iga => symbol_iga(&case.spec(), &map, eta),
    }
}

pub fn exact_report(alpha: f64, count: usize) -> Result<SpectrumReport> {
    let case = EulerCauchyCase::new(alpha)?;
    Ok(SpectrumReport::new(
        (1..=count).map(|k| case.exact_eigenvalue(k)).collect(),
    ))
}

/// Smallest eigenvalues of the 3-point uniform discretization at `n_fine`,
/// the surrogate reference spectrum.
pub fn fine_mesh_reference(alpha: f64, n_fine: usize) -> Result<Vec<f64>> {
    Ok(fd_eigenvalues(alpha, n_fine, 1, GridKind::Uniform)?.values)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SaturationCell {
    pub alpha: f64,
    pub k: usize,
    pub n: usize,
    pub c: f64,
    pub omega_star: f64,
    pub reference: f64,
    pub analytic_error: f64,
    /// `|ãerr_k / c_{α,k} - 1|`.
    pub ratio: f64,
    pub provenance: &'static str,
    pub phi_fallback: bool,
}

/// One Table 1 cell. `reference` is `λ_k` of the exact or fine-mesh spectrum.
pub fn saturation_cell(
    alpha: f64,
    k: usize,
    n: usize,
    reference: f64,
    provenance: &'static str,
) -> Result<SaturationCell> {
    let phi = euler_cauchy_phi(alpha)?;
    let dist = phi.distribution();
    let x = k as f64 / (n + 1) as f64;
    let omega_star = invert_phi(&dist, x, (0.0, phi.sup))?;
    let m = (n + 1) as f64;
    let analytic_error = (m * m * omega_star / reference - 1.0).abs();
    let c = saturation_constant(alpha, k);
    Ok(SaturationCell {
        alpha,
        k,
        n,
        c,
        omega_star,
        reference,
        analytic_error,
        ratio: (analytic_error / c - 1.0).abs(),
        provenance,
        phi_fallback: phi.fallback,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaxErrorCell {
    pub alpha: f64,
    pub n: usize,
    pub e_n: f64,
    pub kbar: usize,
    pub kbar_ratio: f64,
    /// Symbol-ratio error on the grid `k/(n+1)`.
    pub e_asym: f64,
    pub x_bar: f64,
    /// `|E_n / e_asym - 1|`.
    pub discrepancy: f64,
    /// Symbol-ratio error on the fixed fine grid.
    pub e_asym_fine: f64,
    pub x_bar_fine: f64,
    pub phi_fallback: bool,
}

/// One Table 2 cell: 3-point uniform FD against the exact spectrum, and the
/// symbol-ratio error of the analytic rearrangement.
pub fn max_error_cell(alpha: f64, n: usize) -> Result<MaxErrorCell> {
    let eig = fd_eigenvalues(alpha, n, 1, GridKind::Uniform)?;
    let rep = local_and_max_errors(&SpectrumReport::from_eigen(&eig), &exact_report(alpha, n)?)?;
    let phi = euler_cauchy_phi(alpha)?;
    let q = phi.rearrangement();
    let law = weyl_law_euler_cauchy();
    let (e_asym, x_bar) = asymptotic_error(&q, &law, n);
    let (e_asym_fine, x_bar_fine) = asymptotic_error(&q, &law, ASYMPTOTIC_GRID);
    Ok(MaxErrorCell {
        alpha,
        n,
        e_n: rep.max_error,
        kbar: rep.argmax,
        kbar_ratio: rep.argmax_ratio,
        e_asym,
        x_bar,
        discrepancy: (rep.max_error / e_asym - 1.0).abs(),
        e_asym_fine,
        x_bar_fine,
        phi_fallback: phi.fallback,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeCell {
    pub scheme: Scheme,
    pub alpha: f64,
    pub eta: usize,
    pub n: usize,
    pub grid: GridKind,
    /// Over every eigenvalue.
    pub e_all: f64,
    pub kbar_ratio: f64,
    /// Over eigenvalues inside the essential range of the symbol.
    pub e_threshold: f64,
    pub outliers: usize,
    /// After dropping the `η - 1` largest eigenvalues.
    pub e_drop_fixed: f64,
    pub symbol_sup: f64,
    pub max_imag: f64,
    pub flagged: bool,
    pub method: Method,
}

/// Table 3/4 cell on the Euler–Cauchy problem against the exact spectrum.
pub fn scheme_cell(scheme: Scheme, alpha: f64, eta: usize, n: usize, grid: GridKind) -> Result<SchemeCell> {
    let eig = match scheme {
        Scheme::Fd => fd_eigenvalues(alpha, n, eta, grid)?,
        Scheme::Iga => iga_eigenvalues(alpha, n, eta, grid)?,
    };
    let exact = exact_report(alpha, n)?;
    let raw = SpectrumReport::from_eigen(&eig);
    let symbol = scheme_symbol(scheme, alpha, eta, grid)?;
    let flags = detect_outliers(&raw.weighted(n, 2.0), &symbol);
    let flagged = raw.clone().with_outliers(flags);
    let all = local_and_max_errors(&raw, &exact)?;
    let thr = local_and_max_errors_excluding_outliers(&flagged, &exact)?;
    let fixed = max_error_dropping_top(&raw, &exact, eta - 1)?;
    Ok(SchemeCell {
        scheme,
        alpha,
        eta,
        n,
        grid,
        e_all: all.max_error,
        kbar_ratio: all.argmax_ratio,
        e_threshold: thr.max_error,
        outliers: flagged.outlier_count(),
        e_drop_fixed: fixed.max_error,
        symbol_sup: symbol.sup(),
        max_imag: eig.max_imag,
        flagged: eig.flagged,
        method: eig.method,
    })
}

/// `ω*(k/(n+1))` of the analytic Euler–Cauchy rearrangement.
pub fn analytic_samples(alpha: f64, n: usize) -> Result<Vec<f64>> {
    Ok(sample_rearranged(&euler_cauchy_phi(alpha)?.rearrangement(), n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetrized_tridiagonal_matches_general_qr() {
        let m = fd_matrix(1.0, 120, 1, GridKind::Liouville).unwrap();
        let fast = banded_eigenvalues(&m).unwrap();
        assert_eq!(fast.method, Method::SymTridiagQl);
        let slow = eig_banded(&m).unwrap();
        assert_eq!(slow.method, Method::DenseGeneralQr);
        for (a, b) in fast.values.iter().zip(&slow.values) {
            assert!((a / b - 1.0).abs() < 1e-11, "{a} {b}");
        }
    }

    #[test]
    fn rounding_asymmetry_uses_symmetric_path() {
        let m = fd_matrix(1.0, 300, 6, GridKind::Uniform).unwrap();
        assert!(m.is_symmetric(SYMMETRY_TOL));
        assert_eq!(banded_eigenvalues(&m).unwrap().method, Method::DenseSymmetric);
    }
}
