use std::f64::consts::PI;

use glt_core::eigen::{eig_banded, eig_dense_sym};
use glt_core::experiment::max_error_cell;
use glt_core::fd::{assemble_fd, fd_symbol_f};
use glt_core::iga::{assemble_iga, iga_symbol_f};
use glt_core::multidim::{kron_laplacian_eigs, kron_laplacian_matrix};
use glt_core::problem::{make_uniform_grid, EulerCauchyCase, GridMap, OperatorSpec};
use glt_core::symbol::{euler_cauchy_phi, symbol_fd, DistributionFunction};
use glt_core::Result;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn fd_sampling() -> Result<f64> {
    let n = 200;
    let m = assemble_fd(
        &OperatorSpec::laplacian(0.0, 1.0)?,
        &make_uniform_grid(0.0, 1.0, n, 1)?,
        1,
    )?;
    let e = eig_banded(&m)?;
    let w = ((n + 1) * (n + 1)) as f64;
    Ok((1..=n)
        .map(|k| {
            rel(
                e.values[k - 1] / w,
                4.0 * (k as f64 * PI / (2.0 * (n + 1) as f64)).sin().powi(2),
            )
        })
        .fold(0.0, f64::max))
}

fn iga_dispersion() -> Result<f64> {
    let n = 100;
    let e = assemble_iga(&OperatorSpec::laplacian(0.0, 1.0)?, &GridMap::identity(0.0, 1.0), 1, n)?.eigenvalues()?;
    let w = ((n + 1) * (n + 1)) as f64;
    let mut worst = 0.0f64;
    for k in 1..=n {
        worst = worst.max(rel(
            e.values[k - 1] / w,
            iga_symbol_f(1, k as f64 * PI / (n + 1) as f64)?,
        ));
    }
    Ok(worst)
}

fn small_theta() -> Result<f64> {
    let mut worst = 0.0f64;
    for eta in 1..=10 {
        worst = worst.max(rel(fd_symbol_f(eta, 1e-3)? / 1e-6, 1.0));
        worst = worst.max(rel(iga_symbol_f(eta, 1e-3)? / 1e-6, 1.0));
    }
    Ok(worst)
}

fn kronecker() -> Result<f64> {
    let a = kron_laplacian_eigs(2, 6)?;
    let b = eig_dense_sym(&kron_laplacian_matrix(2, 6)?)?;
    Ok(a.values
        .iter()
        .zip(&b.values)
        .map(|(x, y)| rel(*x, *y))
        .fold(0.0, f64::max))
}

fn phi_check() -> Result<f64> {
    let case = EulerCauchyCase::new(1.0)?;
    let s = symbol_fd(&case.spec(), &GridMap::identity(case.a(), case.b()), 1)?;
    let grid = DistributionFunction::grid_counted(&s, 1000)?;
    let phi = euler_cauchy_phi(1.0)?;
    let mut worst = 0.0f64;
    for i in 1..=20 {
        let t = phi.sup * i as f64 / 21.0;
        worst = worst.max((phi.eval(t)? - grid.eval(t)).abs());
    }
    Ok(worst)
}

fn table2_cell() -> Result<f64> {
    Ok(rel(max_error_cell(1.0, 100)?.discrepancy, 0.0158))
}

/// Runs every check and prints one line each; true when all pass.
pub fn run() -> bool {
    type Check = fn() -> Result<f64>;
    let checks: [(&str, Check, f64); 6] = [
        ("fd 3-point exact sampling, n=200", fd_sampling, 1e-10),
        ("iga degree-1 dispersion, n=100", iga_dispersion, 1e-9),
        ("symbol small-theta consistency, eta<=10", small_theta, 1e-3),
        ("kronecker sum rule, d=2 n=6", kronecker, 1e-10),
        ("distribution function vs grid count, alpha=1", phi_check, 5e-3),
        ("max-error discrepancy, alpha=1 n=100", table2_cell, 0.10),
    ];
    let mut ok = true;
    for (name, f, tol) in checks {
        match f() {
            Ok(v) if v < tol => println!("PASS {name}: {v:.3e} < {tol:e}"),
            Ok(v) => {
                ok = false;
                println!("FAIL {name}: {v:.3e} >= {tol:e}");
            }
            Err(e) => {
                ok = false;
                println!("FAIL {name}: {e}");
            }
        }
    }
    ok
}
