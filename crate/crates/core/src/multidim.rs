//! Dirichlet Laplacian on the unit hypercube: Kronecker-sum finite
//! differences, exact spectra and the Weyl law.

use std::f64::consts::PI;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::metrics::{SpectrumReport, WeylKind, WeylLaw};
use crate::symbol::SymbolFunction;

pub const MAX_KRON_SIZE: usize = 1_000_000;

/// `Γ(m/2)` for a positive integer `m`.
fn gamma_half_integer(m: usize) -> f64 {
    let mut g = if m.is_multiple_of(2) { 1.0 } else { PI.sqrt() };
    let mut x = if m.is_multiple_of(2) { 1.0 } else { 0.5 };
    while x < m as f64 / 2.0 - 1e-12 {
        g *= x;
        x += 1.0;
    }
    g
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma_half_integer(d + 2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiDimCase {
    pub d: usize,
    pub n: usize,
    pub c_d: f64,
}

impl MultiDimCase {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d == 0 || n == 0 {
            return Err(Error::InvalidArgument("d and n must be positive".into()));
        }
        Ok(MultiDimCase {
            d,
            n,
            c_d: unit_ball_volume(d),
        })
    }

    pub fn size(&self) -> Option<usize> {
        self.n.checked_pow(self.d as u32)
    }
}

fn size_checked(d: usize, n: usize) -> Result<usize> {
    match n.checked_pow(d as u32) {
        Some(s) if s <= MAX_KRON_SIZE => Ok(s),
        Some(s) => Err(Error::TooLarge(s, MAX_KRON_SIZE)),
        None => Err(Error::TooLarge(usize::MAX, MAX_KRON_SIZE)),
    }
}

/// Unweighted eigenvalues `(n+1)² Σ_j 4 sin²(k_j π/(2(n+1)))` over all
/// multi-indices, by the sum rule.
pub fn kron_laplacian_eigs(d: usize, n: usize) -> Result<SpectrumReport> {
    if d == 0 || n == 0 {
        return Err(Error::InvalidArgument("d and n must be positive".into()));
    }
    let total = size_checked(d, n)?;
    let m = (n + 1) as f64;
    let one_d: Vec<f64> = (1..=n)
        .map(|k| m * m * 4.0 * (k as f64 * PI / (2.0 * m)).sin().powi(2))
        .collect();
    let inner = total / n;
    let mut values: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|first| {
            let one_d = &one_d;
            (0..inner).map(move |mut rest| {
                let mut s = one_d[first];
                for _ in 1..d {
                    s += one_d[rest % n];
                    rest /= n;
                }
                s
            })
        })
        .collect();
    values.par_sort_unstable_by(f64::total_cmp);
    Ok(SpectrumReport::new(values))
}

/// Explicit Kronecker sum `Σ_j I ⊗ … ⊗ T_n ⊗ … ⊗ I` with
/// `T_n = (n+1)² tridiag(-1, 2, -1)`; small sizes only.
pub fn kron_laplacian_matrix(d: usize, n: usize) -> Result<DenseMatrix> {
    let total = size_checked(d, n)?;
    if total > 4096 {
        return Err(Error::TooLarge(total, 4096));
    }
    let m2 = ((n + 1) * (n + 1)) as f64;
    let mut a = DenseMatrix::zeros(total);
    for idx in 0..total {
        let mut stride = 1;
        for _ in 0..d {
            let kj = (idx / stride) % n;
            a[(idx, idx)] += 2.0 * m2;
            if kj > 0 {
                a[(idx, idx - stride)] -= m2;
            }
            if kj + 1 < n {
                a[(idx, idx + stride)] -= m2;
            }
            stride *= n;
        }
    }
    Ok(a)
}

/// All `π² Σ k_j²` with `1 ≤ k_j ≤ k_max`, ascending.
pub fn exact_laplacian_eigs_ddim(d: usize, k_max: usize) -> Result<Vec<f64>> {
    if d == 0 || k_max == 0 {
        return Err(Error::InvalidArgument("d and k_max must be positive".into()));
    }
    size_checked(d, k_max)?;
    let mut out = Vec::new();
    let mut k = vec![1usize; d];
    loop {
        out.push(PI * PI * k.iter().map(|&v| (v * v) as f64).sum::<f64>());
        let mut j = 0;
        while j < d {
            k[j] += 1;
            if k[j] <= k_max {
                break;
            }
            k[j] = 1;
            j += 1;
        }
        if j == d {
            break;
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// The `count` smallest exact eigenvalues `π² |k|²`, `k ∈ N^d`.
///
/// Enumerates the ball `|k|² ≤ R²`, growing `R` until it holds at least
/// `count` points; anything outside the ball is larger than everything in it.
pub fn exact_laplacian_smallest(d: usize, count: usize) -> Result<Vec<f64>> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let mut radius =
        ((count as f64 / unit_ball_volume(d) * 2f64.powi(d as i32)).powf(1.0 / d as f64)).ceil() as usize + 2;
    loop {
        let r2 = radius * radius;
        let mut pts = Vec::new();
        let mut k = vec![1usize; d];
        'outer: loop {
            let s: usize = k.iter().map(|v| v * v).sum();
            if s <= r2 {
                pts.push(s);
            }
            let mut j = 0;
            loop {
                if j == d {
                    break 'outer;
                }
                k[j] += 1;
                let s: usize = k.iter().map(|v| v * v).sum();
                if s <= r2 {
                    break;
                }
                k[j] = 1;
                j += 1;
            }
        }
        if pts.len() >= count {
            pts.sort_unstable();
            return Ok(pts[..count].iter().map(|&s| PI * PI * s as f64).collect());
        }
        radius = radius * 3 / 2 + 1;
    }
}

/// `ζ(t) = c_d (t/4π²)^{d/2}` on `[0, 4π²/c_d^{2/d}]`, `ζ*(x) = 4π² (x/c_d)^{2/d}`.
pub fn weyl_law_ddim(d: usize) -> Result<WeylLaw> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    let c = unit_ball_volume(d);
    let df = d as f64;
    Ok(WeylLaw::new(
        WeylKind::DDimLaplacian,
        move |t: f64| (c * (t.max(0.0) / (4.0 * PI * PI)).powf(df / 2.0)).min(1.0),
        move |x: f64| 4.0 * PI * PI * (x / c).powf(2.0 / df),
    ))
}

/// `|4d c_d^{2/d}/(4π²) - 1|`, the symbol/Weyl ratio at `x = 1`.
pub fn ddim_error_bound(d: usize) -> f64 {
    let c = unit_ball_volume(d);
    (4.0 * d as f64 * c.powf(2.0 / d as f64) / (4.0 * PI * PI) - 1.0).abs()
}

/// `ω(θ₁, θ₂) = (2 - 2cos θ₁) + (2 - 2cos θ₂)` on `[0, π]²`.
pub fn laplacian_symbol_2d() -> Result<SymbolFunction> {
    SymbolFunction::new(
        [0.0, PI, 0.0, PI],
        Arc::new(|a: f64, b: f64| 4.0 - 2.0 * a.cos() - 2.0 * b.cos()),
    )
    .map(|s| s.with_range(0.0, 8.0))
}
