//! Spectral comparison functionals: counting, re-indexing, local and maximum
//! relative errors, outliers and symbol-ratio asymptotics.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::eigen::EigenResult;
use crate::error::{Error, Result};
use crate::symbol::{Quantile, SymbolFunction};

/// Grid size used by [`asymptotic_error`] when nothing else is asked for.
pub const ASYMPTOTIC_GRID: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumReport {
    pub values: Vec<f64>,
    pub d_minus: usize,
    pub d_plus: usize,
    /// Values were multiplied by `(weight_n + 1)^{-weight_exponent}`.
    pub weight_exponent: f64,
    pub weight_n: usize,
    pub outlier_flags: Vec<bool>,
}

impl SpectrumReport {
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(f64::total_cmp);
        let d_minus = values.iter().filter(|&&v| v < 0.0).count();
        let d_plus = values.len() - d_minus;
        let n = values.len();
        SpectrumReport {
            values,
            d_minus,
            d_plus,
            weight_exponent: 0.0,
            weight_n: n,
            outlier_flags: vec![false; n],
        }
    }

    pub fn from_eigen(r: &EigenResult) -> Self {
        Self::new(r.values.clone())
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Multiply by `(n+1)^{-exponent}` (on top of any earlier weighting).
    pub fn weighted(&self, n: usize, exponent: f64) -> Self {
        let s = ((n + 1) as f64).powf(-exponent);
        SpectrumReport {
            values: self.values.iter().map(|v| v * s).collect(),
            weight_exponent: self.weight_exponent + exponent,
            weight_n: n,
            ..self.clone()
        }
    }

    pub fn with_outliers(mut self, flags: Vec<bool>) -> Self {
        assert_eq!(flags.len(), self.values.len());
        self.outlier_flags = flags;
        self
    }

    pub fn outlier_count(&self) -> usize {
        self.outlier_flags.iter().filter(|&&f| f).count()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorReport {
    /// `δ_k̂`; may hold `+∞`.
    pub local_errors: Vec<f64>,
    pub max_error: f64,
    /// 1-based index attaining the maximum.
    pub argmax: usize,
    pub argmax_ratio: f64,
    pub numerical_errors: Option<Vec<f64>>,
    pub analytic_errors: Option<Vec<f64>>,
    pub asymptotic_error: Option<f64>,
}

impl ErrorReport {
    fn from_local(local: Vec<f64>, mask: Option<&[bool]>) -> Self {
        let mut best = (0usize, f64::NEG_INFINITY);
        for (i, &d) in local.iter().enumerate() {
            if mask.is_some_and(|m| m[i]) {
                continue;
            }
            if d > best.1 {
                best = (i, d);
            }
        }
        let n = local.len();
        let max_error = if n == 0 || best.1 == f64::NEG_INFINITY {
            0.0
        } else {
            best.1
        };
        ErrorReport {
            argmax: best.0 + 1,
            argmax_ratio: if n == 0 { 0.0 } else { (best.0 + 1) as f64 / n as f64 },
            local_errors: local,
            max_error,
            numerical_errors: None,
            analytic_errors: None,
            asymptotic_error: None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.max_error.is_infinite()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylKind {
    EulerCauchy,
    DDimLaplacian,
    Custom,
}

/// Weyl distribution `ζ` and its quantile `ζ*`.
#[derive(Clone)]
pub struct WeylLaw {
    zeta: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    zeta_star: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub kind: WeylKind,
}

impl fmt::Debug for WeylLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("WeylLaw").field("kind", &self.kind).finish()
    }
}

impl WeylLaw {
    pub fn new<Z, S>(kind: WeylKind, zeta: Z, zeta_star: S) -> Self
    where
        Z: Fn(f64) -> f64 + Send + Sync + 'static,
        S: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        WeylLaw {
            zeta: Arc::new(zeta),
            zeta_star: Arc::new(zeta_star),
            kind,
        }
    }

    pub fn zeta(&self, t: f64) -> f64 {
        (self.zeta)(t)
    }

    pub fn zeta_star(&self, x: f64) -> f64 {
        (self.zeta_star)(x)
    }
}

impl Quantile for WeylLaw {
    fn quantile(&self, x: f64) -> f64 {
        self.zeta_star(x)
    }
}

/// `ζ(t) = √t/π` clipped to `[0, 1]`, `ζ*(x) = π² x²`.
pub fn weyl_law_euler_cauchy() -> WeylLaw {
    WeylLaw::new(
        WeylKind::EulerCauchy,
        |t: f64| (t.max(0.0).sqrt() / PI).min(1.0),
        |x: f64| PI * PI * x * x,
    )
}

/// Number of eigenvalues `≤ t`.
pub fn counting_function(report: &SpectrumReport, t: f64) -> usize {
    report.values.partition_point(|&v| v <= t)
}

/// Map a signed eigenvalue index to its position `k̂ ∈ 1..=d_n`.
pub fn reindex(k: i64, d_minus: usize) -> Result<usize> {
    match k {
        0 => Err(Error::ZeroIndex),
        k if k < 0 => {
            let v = k + d_minus as i64 + 1;
            if v < 1 {
                return Err(Error::InvalidArgument(format!("index {k} below -d_minus = -{d_minus}")));
            }
            Ok(v as usize)
        }
        k => Ok(k as usize + d_minus),
    }
}

fn relative_discrepancy(x: f64, y: f64) -> f64 {
    if y == 0.0 {
        if x == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (x / y - 1.0).abs()
    }
}

/// `δ_k̂ = |λ_k̂(X)/λ_k̂(Y) - 1|` and their maximum.
pub fn local_and_max_errors(x: &SpectrumReport, y: &SpectrumReport) -> Result<ErrorReport> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let local: Vec<f64> = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(&a, &b)| relative_discrepancy(a, b))
        .collect();
    Ok(ErrorReport::from_local(local, None))
}

/// As [`local_and_max_errors`], with the maximum taken over entries of `x`
/// not flagged as outliers.
pub fn local_and_max_errors_excluding_outliers(x: &SpectrumReport, y: &SpectrumReport) -> Result<ErrorReport> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch(x.dim(), y.dim()));
    }
    let local: Vec<f64> = x
        .values
        .iter()
        .zip(&y.values)
        .map(|(&a, &b)| relative_discrepancy(a, b))
        .collect();
    Ok(ErrorReport::from_local(local, Some(&x.outlier_flags)))
}

/// Maximum error after discarding the `drop` largest eigenvalues.
pub fn max_error_dropping_top(x: &SpectrumReport, y: &SpectrumReport, drop: usize) -> Result<ErrorReport> {
    let n = x.dim();
    let mask: Vec<bool> = (0..n).map(|i| i + drop >= n).collect();
    let flagged = x.clone().with_outliers(mask);
    local_and_max_errors_excluding_outliers(&flagged, y)
}

/// `|(d_n+1)² ω*_k / λ_k(ref) - 1|`.
pub fn analytic_error(d_n: usize, sample: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(Error::ZeroReference(0));
    }
    let m = (d_n + 1) as f64;
    Ok((m * m * sample / reference - 1.0).abs())
}

/// Numerical errors `err_k` against a reference spectrum and analytic errors
/// `ãerr_k` of the scaled rearrangement samples.
pub fn numerical_and_analytic_errors(
    eigs: &SpectrumReport,
    reference: &SpectrumReport,
    rearr_samples: &[f64],
) -> Result<ErrorReport> {
    let n = eigs.dim();
    if reference.dim() < n {
        return Err(Error::DimensionMismatch(reference.dim(), n));
    }
    if rearr_samples.len() != n {
        return Err(Error::DimensionMismatch(rearr_samples.len(), n));
    }
    if let Some(k) = reference.values[..n].iter().position(|&v| v == 0.0) {
        return Err(Error::ZeroReference(k + 1));
    }
    let num: Vec<f64> = eigs
        .values
        .iter()
        .zip(&reference.values)
        .map(|(&a, &b)| (a / b - 1.0).abs())
        .collect();
    let m = (n + 1) as f64;
    let ana: Vec<f64> = rearr_samples
        .iter()
        .zip(&reference.values)
        .map(|(&w, &b)| (m * m * w / b - 1.0).abs())
        .collect();
    let mut rep = ErrorReport::from_local(num.clone(), None);
    rep.numerical_errors = Some(num);
    rep.analytic_errors = Some(ana);
    Ok(rep)
}

/// `c_{α,k} = (α/4)/(k²π² + α/4)`.
pub fn saturation_constant(alpha: f64, k: usize) -> f64 {
    let s = alpha / 4.0;
    s / ((k * k) as f64 * PI * PI + s)
}

/// Flags eigenvalues (already weighted) outside the essential range,
/// padded by `1e-8 · sup R_ω`.
pub fn detect_outliers(report: &SpectrumReport, symbol: &SymbolFunction) -> Vec<bool> {
    let (lo, hi) = symbol.range();
    let tol = 1e-8 * hi.abs();
    report.values.iter().map(|&v| v < lo - tol || v > hi + tol).collect()
}

/// `max_k |ω*(x_k)/ζ*(x_k) - 1|` over `x_k = k/(grid+1)`, `k = 1..=grid`,
/// with the maximizing `x_k`.
pub fn asymptotic_error<Q: Quantile + ?Sized>(rearr: &Q, law: &WeylLaw, grid: usize) -> (f64, f64) {
    let m = (grid + 1) as f64;
    (1..=grid)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / m;
            ((rearr.quantile(x) / law.zeta_star(x) - 1.0).abs(), x)
        })
        .reduce(
            || (f64::NEG_INFINITY, 0.0),
            |a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a },
        )
}

/// `max_k |λ_k - ω*(k/(n+1))|` for weighted eigenvalues.
pub fn sampling_absolute_error(weighted: &SpectrumReport, samples: &[f64]) -> Result<f64> {
    if weighted.dim() != samples.len() {
        return Err(Error::DimensionMismatch(weighted.dim(), samples.len()));
    }
    Ok(weighted
        .values
        .iter()
        .zip(samples)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

/// `|N(t)/d_n - φ(t)|`.
pub fn counting_deviation(weighted: &SpectrumReport, t: f64, phi_t: f64) -> f64 {
    (counting_function(weighted, t) as f64 / weighted.dim() as f64 - phi_t).abs()
}
