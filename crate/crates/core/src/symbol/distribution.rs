use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;
use serde::Serialize;

use super::SymbolFunction;
use crate::error::{Error, Result};
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhiKind {
    Analytic,
    GridCounted,
    Quadrature,
}

/// Nondecreasing `φ: [lo, hi] → [0, 1]`.
#[derive(Clone)]
pub struct DistributionFunction {
    eval: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub kind: PhiKind,
    pub lo: f64,
    pub hi: f64,
}

impl fmt::Debug for DistributionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DistributionFunction")
            .field("kind", &self.kind)
            .field("lo", &self.lo)
            .field("hi", &self.hi)
            .finish()
    }
}

impl DistributionFunction {
    pub fn from_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(kind: PhiKind, lo: f64, hi: f64, f: F) -> Self {
        DistributionFunction {
            eval: Arc::new(f),
            kind,
            lo,
            hi,
        }
    }

    /// Midpoint-grid counting, with the `resolution²` samples sorted once so
    /// each evaluation is a binary search.
    pub fn grid_counted(symbol: &SymbolFunction, resolution: usize) -> Result<Self> {
        if resolution < 100 {
            return Err(Error::InvalidArgument(format!(
                "resolution must be at least 100, got {resolution}"
            )));
        }
        let r = resolution as f64;
        let mut v = symbol.grid_values(resolution, resolution, 0.5, r, r);
        v.par_sort_unstable_by(f64::total_cmp);
        let total = v.len() as f64;
        let (lo, hi) = symbol.range();
        Ok(Self::from_fn(PhiKind::GridCounted, lo, hi, move |t| {
            v.partition_point(|&w| w <= t) as f64 / total
        }))
    }

    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }
}

/// Fraction of midpoint-grid cells with `ω ≤ t`.
pub fn phi_grid(symbol: &SymbolFunction, t: f64, resolution: usize) -> Result<f64> {
    if resolution < 100 {
        return Err(Error::InvalidArgument(format!(
            "resolution must be at least 100, got {resolution}"
        )));
    }
    let (lo, hi) = symbol.range();
    if t < lo {
        return Ok(0.0);
    }
    if t >= hi {
        return Ok(1.0);
    }
    let r = resolution as f64;
    let v = symbol.grid_values(resolution, resolution, 0.5, r, r);
    let count = v.par_iter().filter(|&&w| w <= t).count();
    Ok(count as f64 / v.len() as f64)
}

/// Smallest `t` in `bracket` with `φ(t) > x`, by Illinois regula falsi
/// safeguarded with bisection.
///
/// Stops when the bracket is below `4 ε |t|` (or `1e-12 ·` its initial
/// width, whichever is smaller), so small quantiles keep full relative
/// precision.
pub fn invert_phi(phi: &DistributionFunction, x: f64, bracket: (f64, f64)) -> Result<f64> {
    let (mut lo, mut hi) = bracket;
    if !(lo <= hi) {
        return Err(Error::BracketFailure { lo, hi, level: x });
    }
    let mut f_lo = phi.eval(lo) - x;
    let mut f_hi = phi.eval(hi) - x;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::BracketFailure { lo, hi, level: x });
    }
    let abs_tol = 1e-12 * (hi - lo);
    // side of the last update: -1 lo, +1 hi
    let mut side = 0i8;
    let mut last_width = hi - lo;
    for it in 0..2000 {
        let width = hi - lo;
        let mid = 0.5 * (lo + hi);
        if width <= 4.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE) && width <= abs_tol.max(f64::MIN_POSITIVE) {
            break;
        }
        // bisect every third step unless the bracket halved since the last check
        let bisect = f_hi - f_lo <= 0.0 || (it % 3 == 2 && width > 0.5 * last_width);
        if it % 3 == 2 {
            last_width = width;
        }
        let mut c = if bisect {
            mid
        } else {
            lo - f_lo * (hi - lo) / (f_hi - f_lo)
        };
        if !(c > lo && c < hi) {
            c = mid;
            if !(c > lo && c < hi) {
                break;
            }
        }
        let fc = phi.eval(c) - x;
        if fc > 0.0 {
            hi = c;
            f_hi = fc;
            if side == 1 {
                f_lo *= 0.5;
            }
            side = 1;
        } else {
            lo = c;
            f_lo = fc;
            if side == -1 {
                f_hi *= 0.5;
            }
            side = -1;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// The two-term antiderivative `Φ(t, x)` in the form it is usually quoted
/// for the Euler–Cauchy distribution function. Its logarithm lacks a `√t`
/// factor, which is why [`EulerCauchyPhi`] checks it before use.
pub fn closed_form_phi_antiderivative(alpha: f64, t: f64, x: f64) -> f64 {
    let em1 = alpha.sqrt().exp() - 1.0;
    let sa = alpha.sqrt();
    let log_arg = 2.0 * alpha * x * (1.0 - em1 * em1 / (4.0 * alpha * x * x)).sqrt() + 1.0;
    em1 * t.sqrt() * log_arg.ln() / sa + 2.0 * x * (em1 * t.sqrt() / (2.0 * sa * x)).asin()
}

/// Distribution function of the 3-point Euler–Cauchy symbol
/// `α x² (2 - 2cos θ)/(e^√α - 1)²` on `[1, e^√α] × [0, π]`.
#[derive(Debug, Clone, Serialize)]
pub struct EulerCauchyPhi {
    pub alpha: f64,
    big_e: f64,
    s_scale: f64,
    pub sup: f64,
    /// True when the closed form failed validation and quadrature is used.
    pub fallback: bool,
    pub closed_form_deviation: f64,
    pub quadrature_deviation: f64,
}

pub const PHI_VALIDATION_RESOLUTION: usize = 2000;
pub const PHI_VALIDATION_SAMPLES: usize = 50;
pub const PHI_VALIDATION_TOL: f64 = 5e-3;

impl EulerCauchyPhi {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        let sa = alpha.sqrt();
        let big_e = sa.exp();
        let em1 = big_e - 1.0;
        let mut me = EulerCauchyPhi {
            alpha,
            big_e,
            s_scale: em1 / (2.0 * sa),
            sup: 4.0 * alpha * big_e * big_e / (em1 * em1),
            fallback: false,
            closed_form_deviation: f64::NAN,
            quadrature_deviation: f64::NAN,
        };
        let case = crate::problem::EulerCauchyCase::new(alpha)?;
        let symbol =
            super::symbol_fd(&case.spec(), &crate::problem::GridMap::identity(1.0, big_e), 1)?.with_range(0.0, me.sup);
        let grid = DistributionFunction::grid_counted(&symbol, PHI_VALIDATION_RESOLUTION)?;
        let ts: Vec<f64> = (1..=PHI_VALIDATION_SAMPLES)
            .map(|i| me.sup * i as f64 / (PHI_VALIDATION_SAMPLES + 1) as f64)
            .collect();
        let dev = |f: &dyn Fn(f64) -> f64| {
            ts.iter()
                .map(|&t| (f(t) - grid.eval(t)).abs())
                .fold(0.0, |m: f64, d| if d.is_nan() { f64::INFINITY } else { m.max(d) })
        };
        me.closed_form_deviation = dev(&|t| me.eval_closed_form(t));
        me.quadrature_deviation = dev(&|t| me.eval_quadrature(t));
        me.fallback = !(me.closed_form_deviation < PHI_VALIDATION_TOL);
        Ok(me)
    }

    /// `s = (e^√α - 1)√t / (2√α)`; the level set boundary is `x sin(θ/2) = s`.
    fn s_of(&self, t: f64) -> f64 {
        self.s_scale * t.sqrt()
    }

    /// Two-branch formula built on [`closed_form_phi_antiderivative`].
    pub fn eval_closed_form(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.sup {
            return 1.0;
        }
        let s = self.s_of(t);
        let big = |x| closed_form_phi_antiderivative(self.alpha, t, x);
        let v = if s <= 1.0 {
            big(self.big_e) - big(1.0)
        } else {
            PI * (s - 1.0) + big(self.big_e) - big(s)
        };
        v / (PI * (self.big_e - 1.0))
    }

    /// Quadrature of `∫ 2 arcsin(min(1, s/x)) dx` after the substitution
    /// `x = s / sin v`, which removes the square-root singularity at `x = s`.
    pub fn eval_quadrature(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        if t >= self.sup {
            return 1.0;
        }
        let s = self.s_of(t);
        let flat = if s > 1.0 { PI * (s - 1.0) } else { 0.0 };
        let v_lo = (s / self.big_e).asin();
        let v_hi = s.min(1.0).asin();
        let f = |v: f64| {
            let sv = v.sin();
            2.0 * v * s * v.cos() / (sv * sv)
        };
        let integral = quadrature::integrate(&f, v_lo, v_hi, 1e-14);
        ((flat + integral) / (PI * (self.big_e - 1.0))).clamp(0.0, 1.0)
    }

    /// `φ(t)` from whichever form passed validation.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if t < 0.0 || t > self.sup * (1.0 + 1e-12) {
            return Err(Error::OutOfRange(t, 0.0, self.sup));
        }
        Ok(if self.fallback {
            self.eval_quadrature(t)
        } else {
            self.eval_closed_form(t)
        })
    }

    pub fn distribution(&self) -> DistributionFunction {
        let me = self.clone();
        let kind = if self.fallback {
            PhiKind::Quadrature
        } else {
            PhiKind::Analytic
        };
        DistributionFunction::from_fn(kind, 0.0, self.sup, move |t| {
            if me.fallback {
                me.eval_quadrature(t)
            } else {
                me.eval_closed_form(t)
            }
        })
    }

    pub fn rearrangement(&self) -> super::AnalyticRearrangement {
        super::AnalyticRearrangement::new(self.distribution())
    }
}

/// Cached [`EulerCauchyPhi`] per `α`.
pub fn euler_cauchy_phi(alpha: f64) -> Result<Arc<EulerCauchyPhi>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<EulerCauchyPhi>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("phi cache poisoned").get(&alpha.to_bits()) {
        return Ok(p.clone());
    }
    let p = Arc::new(EulerCauchyPhi::new(alpha)?);
    cache
        .lock()
        .expect("phi cache poisoned")
        .insert(alpha.to_bits(), p.clone());
    Ok(p)
}

pub fn phi_euler_cauchy_analytic(alpha: f64, t: f64) -> Result<f64> {
    euler_cauchy_phi(alpha)?.eval(t)
}
