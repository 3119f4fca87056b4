//! Spectral symbols, distribution functions and monotone rearrangements.

mod distribution;
mod rearrangement;

pub use distribution::{
    closed_form_phi_antiderivative, euler_cauchy_phi, invert_phi, phi_euler_cauchy_analytic, phi_grid,
    DistributionFunction, EulerCauchyPhi, PhiKind, PHI_VALIDATION_RESOLUTION, PHI_VALIDATION_SAMPLES,
    PHI_VALIDATION_TOL,
};
pub use rearrangement::{
    rearrangement_by_sampling, sample_rearranged, AnalyticRearrangement, Quantile, RearrangedSymbol,
};

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::fd::FdScheme;
use crate::iga::iga_symbol_f;
use crate::problem::{scalar_fn, GridMap, OperatorSpec, ScalarFn};

pub type SymbolFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

const RANGE_SAMPLES: usize = 4096;

/// `ω(x, θ)` on a box `[x_lo, x_hi] × [θ_lo, θ_hi]` with cached range bounds.
#[derive(Clone)]
pub struct SymbolFunction {
    pub x_lo: f64,
    pub x_hi: f64,
    pub theta_lo: f64,
    pub theta_hi: f64,
    eval: SymbolFn,
    /// `ω = g(x) f(θ)` when known; lets grid routines avoid `r²` closure calls.
    factors: Option<(ScalarFn, ScalarFn)>,
    inf: f64,
    sup: f64,
}

impl fmt::Debug for SymbolFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SymbolFunction")
            .field("domain", &[self.x_lo, self.x_hi, self.theta_lo, self.theta_hi])
            .field("range", &[self.inf, self.sup])
            .field("separable", &self.factors.is_some())
            .finish()
    }
}

fn check_box(x_lo: f64, x_hi: f64, theta_lo: f64, theta_hi: f64) -> Result<()> {
    if !(x_lo < x_hi && theta_lo < theta_hi) || ![x_lo, x_hi, theta_lo, theta_hi].iter().all(|v| v.is_finite()) {
        return Err(Error::InvalidArgument(
            "symbol domain must be a box of positive measure".into(),
        ));
    }
    Ok(())
}

impl SymbolFunction {
    /// General symbol; range bounds come from a `(R+1)²` boundary-inclusive sample.
    pub fn new(domain: [f64; 4], eval: SymbolFn) -> Result<Self> {
        let [x_lo, x_hi, theta_lo, theta_hi] = domain;
        check_box(x_lo, x_hi, theta_lo, theta_hi)?;
        let r = 256;
        let (mut inf, mut sup) = (f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..=r {
            let x = x_lo + (x_hi - x_lo) * i as f64 / r as f64;
            for j in 0..=r {
                let t = theta_lo + (theta_hi - theta_lo) * j as f64 / r as f64;
                let v = eval(x, t);
                inf = inf.min(v);
                sup = sup.max(v);
            }
        }
        Ok(SymbolFunction {
            x_lo,
            x_hi,
            theta_lo,
            theta_hi,
            eval,
            factors: None,
            inf,
            sup,
        })
    }

    /// `ω(x, θ) = g(x) f(θ)` with `g > 0`, `f ≥ 0`.
    pub fn separable(domain: [f64; 4], g: ScalarFn, f: ScalarFn) -> Result<Self> {
        let [x_lo, x_hi, theta_lo, theta_hi] = domain;
        check_box(x_lo, x_hi, theta_lo, theta_hi)?;
        let sample = |h: &ScalarFn, lo: f64, hi: f64| {
            (0..=RANGE_SAMPLES).fold((f64::INFINITY, f64::NEG_INFINITY), |(mn, mx), i| {
                let v = h(lo + (hi - lo) * i as f64 / RANGE_SAMPLES as f64);
                (mn.min(v), mx.max(v))
            })
        };
        let (gmin, gmax) = sample(&g, x_lo, x_hi);
        let (fmin, fmax) = sample(&f, theta_lo, theta_hi);
        if !(gmin > 0.0) || fmin < 0.0 {
            return Err(Error::Domain("separable symbol needs g > 0 and f >= 0".into()));
        }
        let (gc, fc) = (g.clone(), f.clone());
        Ok(SymbolFunction {
            x_lo,
            x_hi,
            theta_lo,
            theta_hi,
            eval: Arc::new(move |x, t| gc(x) * fc(t)),
            factors: Some((g, f)),
            inf: gmin * fmin,
            sup: gmax * fmax,
        })
    }

    /// Symbol independent of `x` on `[0, 1] × [θ_lo, θ_hi]`.
    pub fn univariate(theta_lo: f64, theta_hi: f64, f: ScalarFn) -> Result<Self> {
        Self::separable([0.0, 1.0, theta_lo, theta_hi], scalar_fn(|_| 1.0), f)
    }

    /// Override the sampled range with known bounds.
    pub fn with_range(mut self, inf: f64, sup: f64) -> Self {
        self.inf = inf;
        self.sup = sup;
        self
    }

    pub fn eval(&self, x: f64, theta: f64) -> f64 {
        (self.eval)(x, theta)
    }

    pub fn range(&self) -> (f64, f64) {
        (self.inf, self.sup)
    }

    pub fn inf(&self) -> f64 {
        self.inf
    }

    pub fn sup(&self) -> f64 {
        self.sup
    }

    pub fn measure(&self) -> f64 {
        (self.x_hi - self.x_lo) * (self.theta_hi - self.theta_lo)
    }

    pub fn factors(&self) -> Option<&(ScalarFn, ScalarFn)> {
        self.factors.as_ref()
    }

    /// Values on the tensor grid `x_i = x_lo + (i + shift) Δx`, `i < nx`, and
    /// likewise in `θ`, flattened row by row.
    pub(crate) fn grid_values(&self, nx: usize, nt: usize, shift: f64, denom_x: f64, denom_t: f64) -> Vec<f64> {
        use rayon::prelude::*;
        let xs: Vec<f64> = (0..nx)
            .map(|i| self.x_lo + (self.x_hi - self.x_lo) * (i as f64 + shift) / denom_x)
            .collect();
        let ts: Vec<f64> = (0..nt)
            .map(|j| self.theta_lo + (self.theta_hi - self.theta_lo) * (j as f64 + shift) / denom_t)
            .collect();
        match &self.factors {
            Some((g, f)) => {
                let gv: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
                let fv: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
                gv.par_iter()
                    .flat_map_iter(|gi| fv.iter().map(move |fj| gi * fj))
                    .collect()
            }
            None => xs
                .par_iter()
                .flat_map_iter(|&x| ts.iter().map(move |&t| (self.eval)(x, t)))
                .collect(),
        }
    }
}

/// `ω(x, θ) = p(τ(x)) f(θ) / (τ'(x)² (b-a)²)` on `[a, b] × [0, π]`.
fn mapped_symbol(spec: &OperatorSpec, map: &GridMap, f: ScalarFn) -> Result<SymbolFunction> {
    let (a, b) = (spec.a, spec.b);
    let spec = spec.clone();
    let map = map.clone();
    let len2 = (b - a) * (b - a);
    let g = scalar_fn(move |x| {
        let tp = map.tau_prime(x);
        spec.p(map.tau(x)) / (tp * tp * len2)
    });
    SymbolFunction::separable([a, b, 0.0, PI], g, f)
}

/// Symbol of the weighted FD sequence on the grid induced by `map`.
pub fn symbol_fd(spec: &OperatorSpec, map: &GridMap, eta: usize) -> Result<SymbolFunction> {
    let scheme = FdScheme::new(eta)?;
    mapped_symbol(spec, map, scalar_fn(move |t| scheme.symbol(t)))
}

/// Symbol of the weighted IgA sequence on the geometry `map`.
pub fn symbol_iga(spec: &OperatorSpec, map: &GridMap, eta: usize) -> Result<SymbolFunction> {
    let f = match eta {
        0 => return Err(Error::InvalidArgument("degree must be at least 1".into())),
        1 | 2 => scalar_fn(move |t| iga_symbol_f(eta, t).expect("closed form")),
        _ => {
            let st = crate::iga::iga_stencil(eta)?;
            scalar_fn(move |t| st.symbol(t))
        }
    };
    mapped_symbol(spec, map, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::EulerCauchyCase;
    use std::f64::consts::E;

    #[test]
    fn laplacian_symbols() {
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        let id = GridMap::identity(0.0, 1.0);
        let s = symbol_fd(&spec, &id, 1).unwrap();
        assert!((s.eval(0.3, 1.0) - (2.0 - 2.0 * 1f64.cos())).abs() < 1e-14);
        assert_eq!(s.range(), (0.0, 4.0));
        let s = symbol_iga(&spec, &id, 1).unwrap();
        assert!((s.sup() - 12.0).abs() < 1e-12);
        let s = symbol_iga(&spec, &id, 2).unwrap();
        assert!((s.sup() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn euler_cauchy_symbols() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        let id = GridMap::identity(1.0, E);
        let s = symbol_fd(&c.spec(), &id, 1).unwrap();
        let sup = 4.0 * E * E / ((E - 1.0) * (E - 1.0));
        assert!((s.sup() / sup - 1.0).abs() < 1e-12);
        let x = 1.7;
        assert!((s.eval(x, 2.0) - x * x * (2.0 - 2.0 * 2f64.cos()) / ((E - 1.0) * (E - 1.0))).abs() < 1e-14);
        let s = symbol_iga(&c.spec(), &id, 1).unwrap();
        assert!((s.sup() / (3.0 * sup) - 1.0).abs() < 1e-12);
        // on the Liouville grid the x-factor is identically one
        let s = symbol_fd(&c.spec(), &c.liouville_map(), 1).unwrap();
        let (g, _) = s.factors().unwrap();
        for i in 0..=20 {
            assert!((g(1.0 + (E - 1.0) * i as f64 / 20.0) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn general_constructor_brackets_samples() {
        let s = SymbolFunction::new([0.0, 1.0, 0.0, PI], Arc::new(|x: f64, t: f64| x.sin() + t.cos())).unwrap();
        let (lo, hi) = s.range();
        assert!((lo - (-1.0)).abs() < 1e-12);
        assert!((hi - (1.0 + 1f64.sin())).abs() < 1e-12);
        assert!(SymbolFunction::new([1.0, 1.0, 0.0, 1.0], Arc::new(|_, _| 0.0)).is_err());
    }
}
