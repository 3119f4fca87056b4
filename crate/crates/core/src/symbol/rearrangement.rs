use rayon::prelude::*;

use super::{invert_phi, DistributionFunction, SymbolFunction};
use crate::error::{Error, Result};

/// A nondecreasing function on `[0, 1]`: a monotone rearrangement or any
/// other quantile function.
pub trait Quantile: Send + Sync {
    fn quantile(&self, x: f64) -> f64;
}

impl<F: Fn(f64) -> f64 + Send + Sync> Quantile for F {
    fn quantile(&self, x: f64) -> f64 {
        self(x)
    }
}

/// Piecewise-linear interpolant of sorted symbol samples on the nodes
/// `j/(r²+1)`, `j = 0..=r²+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RearrangedSymbol {
    pub r: usize,
    pub values: Vec<f64>,
}

impl RearrangedSymbol {
    pub fn eval(&self, x: f64) -> f64 {
        let m = self.values.len() - 1;
        let pos = x.clamp(0.0, 1.0) * m as f64;
        let i = (pos.floor() as usize).min(m - 1);
        let frac = pos - i as f64;
        self.values[i] + frac * (self.values[i + 1] - self.values[i])
    }

    pub fn breakpoint(&self, j: usize) -> f64 {
        j as f64 / (self.values.len() - 1) as f64
    }
}

impl Quantile for RearrangedSymbol {
    fn quantile(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// Sample `ω` on the interior grid `x_i = x_lo + i Δx/(r+1)`, `θ_j` alike,
/// `i, j = 1..=r`, sort, and pad with `inf ω` and `sup ω`.
pub fn rearrangement_by_sampling(symbol: &SymbolFunction, r: usize) -> Result<RearrangedSymbol> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let d = (r + 1) as f64;
    let samples = symbol.grid_values(r, r, 1.0, d, d);
    let mut values = Vec::with_capacity(r * r + 2);
    values.push(symbol.inf());
    values.extend(samples);
    values.push(symbol.sup());
    values[1..r * r + 1].par_sort_unstable_by(f64::total_cmp);
    // keep the padding consistent if the cached range is slightly loose
    values[0] = values[0].min(values[1]);
    values[r * r + 1] = values[r * r + 1].max(values[r * r]);
    Ok(RearrangedSymbol { r, values })
}

/// `ω*(x) = inf{t : φ(t) > x}` evaluated by bisection on `φ`.
#[derive(Debug, Clone)]
pub struct AnalyticRearrangement {
    pub phi: DistributionFunction,
}

impl AnalyticRearrangement {
    pub fn new(phi: DistributionFunction) -> Self {
        AnalyticRearrangement { phi }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return self.phi.lo;
        }
        if x >= 1.0 {
            return self.phi.hi;
        }
        invert_phi(&self.phi, x, (self.phi.lo, self.phi.hi)).expect("φ maps [lo, hi] onto [0, 1]")
    }
}

impl Quantile for AnalyticRearrangement {
    fn quantile(&self, x: f64) -> f64 {
        self.eval(x)
    }
}

/// `ω*(k/(n+1))` for `k = 1..=n`.
pub fn sample_rearranged<Q: Quantile + ?Sized>(rearr: &Q, n: usize) -> Vec<f64> {
    let m = (n + 1) as f64;
    (1..=n).into_par_iter().map(|k| rearr.quantile(k as f64 / m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::scalar_fn;
    use crate::symbol::PhiKind;
    use std::f64::consts::PI;

    fn cos_symbol() -> SymbolFunction {
        SymbolFunction::univariate(0.0, PI, scalar_fn(|t| 2.0 - 2.0 * t.cos())).unwrap()
    }

    #[test]
    fn sampled_midpoint() {
        let r = rearrangement_by_sampling(&cos_symbol(), 500).unwrap();
        assert!((r.eval(0.5) - 2.0).abs() < 5e-3);
        assert!(r.values.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(r.values.len(), 500 * 500 + 2);
        assert_eq!(r.eval(0.0), 0.0);
        assert_eq!(r.eval(1.0), 4.0);
    }

    #[test]
    fn constant_symbol() {
        let s = SymbolFunction::univariate(0.0, PI, scalar_fn(|_| 3.0)).unwrap();
        let r = rearrangement_by_sampling(&s, 10).unwrap();
        assert!(sample_rearranged(&r, 7).iter().all(|&v| v == 3.0));
    }

    #[test]
    fn breakpoints_hold_sorted_samples() {
        let r = rearrangement_by_sampling(&cos_symbol(), 20).unwrap();
        for j in 0..r.values.len() {
            assert!((r.eval(r.breakpoint(j)) - r.values[j]).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_quantile_samples() {
        let phi = DistributionFunction::from_fn(PhiKind::Analytic, 0.0, 4.0, |t: f64| {
            (1.0 - t / 2.0).clamp(-1.0, 1.0).acos() / PI
        });
        let q = AnalyticRearrangement::new(phi);
        let s = sample_rearranged(&q, 3);
        let expect = [2.0 - 2.0 * (PI / 4.0).cos(), 2.0, 2.0 - 2.0 * (3.0 * PI / 4.0).cos()];
        for (a, b) in s.iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
