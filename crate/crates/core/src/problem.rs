//! Sturm–Liouville problems, grid maps and the Euler–Cauchy reference case.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature;

/// Shared scalar function handle.
pub type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub fn scalar_fn<F: Fn(f64) -> f64 + Send + Sync + 'static>(f: F) -> ScalarFn {
    Arc::new(f)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Bc {
    #[default]
    Dirichlet,
}

/// `-(p u')' + q u = λ w u` on `(a, b)`.
#[derive(Clone)]
pub struct OperatorSpec {
    pub a: f64,
    pub b: f64,
    p: ScalarFn,
    p_prime: Option<ScalarFn>,
    q: Option<ScalarFn>,
    w: Option<ScalarFn>,
    pub bc: Bc,
    exact: Option<Arc<dyn Fn(usize) -> f64 + Send + Sync>>,
}

impl fmt::Debug for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OperatorSpec")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("has_q", &self.q.is_some())
            .field("has_w", &self.w.is_some())
            .field("bc", &self.bc)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl OperatorSpec {
    /// Builds a Dirichlet problem with `q = 0` and `w = 1`.
    ///
    /// `p` is sampled at 257 points and must be positive there.
    pub fn new(a: f64, b: f64, p: ScalarFn) -> Result<Self> {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
        }
        let spec = OperatorSpec {
            a,
            b,
            p,
            p_prime: None,
            q: None,
            w: None,
            bc: Bc::Dirichlet,
            exact: None,
        };
        spec.check_positive(&spec.p, "p")?;
        Ok(spec)
    }

    /// `p ≡ 1` on `(a, b)`.
    pub fn laplacian(a: f64, b: f64) -> Result<Self> {
        Self::new(a, b, scalar_fn(|_| 1.0))
    }

    pub fn with_p_prime(mut self, dp: ScalarFn) -> Self {
        self.p_prime = Some(dp);
        self
    }

    pub fn with_q(mut self, q: ScalarFn) -> Self {
        self.q = Some(q);
        self
    }

    pub fn with_w(mut self, w: ScalarFn) -> Result<Self> {
        self.check_positive(&w, "w")?;
        self.w = Some(w);
        Ok(self)
    }

    /// Attach a closed-form spectrum, `k ↦ λ_k` for `k ≥ 1`.
    pub fn with_exact<F: Fn(usize) -> f64 + Send + Sync + 'static>(mut self, f: F) -> Self {
        self.exact = Some(Arc::new(f));
        self
    }

    fn check_positive(&self, f: &ScalarFn, name: &str) -> Result<()> {
        const SAMPLES: usize = 257;
        for i in 0..SAMPLES {
            let x = self.a + (self.b - self.a) * i as f64 / (SAMPLES - 1) as f64;
            let v = f(x);
            if !(v > 0.0) {
                return Err(Error::Domain(format!("{name}({x}) = {v} is not positive")));
            }
        }
        Ok(())
    }

    pub fn p(&self, x: f64) -> f64 {
        (self.p)(x)
    }

    /// `p` continued by constants outside `[a, b]`.
    pub fn p_bar(&self, x: f64) -> f64 {
        (self.p)(x.clamp(self.a, self.b))
    }

    pub fn p_prime(&self, x: f64) -> Option<f64> {
        self.p_prime.as_ref().map(|f| f(x))
    }

    pub fn q(&self, x: f64) -> f64 {
        self.q.as_ref().map_or(0.0, |f| f(x))
    }

    pub fn w(&self, x: f64) -> f64 {
        self.w.as_ref().map_or(1.0, |f| f(x))
    }

    pub fn has_potential(&self) -> bool {
        self.q.is_some()
    }

    pub fn has_weight(&self) -> bool {
        self.w.is_some()
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// First `count` exact eigenvalues, if a closed form was attached.
    pub fn exact_spectrum(&self, count: usize) -> Option<Vec<f64>> {
        self.exact.as_ref().map(|f| (1..=count).map(|k| f(k)).collect())
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MapKind {
    Identity,
    Liouville { alpha: f64 },
    Custom,
}

/// A diffeomorphism `τ` of `[a, b]` onto itself.
#[derive(Clone)]
pub struct GridMap {
    pub a: f64,
    pub b: f64,
    tau: ScalarFn,
    tau_prime: ScalarFn,
    pub kind: MapKind,
}

impl fmt::Debug for GridMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GridMap")
            .field("a", &self.a)
            .field("b", &self.b)
            .field("kind", &self.kind)
            .finish()
    }
}

impl GridMap {
    pub fn new(a: f64, b: f64, tau: ScalarFn, tau_prime: ScalarFn) -> Result<Self> {
        if !(a < b) {
            return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
        }
        let scale = a.abs().max(b.abs()).max(1.0);
        if (tau(a) - a).abs() > 1e-12 * scale || (tau(b) - b).abs() > 1e-12 * scale {
            return Err(Error::Domain("map must fix both endpoints".into()));
        }
        for i in 0..=256 {
            let x = a + (b - a) * i as f64 / 256.0;
            if tau_prime(x) == 0.0 || !tau_prime(x).is_finite() {
                return Err(Error::Domain(format!("tau' vanishes at {x}")));
            }
        }
        Ok(GridMap {
            a,
            b,
            tau,
            tau_prime,
            kind: MapKind::Custom,
        })
    }

    pub fn identity(a: f64, b: f64) -> Self {
        GridMap {
            a,
            b,
            tau: scalar_fn(|x| x),
            tau_prime: scalar_fn(|_| 1.0),
            kind: MapKind::Identity,
        }
    }

    pub fn tau(&self, x: f64) -> f64 {
        (self.tau)(x)
    }

    pub fn tau_prime(&self, x: f64) -> f64 {
        (self.tau_prime)(x)
    }

    /// Extension by the identity outside `(a, b)`.
    pub fn tau_bar(&self, x: f64) -> f64 {
        if x <= self.a || x >= self.b {
            x
        } else {
            (self.tau)(x)
        }
    }
}

/// Uniform nodes `x_j`, `j = 1-η ..= n+η`, plus their images under a map.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub eta: usize,
    pub nodes: Vec<f64>,
    pub mapped_nodes: Vec<f64>,
}

impl Grid {
    /// Position in `nodes` of the node with signed index `j`.
    pub fn pos(&self, j: isize) -> usize {
        (j + self.eta as isize - 1) as usize
    }

    pub fn node(&self, j: isize) -> f64 {
        self.nodes[self.pos(j)]
    }

    pub fn mapped(&self, j: isize) -> f64 {
        self.mapped_nodes[self.pos(j)]
    }

    pub fn spacing(&self) -> f64 {
        (self.b - self.a) / (self.n + 1) as f64
    }
}

pub fn make_uniform_grid(a: f64, b: f64, n: usize, eta: usize) -> Result<Grid> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if eta == 0 {
        return Err(Error::InvalidArgument("eta must be positive".into()));
    }
    if !(a < b) {
        return Err(Error::InvalidArgument(format!("need a < b, got [{a}, {b}]")));
    }
    let m = (n + 1) as f64;
    let nodes: Vec<f64> = (1 - eta as isize..=(n + eta) as isize)
        .map(|j| a + (b - a) * j as f64 / m)
        .collect();
    Ok(Grid {
        a,
        b,
        n,
        eta,
        mapped_nodes: nodes.clone(),
        nodes,
    })
}

/// Apply `τ̄` to every node of `grid`.
pub fn map_grid(grid: &Grid, map: &GridMap) -> Result<Grid> {
    if (map.a - grid.a).abs() > 1e-12 * grid.a.abs().max(1.0) || (map.b - grid.b).abs() > 1e-12 * grid.b.abs().max(1.0)
    {
        return Err(Error::InvalidArgument(
            "map and grid live on different intervals".into(),
        ));
    }
    let mapped: Vec<f64> = grid.nodes.iter().map(|&x| map.tau_bar(x)).collect();
    if let Some(i) = mapped.windows(2).position(|w| !(w[0] < w[1])) {
        return Err(Error::SingularGrid(i, i + 1));
    }
    Ok(Grid {
        mapped_nodes: mapped,
        ..grid.clone()
    })
}

/// `-(α x² u')' = λ u` on `(1, e^√α)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerCauchyCase {
    pub alpha: f64,
}

impl EulerCauchyCase {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
        }
        Ok(EulerCauchyCase { alpha })
    }

    pub fn a(&self) -> f64 {
        1.0
    }

    pub fn b(&self) -> f64 {
        self.alpha.sqrt().exp()
    }

    pub fn exact_eigenvalue(&self, k: usize) -> f64 {
        let k = k as f64;
        k * k * std::f64::consts::PI.powi(2) + self.alpha / 4.0
    }

    pub fn spec(&self) -> OperatorSpec {
        let alpha = self.alpha;
        OperatorSpec::new(1.0, self.b(), scalar_fn(move |x| alpha * x * x))
            .expect("alpha x^2 is positive on [1, e^sqrt(alpha)]")
            .with_p_prime(scalar_fn(move |x| 2.0 * alpha * x))
            .with_exact(move |k| {
                let k = k as f64;
                k * k * std::f64::consts::PI.powi(2) + alpha / 4.0
            })
    }

    pub fn liouville_map(&self) -> GridMap {
        liouville_map(self.alpha).expect("alpha validated at construction")
    }
}

/// `τ(x) = exp(√α (x-1)/(e^√α - 1))`, mapping `[1, e^√α]` onto itself.
pub fn liouville_map(alpha: f64) -> Result<GridMap> {
    let case = EulerCauchyCase::new(alpha)?;
    let sa = alpha.sqrt();
    let big_e = case.b();
    let c = sa / (big_e - 1.0);
    Ok(GridMap {
        a: 1.0,
        b: big_e,
        tau: scalar_fn(move |x| (c * (x - 1.0)).exp()),
        tau_prime: scalar_fn(move |x| c * (c * (x - 1.0)).exp()),
        kind: MapKind::Liouville { alpha },
    })
}

pub fn exact_spectrum_euler_cauchy(case: &EulerCauchyCase, k_max: usize) -> Result<Vec<f64>> {
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be at least 1".into()));
    }
    Ok((1..=k_max).map(|k| case.exact_eigenvalue(k)).collect())
}

/// `B = ∫_a^b √(w/p)`, the length of the Liouville normal-form interval.
pub fn liouville_invariant_b(spec: &OperatorSpec, tol: f64) -> Result<f64> {
    // probe the integrand on the panel nodes first so a sign problem is an error, not a NaN
    let bad = std::cell::Cell::new(None);
    let f = |x: f64| {
        let (p, w) = (spec.p(x), spec.w(x));
        if !(p > 0.0 && w > 0.0) {
            bad.set(Some(x));
            return 0.0;
        }
        (w / p).sqrt()
    };
    let v = quadrature::integrate(&f, spec.a, spec.b, tol);
    if let Some(x) = bad.get() {
        return Err(Error::Domain(format!("p or w non-positive at {x}")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    #[test]
    fn uniform_grid_layout() {
        let g = make_uniform_grid(0.0, 1.0, 3, 1).unwrap();
        assert_eq!(g.nodes, vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        let g = make_uniform_grid(1.0, E, 2, 2).unwrap();
        assert_eq!(g.nodes.len(), 6);
        assert!(g.node(-1) < 1.0 && g.node(4) > E);
        assert!((g.node(2) - g.node(1) - (E - 1.0) / 3.0).abs() < 1e-15);
        let g = make_uniform_grid(0.0, 1.0, 100, 1).unwrap();
        assert_eq!(g.node(50), 50.0 / 101.0);
        assert!(make_uniform_grid(0.0, 1.0, 0, 1).is_err());
        assert!(make_uniform_grid(1.0, 1.0, 3, 1).is_err());
    }

    #[test]
    fn liouville_map_values() {
        let m = liouville_map(1.0).unwrap();
        assert!((m.tau(1.0) - 1.0).abs() < 1e-15);
        assert!((m.tau(E) - E).abs() < 1e-14);
        assert!((m.tau(1.0 + (E - 1.0) / 2.0) - 0.5f64.exp()).abs() < 1e-14);
        let m = liouville_map(4.0).unwrap();
        let e2 = 2f64.exp();
        assert!((m.tau_prime(1.0) - 2.0 / (e2 - 1.0)).abs() < 1e-15);
        assert_eq!(m.tau_bar(0.5), 0.5);
        assert_eq!(m.tau_bar(10.0), 10.0);
        assert!(liouville_map(0.0).is_err());
    }

    #[test]
    fn exact_spectrum_values() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        let s = exact_spectrum_euler_cauchy(&c, 3).unwrap();
        assert!((s[0] - (PI * PI + 0.25)).abs() < 1e-12);
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        assert!(exact_spectrum_euler_cauchy(&c, 0).is_err());
        let c = EulerCauchyCase::new(0.1).unwrap();
        assert!((c.exact_eigenvalue(1) - (PI * PI + 0.025)).abs() < 1e-12);
        assert_eq!(
            c.spec().exact_spectrum(2).unwrap(),
            exact_spectrum_euler_cauchy(&c, 2).unwrap()
        );
    }

    #[test]
    fn invariant_b() {
        let s = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        assert!((liouville_invariant_b(&s, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        let s = OperatorSpec::new(1.0, E, scalar_fn(|x| x * x)).unwrap();
        assert!((liouville_invariant_b(&s, 1e-12).unwrap() - 1.0).abs() < 1e-12);
        for alpha in [0.1, 1.0, 4.0, 9.0] {
            let s = EulerCauchyCase::new(alpha).unwrap().spec();
            assert!((liouville_invariant_b(&s, 1e-12).unwrap() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_nonpositive_coefficients() {
        assert!(OperatorSpec::new(-1.0, 1.0, scalar_fn(|x| x)).is_err());
        assert!(OperatorSpec::laplacian(0.0, 1.0)
            .unwrap()
            .with_w(scalar_fn(|_| 0.0))
            .is_err());
    }

    #[test]
    fn mapped_liouville_grid_increasing() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        for n in [1usize, 10, 1000, 10_000] {
            let g = make_uniform_grid(c.a(), c.b(), n, 3).unwrap();
            let mg = map_grid(&g, &c.liouville_map()).unwrap();
            assert!(mg.mapped_nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
