//! Isogeometric Galerkin discretization with maximally smooth B-splines.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use rayon::prelude::*;

use crate::eigen::{eig_gen_sym, EigenResult};
use crate::error::{Error, Result};
use crate::matrix::BandedMatrix;
use crate::problem::{scalar_fn, GridMap, OperatorSpec};
use crate::quadrature::gauss_legendre;

/// Open uniform B-spline space of degree `η` on `[0, 1]`.
///
/// The span count is `n + 2 - η`, so the space has `n + 2` functions and
/// exactly `n` remain after removing the two boundary functions.
#[derive(Debug, Clone, PartialEq)]
pub struct BSplineBasis {
    pub degree: usize,
    pub spans: usize,
    pub knots: Vec<f64>,
}

impl BSplineBasis {
    /// Basis whose Dirichlet space has dimension `n`.
    pub fn with_dof(degree: usize, n: usize) -> Result<Self> {
        if degree == 0 {
            return Err(Error::InvalidArgument("degree must be at least 1".into()));
        }
        if n + 2 <= degree || n == 0 {
            return Err(Error::InvalidArgument(format!("dof {n} too small for degree {degree}")));
        }
        Self::with_spans(degree, n + 2 - degree)
    }

    pub fn with_spans(degree: usize, spans: usize) -> Result<Self> {
        if degree == 0 || spans == 0 {
            return Err(Error::InvalidArgument("degree and span count must be positive".into()));
        }
        let mut knots = vec![0.0; degree];
        knots.extend((0..=spans).map(|i| i as f64 / spans as f64));
        knots.extend(std::iter::repeat_n(1.0, degree));
        Ok(BSplineBasis { degree, spans, knots })
    }

    /// Number of basis functions before boundary removal.
    pub fn len(&self) -> usize {
        self.spans + self.degree
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimension of the Dirichlet space.
    pub fn dof(&self) -> usize {
        self.len() - 2
    }

    /// Knot-span index `s` with `t_s ≤ x < t_{s+1}`; the last span is closed.
    pub fn find_span(&self, x: f64) -> usize {
        let p = self.degree;
        let last = p + self.spans - 1;
        if x >= 1.0 {
            return last;
        }
        let s = (x * self.spans as f64).floor() as usize + p;
        // guard against rounding at knots
        let mut s = s.clamp(p, last);
        while s > p && x < self.knots[s] {
            s -= 1;
        }
        while s < last && x >= self.knots[s + 1] {
            s += 1;
        }
        s
    }

    /// Values and first derivatives of the `η+1` functions nonzero on `span`,
    /// i.e. global indices `span-η ..= span`.
    pub fn eval_span(&self, span: usize, x: f64) -> (Vec<f64>, Vec<f64>) {
        let p = self.degree;
        let t = &self.knots;
        // triangular Cox–de Boor table; after the loop over degree p-1 we keep
        // the lower-degree values for the derivative
        let mut n = vec![0.0; p + 1];
        let mut left = vec![0.0; p + 1];
        let mut right = vec![0.0; p + 1];
        n[0] = 1.0;
        let mut lower = vec![1.0];
        for j in 1..=p {
            left[j] = x - t[span + 1 - j];
            right[j] = t[span + j] - x;
            let mut saved = 0.0;
            for r in 0..j {
                let temp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
            if j == p - 1 {
                lower = n[..p].to_vec();
            }
        }
        let mut d = vec![0.0; p + 1];
        // B'_{i,p} = p/(t_{i+p}-t_i) B_{i,p-1} - p/(t_{i+p+1}-t_{i+1}) B_{i+1,p-1}
        // lower[r] is B_{span-p+1+r, p-1}
        let pf = p as f64;
        for (r, dr) in d.iter_mut().enumerate() {
            let i = span - p + r;
            let mut v = 0.0;
            if r >= 1 {
                let den = t[i + p] - t[i];
                if den > 0.0 {
                    v += pf * lower[r - 1] / den;
                }
            }
            if r < p {
                let den = t[i + p + 1] - t[i + 1];
                if den > 0.0 {
                    v -= pf * lower[r] / den;
                }
            }
            *dr = v;
        }
        (n, d)
    }
}

/// Value (`deriv = 0`) or derivative (`deriv = 1`) of basis function `index`
/// (full space, before boundary removal) at `x ∈ [0, 1]`.
pub fn eval_bspline(basis: &BSplineBasis, index: usize, x: f64, deriv: u8) -> Result<f64> {
    if index >= basis.len() {
        return Err(Error::InvalidArgument(format!(
            "index {index} out of range 0..{}",
            basis.len()
        )));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfRange(x, 0.0, 1.0));
    }
    if deriv > 1 {
        return Err(Error::InvalidArgument("only deriv 0 or 1 is supported".into()));
    }
    let span = basis.find_span(x);
    let p = basis.degree;
    if index + p < span || index > span {
        return Ok(0.0);
    }
    let (v, d) = basis.eval_span(span, x);
    let r = index + p - span;
    Ok(if deriv == 0 { v[r] } else { d[r] })
}

/// Stiffness/mass pair of the Dirichlet Galerkin problem.
#[derive(Debug, Clone, PartialEq)]
pub struct GalerkinPencil {
    pub k: BandedMatrix,
    pub m: BandedMatrix,
    pub eta: usize,
    pub spans: usize,
}

impl GalerkinPencil {
    pub fn dim(&self) -> usize {
        self.k.dim()
    }

    /// Generalized eigenvalues of `(K, M)`, ascending.
    pub fn eigenvalues(&self) -> Result<EigenResult> {
        eig_gen_sym(&self.k.to_dense(), &self.m.to_dense())
    }

    /// Both matrices in the banded text format, `K` first.
    pub fn to_text(&self) -> String {
        let mut s = self.k.to_text();
        s.push_str(&self.m.to_text());
        s
    }
}

/// Galerkin pencil on the geometry `τ̂(s) = τ(a + (b-a)s)`:
/// `K_ij = ∫ p(τ̂) B_i' B_j' / τ̂' ds`, `M_ij = ∫ w(τ̂) B_i B_j τ̂' ds`,
/// with `q` contributing `∫ q(τ̂) B_i B_j τ̂' ds` to `K`.
pub fn assemble_iga(spec: &OperatorSpec, map: &GridMap, eta: usize, n: usize) -> Result<GalerkinPencil> {
    let basis = BSplineBasis::with_dof(eta, n)?;
    let (a, b) = (spec.a, spec.b);
    if (map.a - a).abs() > 1e-12 * a.abs().max(1.0) || (map.b - b).abs() > 1e-12 * b.abs().max(1.0) {
        return Err(Error::InvalidArgument(
            "map and operator live on different intervals".into(),
        ));
    }
    let (gx, gw) = gauss_legendre(eta + 1);
    let nf = basis.len();
    let nspans = basis.spans;
    let locals: Vec<(usize, Vec<f64>, Vec<f64>)> = (0..nspans)
        .into_par_iter()
        .map(|e| {
            let s0 = e as f64 / nspans as f64;
            let s1 = (e + 1) as f64 / nspans as f64;
            let half = 0.5 * (s1 - s0);
            let span = e + eta;
            let w = eta + 1;
            let mut kl = vec![0.0; w * w];
            let mut ml = vec![0.0; w * w];
            for (xq, wq) in gx.iter().zip(&gw) {
                let s = 0.5 * (s0 + s1) + half * xq;
                let x = a + (b - a) * s;
                let th = map.tau(x);
                let thp = (b - a) * map.tau_prime(x);
                let (v, d) = basis.eval_span(span, s);
                let kw = wq * half * spec.p(th) / thp;
                let mw = wq * half * thp;
                let qw = mw * spec.q(th);
                let ww = mw * spec.w(th);
                for r in 0..w {
                    for c in 0..w {
                        kl[r * w + c] += kw * d[r] * d[c] + qw * v[r] * v[c];
                        ml[r * w + c] += ww * v[r] * v[c];
                    }
                }
            }
            (span - eta, kl, ml)
        })
        .collect();
    let mut kb = BandedMatrix::zeros(n, eta);
    let mut mb = BandedMatrix::zeros(n, eta);
    let w = eta + 1;
    for (first, kl, ml) in locals {
        for r in 0..w {
            for c in 0..w {
                let (gi, gj) = (first + r, first + c);
                // drop the two boundary functions
                if gi == 0 || gj == 0 || gi == nf - 1 || gj == nf - 1 {
                    continue;
                }
                kb.add(gi - 1, gj - 1, kl[r * w + c]);
                mb.add(gi - 1, gj - 1, ml[r * w + c]);
            }
        }
    }
    check_banded_spd(&mb)?;
    Ok(GalerkinPencil {
        k: kb,
        m: mb,
        eta,
        spans: nspans,
    })
}

/// Banded Cholesky used only as a definiteness test.
fn check_banded_spd(m: &BandedMatrix) -> Result<()> {
    let n = m.dim();
    let bw = m.bandwidth();
    // l[i][c] stores L(i, i - bw + c)
    let mut l = vec![vec![0.0; bw + 1]; n];
    for i in 0..n {
        for j in i.saturating_sub(bw)..=i {
            let mut s = m.get(i, j);
            let lo = i.saturating_sub(bw).max(j.saturating_sub(bw));
            for k in lo..j {
                s -= l[i][k + bw - i] * l[j][k + bw - j];
            }
            if i == j {
                if !(s > 0.0) {
                    return Err(Error::NotPositiveDefinite(i));
                }
                l[i][bw] = s.sqrt();
            } else {
                l[i][j + bw - i] = s / l[j][bw];
            }
        }
    }
    Ok(())
}

/// Interior stiffness and mass stencils of the unit-interval, unit-coefficient
/// assembly, scaled to mesh size one: `k[j]`, `m[j]` for offsets `j = 0..=η`.
#[derive(Debug, Clone, PartialEq)]
pub struct IgaStencil {
    pub eta: usize,
    pub k: Vec<f64>,
    pub m: Vec<f64>,
}

impl IgaStencil {
    fn compute(eta: usize) -> Result<Self> {
        let n = 4 * eta + 8;
        let spec = OperatorSpec::new(0.0, 1.0, scalar_fn(|_| 1.0))?;
        let pencil = assemble_iga(&spec, &GridMap::identity(0.0, 1.0), eta, n)?;
        let h = 1.0 / pencil.spans as f64;
        let c = n / 2;
        let mut k = vec![0.0; eta + 1];
        let mut m = vec![0.0; eta + 1];
        for j in 0..=eta {
            k[j] = 0.5 * (pencil.k.get(c, c + j) + pencil.k.get(c, c - j)) * h;
            m[j] = 0.5 * (pencil.m.get(c, c + j) + pencil.m.get(c, c - j)) / h;
        }
        Ok(IgaStencil { eta, k, m })
    }

    /// `Σ k_j cos jθ / Σ m_j cos jθ`, numerator in the `sin²` form.
    pub fn symbol(&self, theta: f64) -> f64 {
        let num: f64 = -4.0
            * (1..=self.eta)
                .map(|j| {
                    let s = (0.5 * j as f64 * theta).sin();
                    self.k[j] * s * s
                })
                .sum::<f64>();
        let den: f64 = self.m[0]
            + 2.0
                * (1..=self.eta)
                    .map(|j| self.m[j] * (j as f64 * theta).cos())
                    .sum::<f64>();
        num / den
    }
}

/// Cached stencil for degree `eta`.
pub fn iga_stencil(eta: usize) -> Result<Arc<IgaStencil>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<IgaStencil>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(s) = cache.lock().expect("stencil cache poisoned").get(&eta) {
        return Ok(s.clone());
    }
    let s = Arc::new(IgaStencil::compute(eta)?);
    cache.lock().expect("stencil cache poisoned").insert(eta, s.clone());
    Ok(s)
}

/// IgA symbol factor `f_η(θ)`; closed forms for `η ≤ 2`, stencil ratio above.
pub fn iga_symbol_f(eta: usize, theta: f64) -> Result<f64> {
    match eta {
        0 => Err(Error::InvalidArgument("degree must be at least 1".into())),
        1 => {
            let s = (0.5 * theta).sin();
            Ok(12.0 * s * s / (2.0 + theta.cos()))
        }
        2 => {
            let (s1, s2) = ((0.5 * theta).sin(), theta.sin());
            let num = 4.0 * s1 * s1 + 2.0 * s2 * s2;
            Ok(20.0 * num / (33.0 + 26.0 * theta.cos() + (2.0 * theta).cos()))
        }
        _ => Ok(iga_stencil(eta)?.symbol(theta)),
    }
}

/// `f_η(π)`, the supremum of the IgA symbol factor.
pub fn iga_symbol_sup(eta: usize) -> Result<f64> {
    iga_symbol_f(eta, PI)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::EulerCauchyCase;

    #[test]
    fn hat_functions() {
        let b = BSplineBasis::with_dof(1, 3).unwrap();
        assert_eq!(b.spans, 4);
        assert!((eval_bspline(&b, 2, 0.5, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((eval_bspline(&b, 2, 0.375, 1).unwrap() - 4.0).abs() < 1e-12);
        assert!(eval_bspline(&b, 5, 0.5, 0).is_err());
        assert!(eval_bspline(&b, 1, 1.5, 0).is_err());
    }

    #[test]
    fn partition_of_unity_and_derivative_sum() {
        for p in 1..=6 {
            let b = BSplineBasis::with_dof(p, 20).unwrap();
            for k in 0..=200 {
                let x = k as f64 / 200.0;
                let s: f64 = (0..b.len()).map(|i| eval_bspline(&b, i, x, 0).unwrap()).sum();
                let ds: f64 = (0..b.len()).map(|i| eval_bspline(&b, i, x, 1).unwrap()).sum();
                assert!((s - 1.0).abs() < 1e-12, "p={p} x={x}");
                assert!(ds.abs() < 1e-9, "p={p} x={x} {ds}");
                for i in 0..b.len() {
                    assert!(eval_bspline(&b, i, x, 0).unwrap() >= -1e-15);
                }
            }
        }
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let b = BSplineBasis::with_dof(4, 12).unwrap();
        for i in 0..b.len() {
            for x in [0.13, 0.37, 0.61, 0.94] {
                let h = 1e-6;
                let fd = (eval_bspline(&b, i, x + h, 0).unwrap() - eval_bspline(&b, i, x - h, 0).unwrap()) / (2.0 * h);
                assert!((fd - eval_bspline(&b, i, x, 1).unwrap()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn continuity_across_knots() {
        let b = BSplineBasis::with_dof(2, 10).unwrap();
        for k in 1..b.spans {
            let x = k as f64 / b.spans as f64;
            for i in 0..b.len() {
                let l = eval_bspline(&b, i, x - 1e-13, 0).unwrap();
                let r = eval_bspline(&b, i, x, 0).unwrap();
                assert!((l - r).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn linear_elements_closed_form() {
        let n = 9;
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        let p = assemble_iga(&spec, &GridMap::identity(0.0, 1.0), 1, n).unwrap();
        let h = 1.0 / (n + 1) as f64;
        for i in 0..n {
            assert!((p.k.get(i, i) - 2.0 / h).abs() < 1e-10);
            assert!((p.m.get(i, i) - 4.0 * h / 6.0).abs() < 1e-14);
            if i + 1 < n {
                assert!((p.k.get(i, i + 1) + 1.0 / h).abs() < 1e-10);
                assert!((p.m.get(i, i + 1) - h / 6.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn linear_elements_dispersion() {
        let n = 50;
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        let p = assemble_iga(&spec, &GridMap::identity(0.0, 1.0), 1, n).unwrap();
        let ev = p.eigenvalues().unwrap().values;
        let w = ((n + 1) * (n + 1)) as f64;
        for (k, v) in ev.iter().enumerate() {
            let f = iga_symbol_f(1, (k + 1) as f64 * PI / (n + 1) as f64).unwrap();
            assert!((v / w / f - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn stiffness_annihilates_constants() {
        let spec = OperatorSpec::laplacian(0.0, 1.0).unwrap();
        for eta in [2usize, 3, 5] {
            let p = assemble_iga(&spec, &GridMap::identity(0.0, 1.0), eta, 40).unwrap();
            for i in eta + 1..40 - eta - 1 {
                assert!(p.k.row_sum(i).abs() < 1e-9 * p.k.get(i, i));
            }
            assert!(p.k.is_symmetric(1e-12) && p.m.is_symmetric(1e-12));
        }
    }

    #[test]
    fn symbol_closed_forms_and_stencils_agree() {
        assert!((iga_symbol_f(1, PI).unwrap() - 12.0).abs() < 1e-12);
        assert!((iga_symbol_f(2, PI).unwrap() - 10.0).abs() < 1e-12);
        for eta in [1usize, 2] {
            let s = iga_stencil(eta).unwrap();
            for th in [0.1, 1.0, 2.5, PI] {
                assert!((s.symbol(th) - iga_symbol_f(eta, th).unwrap()).abs() < 1e-10);
            }
        }
        let th = 1e-2;
        assert!((iga_symbol_f(3, th).unwrap() / (th * th) - 1.0).abs() < 1e-4);
        assert!((iga_symbol_f(5, PI).unwrap() - 9.86975).abs() < 1e-4);
        assert!((iga_symbol_f(10, PI).unwrap() - 9.86960).abs() < 1e-4);
    }

    #[test]
    fn euler_cauchy_pencil_is_definite() {
        let c = EulerCauchyCase::new(1.0).unwrap();
        let p = assemble_iga(&c.spec(), &c.liouville_map(), 3, 60).unwrap();
        assert_eq!(p.dim(), 60);
        let ev = p.eigenvalues().unwrap().values;
        assert!(ev[0] > 0.0);
        assert!((ev[0] / c.exact_eigenvalue(1) - 1.0).abs() < 1e-6);
        let txt = p.to_text();
        assert_eq!(txt.lines().filter(|l| *l == "60 3").count(), 2);
    }
}
