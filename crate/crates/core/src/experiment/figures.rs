//! Plot series for Figures 2-6. No rendering; one CSV per figure.

use rayon::prelude::*;
use serde_json::json;

use super::config::{ExperimentConfig, GridKind, Reference, Scheme};
use super::output::{fmt_num, TableOutput};
use super::{exact_report, fd_eigenvalues, fine_mesh_reference, iga_eigenvalues, scheme_symbol};
use crate::error::{Error, Result};
use crate::metrics::{
    detect_outliers, local_and_max_errors, numerical_and_analytic_errors, weyl_law_euler_cauchy, SpectrumReport,
};
use crate::problem::EulerCauchyCase;
use crate::symbol::{euler_cauchy_phi, rearrangement_by_sampling, sample_rearranged, symbol_fd, Quantile};

pub const FIGURE_IDS: [u32; 5] = [2, 3, 4, 5, 6];

pub fn figure_defaults(id: u32) -> Result<ExperimentConfig> {
    let mut c = ExperimentConfig::default();
    match id {
        2 => {
            c.n = vec![100];
            c.r = vec![1000];
        }
        3 => {
            c.alpha = vec![1.2];
            c.n = vec![5000];
        }
        4 => {
            c.eta = vec![1, 15];
            c.n = vec![1000];
            c.grid = vec![GridKind::Uniform, GridKind::Liouville];
        }
        5 => {
            c.n = vec![100];
            c.r = vec![100, 500, 800];
            c.reference = Reference::FineMesh;
        }
        6 => {
            c.scheme = Scheme::Iga;
            c.eta = vec![1, 10];
            c.n = vec![100];
            c.grid = vec![GridKind::Uniform, GridKind::Liouville];
        }
        _ => return Err(Error::Config(format!("unknown figure id {id} (2-6)"))),
    }
    Ok(c)
}

fn single<T: Copy>(name: &str, v: &[T]) -> Result<T> {
    match v {
        [x] => Ok(*x),
        _ => Err(Error::Config(format!("figure takes a single {name}"))),
    }
}

pub fn run_figure_data(id: u32, c: &ExperimentConfig) -> Result<TableOutput> {
    c.validate()?;
    match id {
        2 => figure2(c),
        3 => figure3(c),
        4 | 6 => scheme_figure(id, c),
        5 => figure5(c),
        _ => Err(Error::Config(format!("unknown figure id {id} (2-6)"))),
    }
}

/// Weighted 3-point eigenvalues against `ω*_r` sampled on `k/(n+1)`.
fn figure2(c: &ExperimentConfig) -> Result<TableOutput> {
    let alpha = single("alpha", &c.alpha)?;
    let n = single("n", &c.n)?;
    c.validate_rearrangement()?;
    let r = c.resolution_for(n);
    let case = EulerCauchyCase::new(alpha)?;
    let symbol = symbol_fd(&case.spec(), &super::grid_map(&case, GridKind::Uniform), 1)?;
    let sampled = rearrangement_by_sampling(&symbol, r)?;
    let phi = euler_cauchy_phi(alpha)?;
    let analytic = sample_rearranged(&phi.rearrangement(), n);
    let eig = SpectrumReport::from_eigen(&fd_eigenvalues(alpha, n, 1, GridKind::Uniform)?).weighted(n, 2.0);
    let exact = exact_report(alpha, n)?.weighted(n, 2.0);
    let m = (n + 1) as f64;
    let mut t = TableOutput::new(
        "figure2",
        &[
            "k",
            "k_over_n",
            "weighted_eigenvalue",
            "rearranged_sample",
            "analytic_rearranged",
            "exact_weighted",
        ],
    );
    let mut sup_dist = 0.0f64;
    for k in 1..=n {
        let s = sampled.eval(k as f64 / m);
        sup_dist = sup_dist.max((eig.values[k - 1] - s).abs());
        t.push(vec![
            k.to_string(),
            fmt_num(k as f64 / n as f64),
            fmt_num(eig.values[k - 1]),
            fmt_num(s),
            fmt_num(analytic[k - 1]),
            fmt_num(exact.values[k - 1]),
        ]);
    }
    t.summary = json!({
        "figure": 2, "alpha": alpha, "n": n, "r": r,
        "sup_distance": sup_dist,
        "relative_sup_distance": sup_dist / eig.values.last().copied().unwrap_or(1.0).abs().max(f64::MIN_POSITIVE),
        "phi_fallback": phi.fallback,
        "provenance": "computed-exact-ref",
    });
    Ok(t)
}

/// Weighted 3-point eigenvalues against the weighted exact spectrum.
fn figure3(c: &ExperimentConfig) -> Result<TableOutput> {
    let alpha = single("alpha", &c.alpha)?;
    let n = single("n", &c.n)?;
    let raw = SpectrumReport::from_eigen(&fd_eigenvalues(alpha, n, 1, GridKind::Uniform)?);
    let exact = exact_report(alpha, n)?;
    let err = local_and_max_errors(&raw, &exact)?;
    let phi = euler_cauchy_phi(alpha)?;
    let q = phi.rearrangement();
    let law = weyl_law_euler_cauchy();
    let m = (n + 1) as f64;
    let ratio: Vec<f64> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let x = k as f64 / m;
            (q.quantile(x) / law.zeta_star(x) - 1.0).abs()
        })
        .collect();
    let w = 1.0 / (m * m);
    let mut t = TableOutput::new(
        "figure3",
        &[
            "k",
            "k_over_n",
            "weighted_eigenvalue",
            "exact_weighted",
            "relative_error",
            "symbol_ratio_error",
        ],
    );
    for k in 1..=n {
        t.push(vec![
            k.to_string(),
            fmt_num(k as f64 / n as f64),
            fmt_num(raw.values[k - 1] * w),
            fmt_num(exact.values[k - 1] * w),
            fmt_num(err.local_errors[k - 1]),
            fmt_num(ratio[k - 1]),
        ]);
    }
    t.summary = json!({
        "figure": 3, "alpha": alpha, "n": n,
        "max_error": err.max_error, "kbar": err.argmax,
        "phi_fallback": phi.fallback,
        "provenance": "computed-exact-ref",
    });
    Ok(t)
}

/// Weighted eigenvalues of FD (figure 4) or IgA (figure 6) on both grids
/// against the weighted exact spectrum, with outliers flagged.
fn scheme_figure(id: u32, c: &ExperimentConfig) -> Result<TableOutput> {
    let want = if id == 4 { Scheme::Fd } else { Scheme::Iga };
    if c.scheme != want {
        return Err(Error::Config(format!("figure {id} requires scheme = {want}")));
    }
    let alpha = single("alpha", &c.alpha)?;
    let series: Vec<(usize, usize, GridKind)> = c
        .eta_n_pairs()
        .into_iter()
        .flat_map(|(e, n)| c.grid.iter().map(move |&g| (e, n, g)))
        .collect();
    let computed: Vec<(SpectrumReport, SpectrumReport)> = series
        .par_iter()
        .map(|&(eta, n, g)| {
            let eig = match want {
                Scheme::Fd => fd_eigenvalues(alpha, n, eta, g)?,
                Scheme::Iga => iga_eigenvalues(alpha, n, eta, g)?,
            };
            let w = SpectrumReport::from_eigen(&eig).weighted(n, 2.0);
            let flags = detect_outliers(&w, &scheme_symbol(want, alpha, eta, g)?);
            Ok((w.with_outliers(flags), exact_report(alpha, n)?.weighted(n, 2.0)))
        })
        .collect::<Result<_>>()?;
    let mut t = TableOutput::new(
        format!("figure{id}"),
        &[
            "scheme",
            "eta",
            "n",
            "grid",
            "k",
            "k_over_n",
            "weighted_eigenvalue",
            "exact_weighted",
            "outlier",
        ],
    );
    let mut outliers = Vec::new();
    for (&(eta, n, g), (w, ex)) in series.iter().zip(&computed) {
        outliers.push(json!({ "eta": eta, "n": n, "grid": g.to_string(), "outliers": w.outlier_count() }));
        for k in 1..=w.dim() {
            t.push(vec![
                want.to_string(),
                eta.to_string(),
                n.to_string(),
                g.to_string(),
                k.to_string(),
                fmt_num(k as f64 / n as f64),
                fmt_num(w.values[k - 1]),
                fmt_num(ex.values[k - 1]),
                w.outlier_flags[k - 1].to_string(),
            ]);
        }
    }
    t.summary = json!({
        "figure": id, "alpha": alpha, "series": outliers,
        "provenance": "computed-exact-ref",
    });
    Ok(t)
}

/// Numerical errors against a reference spectrum and analytic errors of
/// `ω*_r` for each resolution `r`.
fn figure5(c: &ExperimentConfig) -> Result<TableOutput> {
    let alpha = single("alpha", &c.alpha)?;
    let n = single("n", &c.n)?;
    c.validate_rearrangement()?;
    let rs = if c.r.is_empty() {
        vec![c.resolution_for(n)]
    } else {
        c.r.clone()
    };
    let (reference, prov) = match c.reference {
        Reference::Exact => (exact_report(alpha, n)?, "computed-exact-ref"),
        Reference::FineMesh => {
            if c.n_fine < n {
                return Err(Error::Config(format!("n_fine = {} must be at least n = {n}", c.n_fine)));
            }
            (
                SpectrumReport::new(fine_mesh_reference(alpha, c.n_fine)?),
                "computed-fine-mesh-ref",
            )
        }
    };
    let eig = SpectrumReport::from_eigen(&fd_eigenvalues(alpha, n, 1, GridKind::Uniform)?);
    let case = EulerCauchyCase::new(alpha)?;
    let symbol = symbol_fd(&case.spec(), &super::grid_map(&case, GridKind::Uniform), 1)?;
    let m = (n + 1) as f64;
    let per_r: Vec<_> = rs
        .par_iter()
        .map(|&r| {
            let rearr = rearrangement_by_sampling(&symbol, r)?;
            let samples: Vec<f64> = (1..=n).map(|k| rearr.eval(k as f64 / m)).collect();
            numerical_and_analytic_errors(&eig, &reference, &samples)
        })
        .collect::<Result<_>>()?;
    let mut t = TableOutput::new(
        "figure5",
        &["r", "k", "k_over_n", "numerical_error", "analytic_error", "provenance"],
    );
    let mut argmax = Vec::new();
    for (&r, rep) in rs.iter().zip(&per_r) {
        let num = rep
            .numerical_errors
            .as_deref()
            .expect("filled by numerical_and_analytic_errors");
        let ana = rep
            .analytic_errors
            .as_deref()
            .expect("filled by numerical_and_analytic_errors");
        let mut best = (0, f64::NEG_INFINITY);
        for k in 1..=n {
            let gap = (num[k - 1] - ana[k - 1]).abs();
            if gap > best.1 {
                best = (k, gap);
            }
            t.push(vec![
                r.to_string(),
                k.to_string(),
                fmt_num(k as f64 / n as f64),
                fmt_num(num[k - 1]),
                fmt_num(ana[k - 1]),
                prov.into(),
            ]);
        }
        argmax.push(json!({ "r": r, "max_gap_k": best.0, "max_gap": best.1 }));
    }
    t.summary = json!({
        "figure": 5, "alpha": alpha, "n": n,
        "reference": c.reference.to_string(), "n_fine": c.n_fine,
        "gaps": argmax,
    });
    Ok(t)
}
