use std::f64::consts::PI;
use std::io::Write;

use anyhow::{bail, Context};
use glt_core::experiment::{
    exact_report, fd_eigenvalues, fd_matrix, figure_defaults, fmt_num, grid_map, iga_eigenvalues, run_figure_data,
    run_table, scheme_symbol, table_defaults, ExperimentConfig, Scheme, TableOutput,
};
use glt_core::iga::assemble_iga;
use glt_core::metrics::{detect_outliers, local_and_max_errors, SpectrumReport};
use glt_core::problem::EulerCauchyCase;
use glt_core::symbol::{euler_cauchy_phi, rearrangement_by_sampling, sample_rearranged};
use serde_json::json;

use crate::{load_config, Common};

/// First entry of each list: the single-run commands work on one case.
struct Case {
    scheme: Scheme,
    alpha: f64,
    eta: usize,
    n: usize,
    grid: glt_core::experiment::GridKind,
}

fn single(c: &ExperimentConfig) -> Case {
    Case {
        scheme: c.scheme,
        alpha: c.alpha[0],
        eta: c.eta[0],
        n: c.n[0],
        grid: c.grid[0],
    }
}

fn emit(t: &TableOutput, c: &ExperimentConfig) -> anyhow::Result<()> {
    match &c.output_dir {
        Some(dir) => {
            for p in t.write_to(dir)? {
                println!("{}", p.display());
            }
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(t.to_csv().as_bytes())?;
        }
    }
    Ok(())
}

pub fn assemble(common: &Common) -> anyhow::Result<()> {
    let c = load_config(ExperimentConfig::default(), common)?;
    let k = single(&c);
    let text = match k.scheme {
        Scheme::Fd => fd_matrix(k.alpha, k.n, k.eta, k.grid)?.to_text(),
        Scheme::Iga => {
            let case = EulerCauchyCase::new(k.alpha)?;
            assemble_iga(&case.spec(), &grid_map(&case, k.grid), k.eta, k.n)?.to_text()
        }
    };
    match &c.output_dir {
        Some(dir) => {
            std::fs::create_dir_all(dir)?;
            let p = dir.join(format!("{}_eta{}_n{}_{}.txt", k.scheme, k.eta, k.n, k.grid));
            std::fs::write(&p, text).with_context(|| p.display().to_string())?;
            println!("{}", p.display());
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn eigenvalues(k: &Case) -> anyhow::Result<glt_core::eigen::EigenResult> {
    Ok(match k.scheme {
        Scheme::Fd => fd_eigenvalues(k.alpha, k.n, k.eta, k.grid)?,
        Scheme::Iga => iga_eigenvalues(k.alpha, k.n, k.eta, k.grid)?,
    })
}

pub fn eig(common: &Common) -> anyhow::Result<()> {
    let c = load_config(ExperimentConfig::default(), common)?;
    let k = single(&c);
    let e = eigenvalues(&k)?;
    let raw = SpectrumReport::from_eigen(&e);
    let w = raw.weighted(k.n, 2.0);
    let flags = detect_outliers(&w, &scheme_symbol(k.scheme, k.alpha, k.eta, k.grid)?);
    let mut t = TableOutput::new("eig", &["k", "eigenvalue", "weighted_eigenvalue", "outlier"]);
    for (i, ((v, wv), f)) in raw.values.iter().zip(&w.values).zip(&flags).enumerate() {
        t.push(vec![(i + 1).to_string(), fmt_num(*v), fmt_num(*wv), f.to_string()]);
    }
    t.summary = json!({
        "scheme": k.scheme.to_string(), "alpha": k.alpha, "eta": k.eta, "n": k.n, "grid": k.grid.to_string(),
        "method": format!("{:?}", e.method), "max_imag": e.max_imag, "imag_flag": e.flagged,
        "outliers": flags.iter().filter(|&&f| f).count(),
    });
    emit(&t, &c)
}

pub fn symbol(common: &Common, samples: usize) -> anyhow::Result<()> {
    if samples < 2 {
        bail!("--samples must be at least 2");
    }
    let c = load_config(ExperimentConfig::default(), common)?;
    let k = single(&c);
    let s = scheme_symbol(k.scheme, k.alpha, k.eta, k.grid)?;
    let case = EulerCauchyCase::new(k.alpha)?;
    let mut t = TableOutput::new("symbol", &["x", "theta", "omega"]);
    let m = (samples - 1) as f64;
    for i in 0..samples {
        let x = case.a() + (case.b() - case.a()) * i as f64 / m;
        for j in 0..samples {
            let th = PI * j as f64 / m;
            t.push(vec![fmt_num(x), fmt_num(th), fmt_num(s.eval(x, th))]);
        }
    }
    let (lo, hi) = s.range();
    t.summary = json!({
        "scheme": k.scheme.to_string(), "alpha": k.alpha, "eta": k.eta, "grid": k.grid.to_string(),
        "range": [lo, hi],
    });
    emit(&t, &c)
}

pub fn rearrange(common: &Common) -> anyhow::Result<()> {
    let c = load_config(ExperimentConfig::default(), common)?;
    c.validate_rearrangement()?;
    let k = single(&c);
    let r = c.resolution_for(k.n);
    let s = scheme_symbol(k.scheme, k.alpha, k.eta, k.grid)?;
    let q = rearrangement_by_sampling(&s, r)?;
    // the analytic rearrangement exists for the 3-point uniform case only
    let analytic = if k.scheme == Scheme::Fd && k.eta == 1 && k.grid == glt_core::experiment::GridKind::Uniform {
        Some((
            sample_rearranged(&euler_cauchy_phi(k.alpha)?.rearrangement(), k.n),
            euler_cauchy_phi(k.alpha)?.fallback,
        ))
    } else {
        None
    };
    let mut t = TableOutput::new("rearrange", &["k", "x", "rearranged_sample", "analytic_rearranged"]);
    let m = (k.n + 1) as f64;
    for i in 1..=k.n {
        let a = analytic.as_ref().map_or("nan".to_string(), |(v, _)| fmt_num(v[i - 1]));
        t.push(vec![
            i.to_string(),
            fmt_num(i as f64 / m),
            fmt_num(q.eval(i as f64 / m)),
            a,
        ]);
    }
    t.summary = json!({
        "scheme": k.scheme.to_string(), "alpha": k.alpha, "eta": k.eta, "n": k.n, "r": r,
        "grid": k.grid.to_string(),
        "phi_fallback": analytic.as_ref().map(|(_, f)| *f),
    });
    emit(&t, &c)
}

pub fn compare(common: &Common) -> anyhow::Result<()> {
    let c = load_config(ExperimentConfig::default(), common)?;
    let k = single(&c);
    let e = eigenvalues(&k)?;
    let raw = SpectrumReport::from_eigen(&e);
    let exact = exact_report(k.alpha, raw.dim())?;
    let rep = local_and_max_errors(&raw, &exact)?;
    let mut t = TableOutput::new("compare", &["k", "eigenvalue", "exact", "relative_error", "provenance"]);
    for i in 0..raw.dim() {
        t.push(vec![
            (i + 1).to_string(),
            fmt_num(raw.values[i]),
            fmt_num(exact.values[i]),
            fmt_num(rep.local_errors[i]),
            "computed-exact-ref".into(),
        ]);
    }
    t.summary = json!({
        "scheme": k.scheme.to_string(), "alpha": k.alpha, "eta": k.eta, "n": k.n, "grid": k.grid.to_string(),
        "max_error": rep.max_error, "kbar": rep.argmax, "kbar_over_n": rep.argmax_ratio,
    });
    emit(&t, &c)
}

pub fn table(id: u32, common: &Common) -> anyhow::Result<()> {
    let c = load_config(table_defaults(id)?, common)?;
    emit(&run_table(id, &c)?, &c)
}

pub fn figure(id: u32, common: &Common) -> anyhow::Result<()> {
    let c = load_config(figure_defaults(id)?, common)?;
    emit(&run_figure_data(id, &c)?, &c)
}
