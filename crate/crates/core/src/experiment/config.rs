//! Flat `key = value` experiment configuration.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Fd,
    Iga,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridKind {
    Uniform,
    Liouville,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reference {
    Exact,
    FineMesh,
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Fd => "fd",
            Scheme::Iga => "iga",
        })
    }
}

impl fmt::Display for GridKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GridKind::Uniform => "uniform",
            GridKind::Liouville => "liouville",
        })
    }
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reference::Exact => "exact",
            Reference::FineMesh => "fine-mesh",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fd" => Ok(Scheme::Fd),
            "iga" => Ok(Scheme::Iga),
            _ => Err(Error::Config(format!("unknown scheme '{s}' (fd | iga)"))),
        }
    }
}

impl FromStr for GridKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GridKind::Uniform),
            "liouville" | "non-uniform" => Ok(GridKind::Liouville),
            _ => Err(Error::Config(format!("unknown grid '{s}' (uniform | liouville)"))),
        }
    }
}

impl FromStr for Reference {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Reference::Exact),
            "fine-mesh" => Ok(Reference::FineMesh),
            _ => Err(Error::Config(format!("unknown reference '{s}' (exact | fine-mesh)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub scheme: Scheme,
    pub eta: Vec<usize>,
    pub n: Vec<usize>,
    pub alpha: Vec<f64>,
    /// Eigenvalue indices reported by per-k tables.
    pub k: Vec<usize>,
    pub grid: Vec<GridKind>,
    /// Rearrangement resolutions; empty means `max(1000, n)`.
    pub r: Vec<usize>,
    pub reference: Reference,
    /// `n'` for the fine-mesh reference.
    pub n_fine: usize,
    /// Dimension for the hypercube Laplacian.
    pub d: usize,
    pub output_dir: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            scheme: Scheme::Fd,
            eta: vec![1],
            n: vec![100],
            alpha: vec![1.0],
            k: vec![1],
            grid: vec![GridKind::Uniform],
            r: vec![],
            reference: Reference::Exact,
            n_fine: 10_000,
            d: 2,
            output_dir: None,
        }
    }
}

fn parse_list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    let items: Vec<&str> = v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    if items.is_empty() {
        return Err(Error::Config(format!("{key}: empty list")));
    }
    items
        .into_iter()
        .map(|s| {
            // allow 1e4-style integers
            s.parse::<T>().or_else(|e| {
                let f: f64 = s
                    .parse()
                    .map_err(|_| Error::Config(format!("{key}: cannot parse '{s}': {e}")))?;
                format!("{}", f as u64)
                    .parse::<T>()
                    .map_err(|e| Error::Config(format!("{key}: cannot parse '{s}': {e}")))
            })
        })
        .collect()
}

fn parse_one<T: FromStr>(key: &str, v: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    let mut l = parse_list::<T>(key, v)?;
    if l.len() != 1 {
        return Err(Error::Config(format!("{key}: expected a single value")));
    }
    Ok(l.remove(0))
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 11] = [
        "scheme",
        "eta",
        "n",
        "alpha",
        "k",
        "grid",
        "r",
        "reference",
        "n_fine",
        "d",
        "output_dir",
    ];

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key.trim() {
            "scheme" => self.scheme = value.parse()?,
            "eta" => self.eta = parse_list("eta", value)?,
            "n" => self.n = parse_list("n", value)?,
            "alpha" => self.alpha = parse_list("alpha", value)?,
            "k" => self.k = parse_list("k", value)?,
            "grid" => {
                self.grid = if value == "both" {
                    vec![GridKind::Uniform, GridKind::Liouville]
                } else {
                    value.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?
                }
            }
            "r" => self.r = parse_list("r", value)?,
            "reference" => self.reference = value.parse()?,
            "n_fine" => self.n_fine = parse_one("n_fine", value)?,
            "d" => self.d = parse_one("d", value)?,
            "output_dir" => self.output_dir = Some(PathBuf::from(value)),
            other => return Err(Error::Config(format!("unknown key '{other}'"))),
        }
        Ok(())
    }

    /// Apply one `key=value` assignment.
    pub fn apply_override(&mut self, assignment: &str) -> Result<()> {
        let (k, v) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got '{assignment}'")))?;
        self.set(k, v)
    }

    /// Apply every non-comment line of `text` on top of `self`.
    pub fn merge_str(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.apply_override(line)
                .map_err(|e| Error::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn parse_str(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.merge_str(text)?;
        c.validate()?;
        Ok(c)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        self.merge_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n.contains(&0) {
            return Err(Error::Config("n entries must be positive".into()));
        }
        if self.eta.contains(&0) {
            return Err(Error::Config("eta entries must be positive".into()));
        }
        if self.alpha.iter().any(|&a| !(a > 0.0)) {
            return Err(Error::Config("alpha entries must be positive".into()));
        }
        if self.k.contains(&0) {
            return Err(Error::Config("k entries must be positive".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Config("grid list is empty".into()));
        }
        if self.d == 0 {
            return Err(Error::Config("d must be positive".into()));
        }
        Ok(())
    }

    /// Rearrangement resolutions must dominate every requested `n`.
    pub fn validate_rearrangement(&self) -> Result<()> {
        let nmax = self.n.iter().copied().max().unwrap_or(0);
        if let Some(&r) = self.r.iter().find(|&&r| r < nmax) {
            return Err(Error::Config(format!("r = {r} must be at least max(n) = {nmax}")));
        }
        Ok(())
    }

    /// `r` if given, else `max(1000, n)`.
    pub fn resolution_for(&self, n: usize) -> usize {
        self.r.first().copied().unwrap_or(n.max(1000))
    }

    /// `(eta, n)` pairs: zipped when both lists have equal length, otherwise
    /// the product.
    pub fn eta_n_pairs(&self) -> Vec<(usize, usize)> {
        if self.eta.len() == self.n.len() {
            self.eta.iter().copied().zip(self.n.iter().copied()).collect()
        } else {
            self.eta
                .iter()
                .flat_map(|&e| self.n.iter().map(move |&n| (e, n)))
                .collect()
        }
    }
}
