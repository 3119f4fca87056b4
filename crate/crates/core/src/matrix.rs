//! Band and dense real matrix storage.

use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

/// Square matrix with half-bandwidth `bw`; entry `(i, j)` lives at
/// `data[i * (2 bw + 1) + (j + bw - i)]`.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandedMatrix {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn from_rows(n: usize, bw: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * (2 * bw + 1) {
            return Err(Error::DimensionMismatch(data.len(), n * (2 * bw + 1)));
        }
        Ok(BandedMatrix { n, bw, data })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn width(&self) -> usize {
        2 * self.bw + 1
    }

    /// Band entries of row `i`, columns `i-bw ..= i+bw` (out-of-range slots are zero).
    pub fn band_row(&self, i: usize) -> &[f64] {
        let w = self.width();
        &self.data[i * w..(i + 1) * w]
    }

    pub fn band_row_mut(&mut self, i: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.data[i * w..(i + 1) * w]
    }

    pub fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i.abs_diff(j) <= self.bw
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[i * self.width() + j + self.bw - i]
        } else {
            0.0
        }
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band {}", self.bw);
        let w = self.width();
        self.data[i * w + j + self.bw - i] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band {}", self.bw);
        let w = self.width();
        self.data[i * w + j + self.bw - i] += v;
    }

    pub fn scaled(&self, s: f64) -> Self {
        BandedMatrix {
            n: self.n,
            bw: self.bw,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for i in 0..self.n {
            for j in i + 1..(i + self.bw + 1).min(self.n) {
                if (self.get(i, j) - self.get(j, i)).abs() > rel_tol * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Smallest bandwidth that holds every nonzero entry.
    pub fn effective_bandwidth(&self) -> usize {
        let mut b = 0;
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n) {
                if self.get(i, j) != 0.0 {
                    b = b.max(i.abs_diff(j));
                }
            }
        }
        b
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.n);
        for i in 0..self.n {
            for j in i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n) {
                d[(i, j)] = self.get(i, j);
            }
        }
        d
    }

    pub fn row_sum(&self, i: usize) -> f64 {
        self.band_row(i).iter().sum()
    }

    /// Header `n eta`, then one line of `2 eta + 1` band entries per row.
    pub fn write_text<W: Write>(&self, out: &mut W) -> std::io::Result<()> {
        writeln!(out, "{} {}", self.n, self.bw)?;
        let mut line = String::new();
        for i in 0..self.n {
            line.clear();
            for (k, v) in self.band_row(i).iter().enumerate() {
                if k > 0 {
                    line.push(' ');
                }
                write!(line, "{v:.17e}").expect("writing to a String cannot fail");
            }
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("in-memory write");
        String::from_utf8(buf).expect("ascii output")
    }

    /// Reads one matrix in the format produced by [`write_text`](Self::write_text).
    pub fn read_text<R: BufRead>(lines: &mut std::io::Lines<R>) -> Result<Self> {
        let mut next = || -> Result<String> {
            loop {
                match lines.next() {
                    Some(Ok(l)) if l.trim().is_empty() => continue,
                    Some(Ok(l)) => return Ok(l),
                    Some(Err(e)) => return Err(Error::Parse(e.to_string())),
                    None => return Err(Error::Parse("unexpected end of input".into())),
                }
            }
        };
        let header = next()?;
        let mut it = header.split_whitespace();
        let parse_usize = |s: Option<&str>| -> Result<usize> {
            s.ok_or_else(|| Error::Parse("short header".into()))?
                .parse()
                .map_err(|e| Error::Parse(format!("bad header: {e}")))
        };
        let n = parse_usize(it.next())?;
        let bw = parse_usize(it.next())?;
        let mut m = BandedMatrix::zeros(n, bw);
        for i in 0..n {
            let line = next()?;
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("row {i}: {e}"))))
                .collect::<Result<_>>()?;
            if vals.len() != 2 * bw + 1 {
                return Err(Error::Parse(format!(
                    "row {i}: expected {} entries, got {}",
                    2 * bw + 1,
                    vals.len()
                )));
            }
            m.band_row_mut(i).copy_from_slice(&vals);
        }
        Ok(m)
    }
}

/// Row-major dense square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::DimensionMismatch(r.len(), n));
            }
            m.row_mut(i).copy_from_slice(r);
        }
        Ok(m)
    }

    pub fn from_fn<F: Fn(usize, usize) -> f64>(n: usize, f: F) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        let scale = self
            .data
            .iter()
            .fold(0.0f64, |m, v| m.max(v.abs()))
            .max(f64::MIN_POSITIVE);
        (0..self.n).all(|i| (i + 1..self.n).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= rel_tol * scale))
    }

    /// Largest `|i - j|` with a nonzero entry.
    pub fn bandwidth(&self) -> usize {
        let mut b = 0;
        for i in 0..self.n {
            for j in 0..self.n {
                if self[(i, j)] != 0.0 {
                    b = b.max(i.abs_diff(j));
                }
            }
        }
        b
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::BufRead;

    #[test]
    fn band_access_and_dense() {
        let mut m = BandedMatrix::zeros(4, 1);
        for i in 0..4 {
            m.set(i, i, 2.0);
            if i > 0 {
                m.set(i, i - 1, -1.0);
                m.set(i - 1, i, -1.0);
            }
        }
        assert_eq!(m.get(0, 3), 0.0);
        assert!(m.is_symmetric(0.0));
        assert_eq!(m.effective_bandwidth(), 1);
        let d = m.to_dense();
        assert_eq!(d[(2, 1)], -1.0);
        assert_eq!(d.bandwidth(), 1);
        assert_eq!(m.row_sum(1), 0.0);
    }

    #[test]
    fn text_round_trip() {
        let mut m = BandedMatrix::zeros(3, 1);
        m.set(0, 0, 1.5);
        m.set(1, 0, -0.1);
        m.set(2, 1, 1e-300);
        let txt = m.to_text();
        assert!(txt.starts_with("3 1\n"));
        let mut lines = std::io::Cursor::new(txt).lines();
        let back = BandedMatrix::read_text(&mut lines).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn text_rejects_short_rows() {
        let mut lines = std::io::Cursor::new("2 1\n1 2 3\n1 2\n").lines();
        assert!(BandedMatrix::read_text(&mut lines).is_err());
    }
}
