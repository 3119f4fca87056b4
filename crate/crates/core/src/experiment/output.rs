//! CSV tables and JSON summaries.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

/// Column-oriented result with a JSON summary.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableOutput {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub summary: Value,
    /// Wall-clock timings; kept apart so the CSV and summary stay byte-stable.
    #[serde(skip)]
    pub timings: Vec<(String, f64)>,
}

pub fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{v:.10e}")
    }
}

impl TableOutput {
    pub fn new(name: impl Into<String>, header: &[&str]) -> Self {
        TableOutput {
            name: name.into(),
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
            summary: Value::Null,
            timings: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        assert_eq!(row.len(), self.header.len(), "row width for {}", self.name);
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        let esc = |f: &str| {
            if f.contains(',') || f.contains('"') {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        };
        let line = |fields: &[String]| fields.iter().map(|f| esc(f)).collect::<Vec<_>>().join(",");
        writeln!(s, "{}", line(&self.header)).expect("string write");
        for r in &self.rows {
            writeln!(s, "{}", line(r)).expect("string write");
        }
        s
    }

    pub fn summary_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.summary).expect("summary is plain JSON");
        s.push('\n');
        s
    }

    pub fn timings_json(&self) -> String {
        let map: serde_json::Map<String, Value> =
            self.timings.iter().map(|(k, v)| (k.clone(), Value::from(*v))).collect();
        let mut s = serde_json::to_string_pretty(&Value::Object(map)).expect("plain JSON");
        s.push('\n');
        s
    }

    /// Writes `<name>.csv`, `<name>.json` and `<name>.timing.json` into `dir`.
    pub fn write_to(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        std::fs::create_dir_all(dir).map_err(|e| Error::Config(format!("{}: {e}", dir.display())))?;
        let files = [
            (dir.join(format!("{}.csv", self.name)), self.to_csv()),
            (dir.join(format!("{}.json", self.name)), self.summary_json()),
            (dir.join(format!("{}.timing.json", self.name)), self.timings_json()),
        ];
        let mut out = Vec::new();
        for (p, body) in files {
            std::fs::write(&p, body).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            out.push(p);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_layout() {
        let mut t = TableOutput::new("t", &["a", "b"]);
        t.push(vec!["1".into(), "x,y".into()]);
        assert_eq!(t.to_csv(), "a,b\n1,\"x,y\"\n");
        assert_eq!(fmt_num(f64::INFINITY), "inf");
        assert_eq!(fmt_num(0.5), "5.0000000000e-1");
    }
}
