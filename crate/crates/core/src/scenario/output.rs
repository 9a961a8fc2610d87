//! Plain-text datasets: `#` metadata lines, then comma-separated rows with
//! 17 significant digits.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const TOOL_VERSION: &str = concat!("dsp-soliton ", env!("CARGO_PKG_VERSION"));

/// Hex SHA-256 of the resolved scenario text.
pub fn scenario_hash(echo: &str) -> String {
    hex::encode(Sha256::digest(echo.as_bytes()))
}

/// `x` with 17 significant digits; non-finite values are an error.
pub fn fmt_num(x: f64) -> Result<String> {
    if x.is_finite() {
        Ok(format!("{x:.16e}"))
    } else {
        Err(Error::domain(format!("refusing to write non-finite value {x}")))
    }
}

/// One output file under construction.
#[derive(Debug, Clone)]
pub struct Table {
    meta: Vec<(String, String)>,
    columns: Vec<&'static str>,
    units: Vec<&'static str>,
    body: String,
}

impl Table {
    pub fn new(hash: &str, columns: &[(&'static str, &'static str)]) -> Table {
        Table {
            meta: vec![("tool".into(), TOOL_VERSION.into()), ("scenario_sha256".into(), hash.into())],
            columns: columns.iter().map(|c| c.0).collect(),
            units: columns.iter().map(|c| c.1).collect(),
            body: String::new(),
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<String>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn meta_num(&mut self, key: &str, value: f64) -> Result<&mut Self> {
        let v = fmt_num(value)?;
        Ok(self.meta(key, v))
    }

    pub fn row(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.columns.len() {
            return Err(Error::Shape(format!(
                "row has {} values for {} columns",
                values.len(),
                self.columns.len()
            )));
        }
        let mut cells = Vec::with_capacity(values.len());
        for &v in values {
            cells.push(fmt_num(v)?);
        }
        self.body.push_str(&cells.join(","));
        self.body.push('\n');
        Ok(())
    }

    /// A `#` line inside the data section.
    pub fn comment(&mut self, text: &str) {
        let _ = writeln!(self.body, "# {text}");
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(s, "# {k} = {v}");
        }
        let _ = writeln!(s, "# columns = {}", self.columns.join(","));
        let _ = writeln!(s, "# units = {}", self.units.join(","));
        s.push_str(&self.body);
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

/// Key/value summary file with the same metadata header.
#[derive(Debug, Clone)]
pub struct Summary {
    lines: Vec<String>,
}

impl Summary {
    pub fn new(hash: &str) -> Summary {
        Summary {
            lines: vec![
                format!("# tool = {TOOL_VERSION}"),
                format!("# scenario_sha256 = {hash}"),
                "# columns = key,value".into(),
            ],
        }
    }

    pub fn num(&mut self, key: &str, value: f64) -> Result<()> {
        let v = fmt_num(value)?;
        self.lines.push(format!("{key} = {v}"));
        Ok(())
    }

    pub fn opt(&mut self, key: &str, value: Option<f64>) -> Result<()> {
        match value {
            Some(v) => self.num(key, v),
            None => {
                self.lines.push(format!("{key} = n/a"));
                Ok(())
            }
        }
    }

    pub fn text(&mut self, key: &str, value: &str) {
        self.lines.push(format!("{key} = {value}"));
    }

    pub fn render(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.render())?;
        Ok(())
    }
}

/// Read a snapshot file back as (xi, Ψ) samples.
pub fn read_snapshot(path: &Path) -> Result<(Vec<f64>, Vec<num_complex::Complex64>)> {
    let text = fs::read_to_string(path)?;
    let mut xi = Vec::new();
    let mut psi = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split(',').map(str::trim).collect();
        let parsed: std::result::Result<Vec<f64>, _> = cols.iter().map(|c| c.parse::<f64>()).collect();
        match parsed {
            Ok(v) if v.len() == 3 => {
                xi.push(v[0]);
                psi.push(num_complex::Complex64::new(v[1], v[2]));
            }
            _ => {
                return Err(Error::Shape(format!(
                    "{}:{}: expected three numbers xi,re_psi,im_psi",
                    path.display(),
                    n + 1
                )))
            }
        }
    }
    Ok((xi, psi))
}
