use std::fmt::Write;

use crate::error::{parse_err, Error, Result};

/// `N x n` sample matrix; row `t` is the measurement at time `t`.
#[derive(Clone, Debug, PartialEq)]
pub struct TimeSeries {
    n_vars: usize,
    data: Vec<f64>,
}

impl TimeSeries {
    /// Row-major samples; every value must be finite.
    pub fn from_rows(n_vars: usize, data: Vec<f64>) -> Result<Self> {
        if n_vars == 0 || n_vars > crate::bitmatrix::MAX_NODES {
            return Err(Error::NodeCount(n_vars));
        }
        if !data.len().is_multiple_of(n_vars) {
            return Err(Error::Config(format!(
                "{} values do not fill rows of {n_vars}",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!(
                "non-finite value at row {}, column {}",
                pos / n_vars,
                pos % n_vars
            )));
        }
        Ok(TimeSeries { n_vars, data })
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.n_vars
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn row(&self, t: usize) -> &[f64] {
        &self.data[t * self.n_vars..(t + 1) * self.n_vars]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.n_vars)
    }

    pub fn get(&self, t: usize, var: usize) -> f64 {
        self.data[t * self.n_vars + var]
    }

    pub fn column(&self, var: usize) -> Vec<f64> {
        self.rows().map(|r| r[var]).collect()
    }

    /// Headerless CSV, one row per time point.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut n_vars = None;
        let mut data = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let before = data.len();
            for field in line.split(',') {
                let v: f64 = field
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(idx + 1, format!("bad number {field:?}")))?;
                data.push(v);
            }
            let width = data.len() - before;
            match n_vars {
                None => n_vars = Some(width),
                Some(w) if w != width => {
                    return Err(parse_err(
                        idx + 1,
                        format!("expected {w} columns, found {width}"),
                    ))
                }
                _ => {}
            }
        }
        let n_vars = n_vars.ok_or_else(|| parse_err(0, "empty series"))?;
        Self::from_rows(n_vars, data)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            for (k, v) in row.iter().enumerate() {
                if k > 0 {
                    out.push(',');
                }
                write!(out, "{v:?}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}
