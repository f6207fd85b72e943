//! Datasets on (0, 1]: validated construction, CSV round trips, summaries.
//!
//! Every value must be finite and in (0, 1]. Exact ones are legal data (the
//! bundled proportion data end in a run of them) but several likelihoods
//! are undefined there, so the dataset records their presence up front and
//! lets each model decide. Zeros and values above one are rejected at load
//! time with the offending row number.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::cepd::CepdParams;
use crate::epd2::EpdParams;
use crate::error::{Error, Result};
use crate::estimate::Family;
use crate::gepd::GepdParams;
use crate::kumaraswamy::KumaraswamyParams;

/// Which CSV column carries the observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Column<'a> {
    /// Zero-based positional index; a leading non-numeric row is treated as
    /// a header and skipped.
    Index(usize),
    /// Header name; the first row must be a header containing it.
    Name(&'a str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    name: String,
    source: String,
    contains_one: bool,
}

/// Descriptive statistics of a dataset, serializable as JSON.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub n: usize,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
    /// Sample variance with the n-1 denominator; 0 for a single point.
    pub variance: f64,
    /// How many observations are exactly 1.
    pub ones_count: usize,
}

fn validate_value(row: u64, v: f64) -> Result<f64> {
    if !v.is_finite() || v <= 0.0 || v > 1.0 {
        return Err(Error::InvalidDatum { row, value: v });
    }
    Ok(v)
}

impl Dataset {
    /// Wraps already-collected values, validating each one. Row numbers in
    /// errors are 1-based positions within `values`.
    pub fn new(
        values: Vec<f64>,
        name: impl Into<String>,
        source: impl Into<String>,
    ) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptyDataset);
        }
        for (i, &v) in values.iter().enumerate() {
            validate_value(i as u64 + 1, v)?;
        }
        let contains_one = values.iter().any(|&v| v == 1.0);
        Ok(Self {
            values,
            name: name.into(),
            source: source.into(),
            contains_one,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    /// True when at least one observation is exactly 1. Models whose log
    /// density is unbounded at the upper endpoint refuse such data.
    pub fn contains_one(&self) -> bool {
        self.contains_one
    }

    pub fn summarize(&self) -> Summary {
        let n = self.values.len();
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        let mut sum = 0.0;
        for &v in &self.values {
            min = min.min(v);
            max = max.max(v);
            sum += v;
        }
        let mean = sum / n as f64;
        let variance = if n > 1 {
            self.values.iter().map(|&v| (v - mean) * (v - mean)).sum::<f64>() / (n as f64 - 1.0)
        } else {
            0.0
        };
        Summary {
            n,
            min,
            max,
            mean,
            variance,
            ones_count: self.values.iter().filter(|&&v| v == 1.0).count(),
        }
    }

    /// Reads one column of a CSV file. Errors carry the 1-based physical
    /// line number of the offending row.
    pub fn load_csv(path: impl AsRef<Path>, column: Column<'_>) -> Result<Self> {
        let path = path.as_ref();
        let map_io = |e: std::io::Error| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        };
        let file = fs::File::open(path).map_err(map_io)?;
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(file);

        let mut records = reader.records();
        let mut values = Vec::new();
        let mut first = true;
        let mut index = match column {
            Column::Index(i) => i,
            Column::Name(_) => usize::MAX,
        };

        while let Some(record) = records.next() {
            let record = record.map_err(|e| Error::Csv {
                line: e.position().map_or(0, csv::Position::line),
                message: e.to_string(),
            })?;
            let line = record.position().map_or(0, csv::Position::line);
            let field = |i: usize| -> Result<&str> {
                record.get(i).ok_or(Error::Csv {
                    line,
                    message: format!("row has {} fields, need column {i}", record.len()),
                })
            };
            if first {
                first = false;
                match column {
                    Column::Name(name) => {
                        index = record
                            .iter()
                            .position(|h| h == name)
                            .ok_or_else(|| Error::Csv {
                                line,
                                message: format!("no column named {name:?} in header"),
                            })?;
                        continue;
                    }
                    Column::Index(_) => {
                        // a non-numeric first row is a header
                        if field(index)?.parse::<f64>().is_err() {
                            continue;
                        }
                    }
                }
            }
            let text = field(index)?;
            let v: f64 = text.parse().map_err(|_| Error::Csv {
                line,
                message: format!("cannot parse {text:?} as a number"),
            })?;
            values.push(validate_value(line, v)?);
        }

        let name = path
            .file_stem()
            .map_or_else(|| "data".to_string(), |s| s.to_string_lossy().into_owned());
        let source = path.display().to_string();
        Self::new(values, name, source)
    }

    /// Writes the observations as a one-column CSV with header `value`,
    /// printed with enough digits to round-trip exactly.
    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::with_capacity(self.values.len() * 26 + 8);
        out.push_str("value\n");
        for &v in &self.values {
            writeln!(out, "{v:.16e}").expect("writing to a String cannot fail");
        }
        fs::write(path, out).map_err(|e| Error::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })
    }
}

/// Draws a deterministic sample from a named family and wraps it as a
/// dataset whose metadata records family, parameters, and seed. The same
/// seed reproduces the same values bit for bit.
pub fn simulate_dataset(family: Family, params: &[f64], n: usize, seed: u64) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::EmptyDataset);
    }
    if params.len() != family.k() {
        return Err(Error::InvalidParameter {
            name: "params",
            requirement: "one value per model parameter",
            value: params.len() as f64,
        });
    }
    let values = match family {
        // the order-two sampler is a closed-form quantile transform; higher
        // orders solve the polynomial equation per draw
        Family::Epd { r: 2 } if params[0] > 0.0 => {
            EpdParams::new(params[0], params[1])?.sample_n(n, seed)
        }
        Family::Epd { .. } => GepdParams::new(params.to_vec())?.sample_n(n, seed),
        Family::Cepd => CepdParams::new(params[0], params[1])?.sample_n(n, seed),
        Family::Kumaraswamy => KumaraswamyParams::new(params[0], params[1])?.sample_n(n, seed),
    };
    let label = family.label();
    Dataset::new(
        values,
        format!("simulated {label}"),
        format!("{label} params={params:?} n={n} seed={seed}"),
    )
}
