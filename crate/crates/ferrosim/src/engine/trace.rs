//! Time-aligned simulation records and their CSV form.

use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::netlist::fmt_sci;

/// Time-aligned series of node voltages and branch/device currents.
/// Signal names follow the `v(node)` / `i(element)` / `p(ftj)` convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace {
    pub time: Vec<f64>,
    names: Vec<String>,
    data: Vec<Vec<f64>>,
}

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("unknown signal `{0}`")]
    UnknownSignal(String),
    #[error("malformed trace CSV at line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Trace {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Self {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        let data = names.iter().map(|_| Vec::new()).collect();
        Self {
            time: Vec::new(),
            names,
            data,
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.time.len()
    }

    pub fn is_empty(&self) -> bool {
        self.time.is_empty()
    }

    pub fn push_row(&mut self, t: f64, values: &[f64]) {
        debug_assert_eq!(values.len(), self.names.len());
        debug_assert!(self.time.last().is_none_or(|&prev| t > prev));
        self.time.push(t);
        for (column, &v) in self.data.iter_mut().zip(values) {
            column.push(v);
        }
    }

    pub fn signal(&self, name: &str) -> Result<&[f64], TraceError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.data[i].as_slice())
            .ok_or_else(|| TraceError::UnknownSignal(name.to_string()))
    }

    /// Linear interpolation of one signal at time `t` (clamped to the ends).
    pub fn sample(&self, name: &str, t: f64) -> Result<f64, TraceError> {
        let y = self.signal(name)?;
        if self.time.is_empty() {
            return Ok(0.0);
        }
        if t <= self.time[0] {
            return Ok(y[0]);
        }
        if t >= *self.time.last().expect("nonempty") {
            return Ok(*y.last().expect("nonempty"));
        }
        let k = self.time.partition_point(|&tp| tp <= t);
        let (t0, t1) = (self.time[k - 1], self.time[k]);
        let (y0, y1) = (y[k - 1], y[k]);
        Ok(y0 + (y1 - y0) * (t - t0) / (t1 - t0))
    }

    /// Index of the last sample with time ≤ t.
    pub fn index_at(&self, t: f64) -> usize {
        self.time.partition_point(|&tp| tp <= t).saturating_sub(1)
    }

    /// Writes the CSV form: header `t,<signals...>`, scientific notation,
    /// 9 significant digits, rows in time order.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        let mut header = String::from("t");
        for name in &self.names {
            header.push(',');
            header.push_str(name);
        }
        writeln!(w, "{header}")?;
        for k in 0..self.time.len() {
            let mut row = fmt_sci(self.time[k]);
            for column in &self.data {
                row.push(',');
                row.push_str(&fmt_sci(column[k]));
            }
            writeln!(w, "{row}")?;
        }
        Ok(())
    }

    /// Reads a trace back from the CSV schema `write_csv` emits.
    pub fn read_csv<R: BufRead>(r: R) -> Result<Self, TraceError> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or(TraceError::Csv {
                line: 1,
                message: "empty file".into(),
            })?
            .map_err(TraceError::Io)?;
        let mut cols = header.split(',');
        if cols.next() != Some("t") {
            return Err(TraceError::Csv {
                line: 1,
                message: "header must start with `t`".into(),
            });
        }
        let names: Vec<String> = cols.map(str::to_string).collect();
        let mut trace = Trace::new(names);
        for (idx, line) in lines.enumerate() {
            let line_no = idx + 2;
            let line = line.map_err(TraceError::Io)?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split(',');
            let t: f64 = parts
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or(TraceError::Csv {
                    line: line_no,
                    message: "bad time value".into(),
                })?;
            let values: Result<Vec<f64>, _> = parts
                .map(|s| {
                    s.parse::<f64>().map_err(|_| TraceError::Csv {
                        line: line_no,
                        message: format!("bad value `{s}`"),
                    })
                })
                .collect();
            let values = values?;
            if values.len() != trace.names.len() {
                return Err(TraceError::Csv {
                    line: line_no,
                    message: format!(
                        "expected {} values, found {}",
                        trace.names.len(),
                        values.len()
                    ),
                });
            }
            trace.push_row(t, &values);
        }
        Ok(trace)
    }
}
