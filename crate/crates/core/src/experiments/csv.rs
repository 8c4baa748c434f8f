//! Deterministic CSV tables: fixed 12-significant-digit numbers, `,`
//! separator, LF line endings.

use std::fmt::Write as _;

use crate::error::Error;

/// Shortest `%.12g`-style rendering of `x`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Num(f64),
    Text(String),
    /// A computation that failed for this cell only.
    Failed(String),
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Num(v) => format_number(*v),
            Cell::Text(s) => s.clone(),
            Cell::Failed(code) => format!("error:{code}"),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Int(v) => Some(*v as f64),
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }
}

/// Short machine-readable code for an error placed in a table cell.
pub fn error_code(err: &Error) -> &'static str {
    match err {
        Error::SubcriticalSpeed { .. } => "subcritical",
        Error::SlowerThanEvader { .. } => "slower_than_evader",
        Error::NoBracket { .. } => "no_bracket",
        Error::Timeout { .. } => "timeout",
        _ => "invalid",
    }
}

impl<T: Into<f64>> From<Result<T, Error>> for Cell {
    fn from(value: Result<T, Error>) -> Self {
        match value {
            Ok(v) => Cell::Num(v.into()),
            Err(e) => Cell::Failed(error_code(&e).to_string()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<String>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    /// Labels of failed cells as `row_key/column`.
    pub fn failed_cells(&self) -> Vec<String> {
        let mut out = Vec::new();
        for row in &self.rows {
            for (j, cell) in row.iter().enumerate() {
                if let Cell::Failed(code) = cell {
                    let key = row.first().map(Cell::render).unwrap_or_default();
                    out.push(format!("{}={key}/{}: {code}", self.headers[0], self.headers[j]));
                }
            }
        }
        out
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}
