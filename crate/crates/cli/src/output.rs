//! Report rendering: canonical JSON, flat CSV, or an aligned text table.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Value};
use turan_core::rational::{format_decimal, format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Table,
}

pub enum Cell {
    Text(String),
    Num(Rational),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Text(s)
    }
}

impl From<&Rational> for Cell {
    fn from(x: &Rational) -> Self {
        Cell::Num(x.clone())
    }
}

impl From<Rational> for Cell {
    fn from(x: Rational) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Text(n.to_string())
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Text(n.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

/// The flat view of a result, shared by CSV and table output.
pub struct Table {
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(headers: Vec<&'static str>) -> Self {
        Self {
            headers,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    /// Two-column key/value table.
    pub fn pairs(pairs: Vec<(&str, Cell)>) -> Self {
        let mut t = Self::new(vec!["key", "value"]);
        for (k, v) in pairs {
            t.push(vec![k.into(), v]);
        }
        t
    }
}

pub struct Output {
    pub result: Value,
    pub table: Table,
}

fn has_numbers(t: &Table, col: usize) -> bool {
    t.rows.iter().any(|r| matches!(r[col], Cell::Num(_)))
}

fn text(cell: &Cell) -> String {
    match cell {
        Cell::Text(s) => s.clone(),
        Cell::Num(x) => format_rational(x),
    }
}

pub fn render(out: &Output, config: &Value, format: Format, decimal: Option<usize>, w: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::Json => {
            let doc = json!({ "config": config, "result": out.result });
            writeln!(w, "{}", serde_json::to_string_pretty(&doc).expect("serializable"))
        }
        Format::Csv => {
            writeln!(w, "# config: {}", serde_json::to_string(config).expect("serializable"))?;
            let t = &out.table;
            let numeric: Vec<bool> = (0..t.headers.len()).map(|c| decimal.is_some() && has_numbers(t, c)).collect();
            let mut csv = csv::Writer::from_writer(Vec::new());
            let mut header = Vec::new();
            for (c, h) in t.headers.iter().enumerate() {
                header.push(h.to_string());
                if numeric[c] {
                    header.push(format!("{h}_decimal"));
                }
            }
            csv.write_record(&header)?;
            for row in &t.rows {
                let mut rec = Vec::new();
                for (c, cell) in row.iter().enumerate() {
                    rec.push(text(cell));
                    if numeric[c] {
                        rec.push(match cell {
                            Cell::Num(x) => format_decimal(x, decimal.unwrap_or(0)),
                            Cell::Text(_) => String::new(),
                        });
                    }
                }
                csv.write_record(&rec)?;
            }
            let bytes = csv.into_inner().map_err(|e| e.into_error())?;
            w.write_all(&bytes)
        }
        Format::Table => {
            if let Value::Object(map) = config {
                for (k, v) in map {
                    let v = match v {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    };
                    writeln!(w, "# {k}: {v}")?;
                }
            }
            let t = &out.table;
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|cell| match (cell, decimal) {
                            (Cell::Num(x), Some(d)) => format!("{} ~ {}", format_rational(x), format_decimal(x, d)),
                            _ => text(cell),
                        })
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = (0..t.headers.len())
                .map(|c| cells.iter().map(|r| r[c].chars().count()).chain([t.headers[c].len()]).max().unwrap_or(0))
                .collect();
            let line = |vals: Vec<&str>| {
                vals.iter()
                    .zip(&widths)
                    .map(|(v, &wd)| format!("{v:<wd$}"))
                    .collect::<Vec<_>>()
                    .join("  ")
                    .trim_end()
                    .to_string()
            };
            writeln!(w, "{}", line(t.headers.clone()))?;
            writeln!(w, "{}", line(widths.iter().map(|&n| "-".repeat(n)).collect::<Vec<_>>().iter().map(String::as_str).collect()))?;
            for row in &cells {
                writeln!(w, "{}", line(row.iter().map(String::as_str).collect()))?;
            }
            Ok(())
        }
    }
}
