//! Rendering of command reports as human text, CSV or JSON.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

/// One CSV section: a header row and numeric rows.
#[derive(Debug, Clone)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: Vec<&'static str>) -> Self {
        Table {
            header,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }
}

/// Everything a command produced, before formatting.
#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Value,
    pub result: Value,
    pub human: Vec<String>,
    pub tables: Vec<Table>,
    pub diagnostics: Vec<String>,
    pub exit_code: i32,
}

/// The JSON document emitted per invocation.
#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: Value,
    pub result: Value,
    pub version: String,
    pub elapsed_ms: Option<f64>,
}

/// Rounds to 15 significant digits.
pub fn round15(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.14e}").parse().unwrap_or(x)
}

/// Decimal text of `x` at 15 significant digits, without trailing zeros.
pub fn num(x: f64) -> String {
    let r = round15(x);
    if r == 0.0 {
        // normalise -0
        return "0".to_string();
    }
    let a = r.abs();
    if !(1e-5..1e16).contains(&a) {
        format!("{r:e}")
    } else {
        format!("{r}")
    }
}

/// Recursively applies [`round15`] to every float in a JSON value.
pub fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round15(n.as_f64().unwrap_or_default());
            let x = if x == 0.0 { 0.0 } else { x };
            serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_json).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_json(v))).collect())
        }
        other => other,
    }
}

pub fn emit(
    report: &Report,
    format: Format,
    elapsed_ms: Option<f64>,
    out: &mut impl Write,
    err: &mut impl Write,
) -> io::Result<()> {
    for d in &report.diagnostics {
        writeln!(err, "diagnostic: {d}")?;
    }
    match format {
        Format::Human => {
            for line in &report.human {
                writeln!(out, "{line}")?;
            }
            if let Some(ms) = elapsed_ms {
                writeln!(err, "elapsed: {} ms", num(ms))?;
            }
        }
        Format::Csv => {
            for (k, table) in report.tables.iter().enumerate() {
                if k > 0 {
                    writeln!(out)?;
                }
                let mut writer = csv::WriterBuilder::new()
                    .terminator(csv::Terminator::Any(b'\n'))
                    .quote_style(csv::QuoteStyle::Never)
                    .from_writer(&mut *out);
                writer.write_record(&table.header)?;
                for row in &table.rows {
                    writer.write_record(row)?;
                }
                writer.flush()?;
            }
        }
        Format::Json => {
            let record = OutputRecord {
                command: report.command.to_string(),
                params: round_json(report.params.clone()),
                result: round_json(report.result.clone()),
                version: env!("CARGO_PKG_VERSION").to_string(),
                elapsed_ms: elapsed_ms.map(round15),
            };
            serde_json::to_writer(&mut *out, &record)?;
            writeln!(out)?;
        }
    }
    Ok(())
}
