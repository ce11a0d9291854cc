//! Output records. Both formats are rendered from the same JSON values, so
//! CSV cells and structured fields carry identical numbers.
//!
//! Structured output is one JSON object per line. CSV has a header taken
//! from the first record; nested values are JSON-encoded into one cell.
//! Field order is insertion order.

use std::io::Write;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::error::Result;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Structured,
    Csv,
}

pub type Record = Map<String, Value>;

/// Record carrying the fields shared by every output line.
pub fn base_record<C: Serialize>(command: &str, seed: u64, config: &C) -> Record {
    let mut r = Record::new();
    r.insert("command".into(), command.into());
    r.insert("seed".into(), seed.into());
    r.insert("version".into(), VERSION.into());
    r.insert("config".into(), serde_json::to_value(config).expect("config serializes"));
    r
}

/// A named quantity with its defining formula.
pub fn quantity(base: &Record, key: &str, value: Value, anchor: &str) -> Record {
    let mut r = Record::new();
    r.insert("key".into(), key.into());
    r.insert("value".into(), value);
    r.insert("anchor".into(), anchor.into());
    r.extend(base.clone());
    r
}

/// JSON number, or null for non-finite values.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit<W: Write>(records: &[Record], format: Format, mut out: W) -> Result<()> {
    match format {
        Format::Structured => {
            for r in records {
                serde_json::to_writer(&mut out, r).expect("records serialize");
                out.write_all(b"\n")?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            if let Some(first) = records.first() {
                w.write_record(first.keys())?;
            }
            for r in records {
                w.write_record(r.values().map(cell))?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_cells_match_structured_values() {
        let base = base_record("x", 3, &serde_json::json!({"a": [1, 2]}));
        let recs = vec![quantity(&base, "v", num(0.1 + 0.2), "sum"), quantity(&base, "w", num(f64::NAN), "nan")];
        let mut s = Vec::new();
        let mut c = Vec::new();
        emit(&recs, Format::Structured, &mut s).unwrap();
        emit(&recs, Format::Csv, &mut c).unwrap();
        let lines: Vec<Record> = String::from_utf8(s).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
        let mut rd = csv::Reader::from_reader(c.as_slice());
        let headers = rd.headers().unwrap().clone();
        for (row, rec) in rd.records().zip(&lines) {
            let row = row.unwrap();
            for (h, v) in headers.iter().zip(row.iter()) {
                assert_eq!(v, cell(&rec[h]));
            }
        }
        assert_eq!(lines[0]["value"].as_f64(), Some(0.1 + 0.2));
    }
}
