//! Tabular results and their CSV / JSON encodings.

use std::io::Write;

use selfmix_core::format::{round9, sig9};
use serde_json::{json, Value};

#[derive(Debug, Clone)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Self::Num(x)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Self::Text(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Self::Text(s)
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Self::Num(x) => sig9(*x),
            Self::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            // JSON has no NaN/inf; those become null
            Self::Num(x) if x.is_finite() => json!(round9(*x)),
            Self::Num(_) => Value::Null,
            Self::Text(s) => json!(s),
        }
    }
}

/// Column names carry units (`_hz`, `_dbm`, …).
#[derive(Debug, Clone)]
pub struct Table {
    pub command: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(command: &'static str, columns: &[&'static str]) -> Self {
        Self {
            command,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        w.write_record(&self.columns)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::csv))?;
        }
        w.flush()?;
        Ok(())
    }

    /// `{"command", "scenario", "columns", "rows"}` with rows as arrays.
    pub fn write_json<W: Write>(&self, scenario: &str, mut out: W) -> std::io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let doc = json!({
            "command": self.command,
            "scenario": scenario,
            "columns": self.columns,
            "rows": rows,
        });
        serde_json::to_writer_pretty(&mut out, &doc)?;
        out.write_all(b"\n")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_quotes_text_and_formats_numbers() {
        let mut t = Table::new("demo", &["name", "value_v"]);
        t.push(vec!["a, b".into(), 0.5.into()]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "name,value_v\n\"a, b\",5.00000000e-1\n");
    }

    #[test]
    fn json_nulls_non_finite() {
        let mut t = Table::new("demo", &["x_v"]);
        t.push(vec![f64::NAN.into()]);
        let mut buf = Vec::new();
        t.write_json("s", &mut buf).unwrap();
        let v: Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["rows"][0][0], Value::Null);
    }
}
