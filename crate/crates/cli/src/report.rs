//! Tabular/summary output rendered as JSON or CSV.

use std::io::Write;

use serde_json::{Map, Value};

use crate::config::OutputFormat;

pub const SCHEMA_VERSION: u64 = 1;

/// A command result: scalar fields plus an optional table.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub fields: Map<String, Value>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Value>>,
}

impl Report {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            fields: Map::new(),
            columns: Vec::new(),
            rows: Vec::new(),
        }
    }

    pub fn field(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.fields.insert(key.to_owned(), value.into());
        self
    }

    pub fn table(mut self, columns: Vec<&'static str>) -> Self {
        self.columns = columns;
        self
    }

    pub fn push_row(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> Value {
        let mut out = Map::new();
        out.insert("schema".into(), SCHEMA_VERSION.into());
        out.insert("command".into(), self.command.into());
        for (k, v) in &self.fields {
            out.insert(k.clone(), v.clone());
        }
        if !self.columns.is_empty() {
            let rows = self
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        self.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| ((*c).to_owned(), v.clone()))
                            .collect(),
                    )
                })
                .collect();
            out.insert("rows".into(), Value::Array(rows));
        }
        Value::Object(out)
    }

    /// With a table, the CSV is the table; otherwise `key,value` lines.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        if self.columns.is_empty() {
            writeln!(out, "key,value")?;
            writeln!(out, "schema,{SCHEMA_VERSION}")?;
            for (k, v) in &self.fields {
                writeln!(out, "{},{}", k, csv_cell(v))?;
            }
        } else {
            writeln!(out, "{}", self.columns.join(","))?;
            for r in &self.rows {
                let cells: Vec<String> = r.iter().map(csv_cell).collect();
                writeln!(out, "{}", cells.join(","))?;
            }
        }
        Ok(())
    }

    pub fn write<W: Write>(&self, format: OutputFormat, mut out: W) -> std::io::Result<()> {
        match format {
            OutputFormat::Json => {
                serde_json::to_writer_pretty(&mut out, &self.to_json())?;
                writeln!(out)
            }
            OutputFormat::Csv => self.write_csv(out),
        }
    }
}

fn csv_cell(v: &Value) -> String {
    let raw = match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    };
    if raw.contains([',', '"', '\n']) {
        format!("\"{}\"", raw.replace('"', "\"\""))
    } else {
        raw
    }
}

/// JSON has no infinities; they become `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_has_schema_and_rows() {
        let mut r = Report::new("demo").field("n", 3).table(vec!["a", "b"]);
        r.push_row(vec![1.into(), "x".into()]);
        let v = r.to_json();
        assert_eq!(v["schema"], 1);
        assert_eq!(v["rows"][0]["b"], "x");
    }

    #[test]
    fn csv_quotes_commas() {
        let mut r = Report::new("demo").table(vec!["a"]);
        r.push_row(vec!["1,2".into()]);
        let mut buf = Vec::new();
        r.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "a\n\"1,2\"\n");
    }

    #[test]
    fn non_finite_numbers_are_null() {
        assert_eq!(num(f64::NEG_INFINITY), Value::Null);
        assert_eq!(num(1.5), serde_json::json!(1.5));
    }
}
