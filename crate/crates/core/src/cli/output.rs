//! Row-oriented dataset container with CSV and JSON emission.
//!
//! CSV layout: '#'-prefixed metadata comments, one header line, then one
//! line per row with numbers at nine significant digits. An `error`
//! column is always appended; rows that failed carry the message there
//! and leave unavailable value cells empty. JSON output is an array of
//! row objects with the same keys.

use serde_json::{Map, Number, Value};
use std::io::{self, Write};

#[derive(Debug, Clone)]
pub(crate) enum Field {
    Num(f64),
    Bool(bool),
    Text(String),
    Empty,
}

#[derive(Debug, Clone)]
pub(crate) struct Row {
    pub fields: Vec<Field>,
    pub error: Option<String>,
}

impl Row {
    pub fn ok(fields: Vec<Field>) -> Self {
        Row { fields, error: None }
    }

    pub fn failed(fields: Vec<Field>, message: String) -> Self {
        Row { fields, error: Some(message) }
    }
}

#[derive(Debug, Clone)]
pub struct Dataset {
    pub(crate) comments: Vec<(String, String)>,
    pub(crate) columns: Vec<&'static str>,
    pub(crate) rows: Vec<Row>,
}

impl Dataset {
    pub fn row_errors(&self) -> usize {
        self.rows.iter().filter(|r| r.error.is_some()).count()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column values as parsed numbers, skipping rows where the cell is
    /// not numeric. Convenience for in-process consumers of datasets.
    pub fn column(&self, name: &str) -> Vec<f64> {
        let Some(idx) = self.columns.iter().position(|c| *c == name) else {
            return Vec::new();
        };
        self.rows
            .iter()
            .filter_map(|r| match r.fields.get(idx) {
                Some(Field::Num(x)) => Some(*x),
                _ => None,
            })
            .collect()
    }

    pub fn write_csv(&self, w: &mut dyn Write) -> io::Result<()> {
        for (key, value) in &self.comments {
            writeln!(w, "# {key}: {value}")?;
        }
        let mut header: Vec<&str> = self.columns.clone();
        header.push("error");
        writeln!(w, "{}", header.join(","))?;
        for row in &self.rows {
            let mut cells: Vec<String> = row.fields.iter().map(csv_cell).collect();
            cells.push(csv_escape(row.error.as_deref().unwrap_or("")));
            writeln!(w, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn write_json(&self, w: &mut dyn Write) -> io::Result<()> {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| {
                let mut obj = Map::new();
                for (col, field) in self.columns.iter().zip(&row.fields) {
                    obj.insert((*col).to_string(), json_cell(field));
                }
                let err = match &row.error {
                    Some(m) => Value::String(m.clone()),
                    None => Value::Null,
                };
                obj.insert("error".to_string(), err);
                Value::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut *w, &Value::Array(rows)).map_err(io::Error::other)?;
        writeln!(w)
    }

    pub fn write(&self, format: super::Format, w: &mut dyn Write) -> io::Result<()> {
        match format {
            super::Format::Csv => self.write_csv(w),
            super::Format::Json => self.write_json(w),
        }
    }
}

/// Nine significant digits, scientific notation.
pub(crate) fn sig9(x: f64) -> String {
    format!("{x:.8e}")
}

fn csv_cell(field: &Field) -> String {
    match field {
        Field::Num(x) => sig9(*x),
        Field::Bool(b) => b.to_string(),
        Field::Text(t) => csv_escape(t),
        Field::Empty => String::new(),
    }
}

fn json_cell(field: &Field) -> Value {
    match field {
        Field::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
        Field::Bool(b) => Value::Bool(*b),
        Field::Text(t) => Value::String(t.clone()),
        Field::Empty => Value::Null,
    }
}

fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
