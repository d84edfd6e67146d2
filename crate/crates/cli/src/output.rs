//! Tables and their CSV / JSON encodings. Floats are written with 17
//! significant digits so both encodings round-trip exactly.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::value::RawValue;

use crate::args::Format;
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    pub fn text(s: impl Into<String>) -> Self {
        Cell::Text(s.into())
    }

    fn csv_field(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<i64> for Cell {
    fn from(i: i64) -> Self {
        Cell::Int(i)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_owned())
    }
}

pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".to_owned()
    } else if x > 0.0 {
        "inf".to_owned()
    } else {
        "-inf".to_owned()
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Cell::Num(x) if x.is_finite() => {
                let raw =
                    RawValue::from_string(format_float(*x)).map_err(serde::ser::Error::custom)?;
                raw.serialize(ser)
            }
            Cell::Num(_) => ser.serialize_none(),
            Cell::Int(i) => ser.serialize_i64(*i),
            Cell::Text(s) => ser.serialize_str(s),
        }
    }
}

/// Ordered key/value pairs, serialised as a JSON object in insertion order.
struct Record<'a>(Vec<(&'a str, &'a Cell)>);

impl Serialize for Record<'_> {
    fn serialize<S: Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        let mut map = ser.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(k, v)?;
        }
        map.end()
    }
}

#[derive(Serialize)]
struct Document<'a> {
    metadata: Record<'a>,
    rows: Vec<Record<'a>>,
}

/// Rows share a fixed column list; `metadata` is appended to every row and
/// also emitted once as the JSON metadata object.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    metadata: Vec<(String, Cell)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str], metadata: Vec<(String, Cell)>) -> Self {
        Self {
            columns: columns.iter().map(|c| (*c).to_owned()).collect(),
            metadata,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(
            row.len(),
            self.columns.len(),
            "row width does not match the header"
        );
        self.rows.push(row);
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| &r[k]).collect())
    }

    fn all_columns(&self) -> impl Iterator<Item = &str> {
        self.columns
            .iter()
            .chain(self.metadata.iter().map(|(k, _)| k))
            .map(String::as_str)
    }

    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        let write = |w: &mut csv::Writer<Vec<u8>>| -> csv::Result<()> {
            w.write_record(self.all_columns())?;
            for row in &self.rows {
                w.write_record(
                    row.iter()
                        .chain(self.metadata.iter().map(|(_, v)| v))
                        .map(Cell::csv_field),
                )?;
            }
            w.flush()?;
            Ok(())
        };
        write(&mut w).expect("writing to memory cannot fail");
        w.into_inner().expect("writing to memory cannot fail")
    }

    pub fn to_json(&self) -> Vec<u8> {
        let meta = Record(self.metadata.iter().map(|(k, v)| (k.as_str(), v)).collect());
        let rows = self
            .rows
            .iter()
            .map(|row| {
                Record(
                    self.all_columns()
                        .zip(row.iter().chain(self.metadata.iter().map(|(_, v)| v)))
                        .collect(),
                )
            })
            .collect();
        let mut out = serde_json::to_vec_pretty(&Document {
            metadata: meta,
            rows,
        })
        .expect("table serialises");
        out.push(b'\n');
        out
    }

    pub fn render(&self, format: Format) -> Vec<u8> {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }
}

/// Writes to `path`, or to standard output when `None`.
pub fn write_output(bytes: &[u8], path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Output {
            path: p.to_owned(),
            source,
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Output {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}
