//! Tabular report documents rendered as JSON, CSV, or aligned text.
//!
//! Every float is formatted once at the requested precision; the JSON
//! renderer parses that same string back into a number, so all three formats
//! carry identical values.

use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::BanzhafError;

pub const DEFAULT_PRECISION: usize = 5;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}

impl FromStr for Format {
    type Err = BanzhafError;

    fn from_str(s: &str) -> Result<Self, BanzhafError> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "table" => Ok(Format::Table),
            other => Err(BanzhafError::InvalidParameter(format!(
                "unknown format `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Text(String),
    Int(i128),
    Float(f64),
    Bool(bool),
    Empty,
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

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v.into())
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i128)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl<T: Into<Cell>> From<Option<T>> for Cell {
    fn from(v: Option<T>) -> Self {
        v.map_or(Cell::Empty, Into::into)
    }
}

impl Cell {
    fn text(&self, precision: usize) -> String {
        match self {
            Cell::Text(s) => s.clone(),
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) if v.is_finite() => format!("{v:.precision$}"),
            Cell::Float(v) => v.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }

    fn json(&self, precision: usize) -> Value {
        match self {
            Cell::Text(s) => Value::String(s.clone()),
            Cell::Int(v) => i64::try_from(*v)
                .map(Value::from)
                .unwrap_or_else(|_| Value::String(v.to_string())),
            Cell::Float(v) if v.is_finite() => {
                let printed: f64 = self
                    .text(precision)
                    .parse()
                    .expect("formatted float parses");
                serde_json::Number::from_f64(printed).map_or(Value::Null, Value::Number)
            }
            Cell::Float(_) | Cell::Empty => Value::Null,
            Cell::Bool(b) => Value::Bool(*b),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Table {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Document {
    pub title: String,
    pub meta: Vec<(String, Cell)>,
    pub tables: Vec<Table>,
}

impl Document {
    pub fn new(title: impl Into<String>) -> Self {
        Document {
            title: title.into(),
            ..Default::default()
        }
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) -> &mut Self {
        self.meta.push((key.to_string(), value.into()));
        self
    }

    pub fn render(&self, format: Format, precision: usize) -> String {
        match format {
            Format::Json => self.render_json(precision),
            Format::Csv => self.render_csv(precision),
            Format::Table => self.render_table(precision),
        }
    }

    fn render_json(&self, precision: usize) -> String {
        let mut root = Map::new();
        root.insert("title".into(), Value::String(self.title.clone()));
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), v.json(precision)))
            .collect();
        root.insert("meta".into(), Value::Object(meta));
        let mut tables = Map::new();
        for t in &self.tables {
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    Value::Object(
                        t.columns
                            .iter()
                            .zip(r)
                            .map(|(c, v)| (c.clone(), v.json(precision)))
                            .collect(),
                    )
                })
                .collect();
            tables.insert(t.name.clone(), Value::Array(rows));
        }
        root.insert("tables".into(), Value::Object(tables));
        let mut out =
            serde_json::to_string_pretty(&Value::Object(root)).expect("report serializes");
        out.push('\n');
        out
    }

    fn render_csv(&self, precision: usize) -> String {
        let mut out = String::new();
        for (n, t) in self.tables.iter().enumerate() {
            if n > 0 {
                out.push('\n');
            }
            if self.tables.len() > 1 {
                let _ = writeln!(out, "# {}", t.name);
            }
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&t.columns).expect("in-memory csv");
            for r in &t.rows {
                w.write_record(r.iter().map(|c| c.text(precision)))
                    .expect("in-memory csv");
            }
            out.push_str(
                &String::from_utf8(w.into_inner().expect("in-memory csv")).expect("utf8 csv"),
            );
        }
        out
    }

    fn render_table(&self, precision: usize) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.title);
        for (k, v) in &self.meta {
            let _ = writeln!(out, "  {k}: {}", v.text(precision));
        }
        for t in &self.tables {
            out.push('\n');
            if self.tables.len() > 1 {
                let _ = writeln!(out, "[{}]", t.name);
            }
            let cells: Vec<Vec<String>> = t
                .rows
                .iter()
                .map(|r| r.iter().map(|c| c.text(precision)).collect())
                .collect();
            let widths: Vec<usize> = t
                .columns
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    cells
                        .iter()
                        .map(|r| r[j].len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            let line = |fields: &mut dyn Iterator<Item = &str>| {
                let mut s = String::new();
                for (j, f) in fields.enumerate() {
                    if j > 0 {
                        s.push_str("  ");
                    }
                    if j == 0 {
                        let _ = write!(s, "{f:<w$}", w = widths[j]);
                    } else {
                        let _ = write!(s, "{f:>w$}", w = widths[j]);
                    }
                }
                s.trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(&mut t.columns.iter().map(String::as_str)));
            let rule: usize = widths.iter().sum::<usize>() + 2 * widths.len().saturating_sub(1);
            let _ = writeln!(out, "{}", "-".repeat(rule));
            for r in &cells {
                let _ = writeln!(out, "{}", line(&mut r.iter().map(String::as_str)));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc() -> Document {
        let mut d = Document::new("demo");
        d.meta("players", 2usize).meta("note", "x");
        let mut t = Table::new("indices", &["player", "count", "value", "flag"]);
        t.push(vec![
            "a".into(),
            3u64.into(),
            0.123456789.into(),
            true.into(),
        ]);
        t.push(vec![
            "b,c".into(),
            1u64.into(),
            Cell::Float(1.0 / 3.0),
            Cell::Empty,
        ]);
        d.tables.push(t);
        d
    }

    #[test]
    fn json_numbers_match_printed_precision() {
        let v: Value = serde_json::from_str(&doc().render(Format::Json, 5)).unwrap();
        assert_eq!(v["tables"]["indices"][0]["value"], 0.12346);
        assert_eq!(v["tables"]["indices"][1]["value"], 0.33333);
        assert_eq!(v["tables"]["indices"][1]["flag"], Value::Null);
        assert_eq!(v["meta"]["players"], 2);
    }

    #[test]
    fn csv_quotes_and_formats() {
        let s = doc().render(Format::Csv, 3);
        assert_eq!(
            s,
            "player,count,value,flag\na,3,0.123,true\n\"b,c\",1,0.333,\n"
        );
    }

    #[test]
    fn table_is_aligned() {
        let s = doc().render(Format::Table, 5);
        assert!(s.contains("player  count    value  flag"), "{s}");
        assert!(s.contains("a           3  0.12346  true"), "{s}");
    }

    #[test]
    fn format_parse() {
        assert_eq!("json".parse::<Format>().unwrap(), Format::Json);
        assert!("xml".parse::<Format>().is_err());
    }
}
