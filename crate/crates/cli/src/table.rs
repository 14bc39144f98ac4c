//! Output tables and their TSV / JSON renderings.
//!
//! Every JSON document has the shape
//! `{"schema_version": 1, "tables": [{"name", "title", "columns", "rows"}]}`,
//! described by `schema/cubifs-output.v1.schema.json`.

use serde::Serialize;
use serde_json::{json, Value};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Cell {
    Text(String),
    Num(f64),
    Int(i64),
    Bool(bool),
    Missing,
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Text(s) => json!(s),
            Cell::Num(x) if x.is_finite() => json!(x),
            Cell::Num(_) | Cell::Missing => Value::Null,
            Cell::Int(i) => json!(i),
            Cell::Bool(b) => json!(b),
        }
    }

    fn to_tsv(&self, digits: usize) -> String {
        match self {
            Cell::Text(s) => s.replace(['\t', '\n'], " "),
            Cell::Num(x) => round_half_even(*x, digits),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Missing => "NA".into(),
        }
    }
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
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(i: usize) -> Self {
        Cell::Int(i as i64)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
    }
}

/// Fixed-point rendering with ties going to the even digit.
///
/// The standard formatter rounds the exact binary value half-to-even, so
/// only negative zero needs fixing up.
pub fn round_half_even(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return "NA".into();
    }
    let s = format!("{x:.digits$}");
    match s.strip_prefix('-') {
        Some(rest) if rest.chars().all(|c| c == '0' || c == '.') => rest.to_string(),
        _ => s,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub title: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, title: &str, columns: Vec<String>) -> Self {
        Self {
            name: name.into(),
            title: title.into(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(
            row.len(),
            self.columns.len(),
            "row width in table {}",
            self.name
        );
        self.rows.push(row);
    }

    pub fn to_tsv(&self, digits: usize) -> String {
        let mut out = format!("# {}\n{}\n", self.title, self.columns.join("\t"));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.to_tsv(digits)).collect();
            out.push_str(&cells.join("\t"));
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "title": self.title,
            "columns": self.columns,
            "rows": self.rows.iter().map(|r| r.iter().map(Cell::to_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Tsv => "tsv",
            Format::Json => "json",
        }
    }
}

/// Renders tables as one document: TSV sections separated by blank lines,
/// or a single JSON object.
pub fn render(tables: &[Table], format: Format, digits: usize) -> String {
    match format {
        Format::Tsv => tables
            .iter()
            .map(|t| t.to_tsv(digits))
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json => {
            let doc = json!({
                "schema_version": SCHEMA_VERSION,
                "tables": tables.iter().map(Table::to_json).collect::<Vec<_>>(),
            });
            let mut s = serde_json::to_string_pretty(&doc).expect("JSON values always serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn half_even_ties() {
        assert_eq!(round_half_even(0.125, 2), "0.12");
        assert_eq!(round_half_even(0.375, 2), "0.38");
        assert_eq!(round_half_even(2.5, 0), "2");
        assert_eq!(round_half_even(0.82301, 4), "0.8230");
        assert_eq!(round_half_even(-1e-17, 4), "0.0000");
        assert_eq!(round_half_even(-0.25, 1), "-0.2");
        assert_eq!(round_half_even(f64::NAN, 4), "NA");
    }

    #[test]
    fn tsv_layout() {
        let mut t = Table::new("x", "An example", vec!["item".into(), "v".into()]);
        t.push(vec!["a".into(), 0.5.into()]);
        t.push(vec!["b".into(), Cell::Missing]);
        assert_eq!(t.to_tsv(3), "# An example\nitem\tv\na\t0.500\nb\tNA\n");
    }

    #[test]
    fn json_nulls_for_missing() {
        let mut t = Table::new("x", "t", vec!["v".into()]);
        t.push(vec![f64::NAN.into()]);
        t.push(vec![Cell::Missing]);
        let v = t.to_json();
        assert_eq!(v["rows"], json!([[null], [null]]));
    }
}
