//! Rendering of command results as tables, JSON and CSV.
//!
//! JSON and CSV always carry 6 significant digits. Tables round to field
//! granularity (dB to 0.1, bitrates to 2 significant digits) unless
//! `--precise` asks for the same 6 digits as the machine formats.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

use satlink_core::quantities::format_significant;

pub const MACHINE_DIGITS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// What a command hands back for printing.
pub enum Output {
    /// One result record.
    Record(Value),
    /// A list of flat records sharing the same keys.
    Rows(Vec<Value>),
    /// A record whose table and CSV views are rendered by the core library.
    Custom {
        json: Value,
        table: String,
        precise_table: String,
        csv: String,
    },
}

impl Output {
    pub fn record<T: Serialize>(value: &T) -> Self {
        Output::Record(serde_json::to_value(value).expect("result records serialize"))
    }

    pub fn rows<T: Serialize>(items: &[T]) -> Self {
        Output::Rows(
            items
                .iter()
                .map(|i| serde_json::to_value(i).expect("result records serialize"))
                .collect(),
        )
    }
}

pub fn render(out: &Output, format: Format, precise: bool) -> String {
    match (out, format) {
        (Output::Custom { json, .. }, Format::Json) => to_json(json),
        (Output::Custom { precise_table, .. }, Format::Table) if precise => precise_table.clone(),
        (Output::Custom { table, .. }, Format::Table) => table.clone(),
        (Output::Custom { csv, .. }, Format::Csv) => csv.clone(),
        (Output::Record(v), Format::Json) => to_json(v),
        (Output::Rows(rows), Format::Json) => to_json(&Value::Array(rows.clone())),
        (Output::Record(v), Format::Csv) => to_csv(std::slice::from_ref(v)),
        (Output::Rows(rows), Format::Csv) => to_csv(rows),
        (Output::Record(v), Format::Table) => record_table(v, precise),
        (Output::Rows(rows), Format::Table) => rows_table(rows, precise),
    }
}

/// Rounds every float in `v` to `digits` significant digits.
pub fn round_value(v: &Value, digits: usize) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = format_significant(x, digits).parse().unwrap_or(x);
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.iter().map(|i| round_value(i, digits)).collect()),
        Value::Object(map) => Value::Object(map.iter().map(|(k, i)| (k.clone(), round_value(i, digits))).collect()),
        other => other.clone(),
    }
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&round_value(v, MACHINE_DIGITS)).expect("json values print");
    s.push('\n');
    s
}

/// Flattens nested objects and arrays into `a.b[0].c` keys.
pub fn flatten(v: &Value) -> Vec<(String, Value)> {
    fn walk(prefix: &str, v: &Value, out: &mut Vec<(String, Value)>) {
        match v {
            Value::Object(map) => {
                for (k, child) in map {
                    let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                    walk(&key, child, out);
                }
            }
            Value::Array(items) => {
                for (i, child) in items.iter().enumerate() {
                    walk(&format!("{prefix}[{i}]"), child, out);
                }
            }
            leaf => out.push((prefix.to_owned(), leaf.clone())),
        }
    }
    let mut out = Vec::new();
    walk("", v, &mut out);
    out
}

fn leaf_key(key: &str) -> &str {
    key.rsplit('.').next().unwrap_or(key)
}

fn is_db_key(key: &str) -> bool {
    let k = leaf_key(key);
    ["_db", "_dbw", "_dbm", "_dbi", "_dbk", "_dbhz", "_dbw_per_k_hz"]
        .iter()
        .any(|s| k.ends_with(s))
        || k == "db"
        || k == "dbw"
        || k == "dbm"
}

fn is_rate_key(key: &str) -> bool {
    let k = leaf_key(key);
    k.ends_with("_bps") || k == "capacity_bps"
}

pub fn format_cell(key: &str, v: &Value, digits: Option<usize>) -> String {
    match v {
        Value::Null => "-".to_owned(),
        Value::String(s) => s.clone(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) if !n.is_f64() => n.to_string(),
        Value::Number(n) => {
            let x = n.as_f64().expect("f64 number");
            match digits {
                Some(d) => format_significant(x, d),
                None if is_db_key(key) => format!("{x:.1}"),
                None if is_rate_key(key) => format_significant(x, 2),
                None => format_significant(x, 5),
            }
        }
        other => other.to_string(),
    }
}

fn table_digits(precise: bool) -> Option<usize> {
    precise.then_some(MACHINE_DIGITS)
}

fn record_table(v: &Value, precise: bool) -> String {
    let cells = flatten(v);
    let width = cells.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, val) in &cells {
        out.push_str(&format!("{k:<width$}  {}\n", format_cell(k, val, table_digits(precise))));
    }
    out
}

fn columns(rows: &[Value]) -> Vec<String> {
    let mut cols: Vec<String> = Vec::new();
    for r in rows {
        for (k, _) in flatten(r) {
            if !cols.contains(&k) {
                cols.push(k);
            }
        }
    }
    cols
}

fn row_cells(row: &Value, cols: &[String], digits: Option<usize>) -> Vec<String> {
    let flat: Map<String, Value> = flatten(row).into_iter().collect();
    cols.iter()
        .map(|c| flat.get(c).map_or_else(String::new, |v| format_cell(c, v, digits)))
        .collect()
}

fn rows_table(rows: &[Value], precise: bool) -> String {
    let cols = columns(rows);
    let body: Vec<Vec<String>> = rows.iter().map(|r| row_cells(r, &cols, table_digits(precise))).collect();
    let mut width: Vec<usize> = cols.iter().map(String::len).collect();
    for r in &body {
        for (w, c) in width.iter_mut().zip(r) {
            *w = (*w).max(c.chars().count());
        }
    }
    let mut out = String::new();
    for line in std::iter::once(cols.clone()).chain(body) {
        let padded: Vec<String> = line.iter().zip(&width).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn to_csv(rows: &[Value]) -> String {
    let cols = columns(rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&cols).expect("in-memory write");
    for r in rows {
        let cells: Vec<String> = row_cells(r, &cols, Some(MACHINE_DIGITS))
            .into_iter()
            .map(|c| if c == "-" { String::new() } else { c })
            .collect();
        w.write_record(&cells).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
