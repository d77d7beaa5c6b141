//! Tables and reports, rendered as CSV, JSON or `key: value` text.
//! Every float is written with 17 significant digits.

use std::io::{self, Write};

use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    List(Vec<f64>),
}

impl Cell {
    fn text(&self) -> String {
        match self {
            Cell::Num(x) => fmt_num(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::List(v) => v.iter().map(|x| fmt_num(*x)).collect::<Vec<_>>().join(" "),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => num(*x),
            Cell::Int(i) => Value::from(*i),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
            Cell::List(v) => Value::Array(v.iter().map(|x| num(*x)).collect()),
        }
    }
}

fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
}

pub fn fmt_num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "NaN".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub units: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[(&str, &str)]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.0.to_string()).collect(),
            units: columns.iter().map(|c| c.1.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    fn header(&self) -> Vec<String> {
        self.columns
            .iter()
            .zip(&self.units)
            .map(|(c, u)| if u.is_empty() || u == "1" { c.clone() } else { format!("{c}[{u}]") })
            .collect()
    }
}

/// Output of one command: metadata, an optional table and summary values.
#[derive(Clone, Debug, Default)]
pub struct Document {
    pub command: String,
    pub meta: Map<String, Value>,
    pub summary: Vec<(String, Cell)>,
    pub table: Option<Table>,
}

impl Document {
    pub fn new(command: &str) -> Self {
        Document { command: command.to_string(), ..Default::default() }
    }

    pub fn add(&mut self, key: &str, value: Cell) {
        self.summary.push((key.to_string(), value));
    }

    pub fn get(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

/// `write_f64` override for serde_json: fixed 17 significant digits.
struct SciFormatter;

impl serde_json::ser::Formatter for SciFormatter {
    fn write_f64<W: ?Sized + Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

pub fn write_json_value<W: Write>(w: &mut W, v: &Value) -> CliResult<()> {
    let mut ser = serde_json::Serializer::with_formatter(&mut *w, SciFormatter);
    serde::Serialize::serialize(v, &mut ser).map_err(|e| CliError::Io(io::Error::other(e)))?;
    writeln!(w)?;
    Ok(())
}

fn to_json(doc: &Document) -> Value {
    let mut m = Map::new();
    m.insert("command".into(), Value::from(doc.command.as_str()));
    for (k, v) in &doc.meta {
        m.insert(k.clone(), v.clone());
    }
    if !doc.summary.is_empty() {
        let s: Map<String, Value> = doc.summary.iter().map(|(k, v)| (k.clone(), v.json())).collect();
        m.insert("summary".into(), Value::Object(s));
    }
    if let Some(t) = &doc.table {
        m.insert("columns".into(), Value::Array(t.columns.iter().map(|c| Value::from(c.as_str())).collect()));
        m.insert("units".into(), Value::Array(t.units.iter().map(|c| Value::from(c.as_str())).collect()));
        let rows = t.rows.iter().map(|r| Value::Array(r.iter().map(Cell::json).collect())).collect();
        m.insert("rows".into(), Value::Array(rows));
    }
    Value::Object(m)
}

fn write_csv<W: Write>(w: &mut W, header: &[String], rows: &[Vec<String>]) -> CliResult<()> {
    let mut csv = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(w);
    let wrap = |e: csv::Error| CliError::Io(io::Error::other(e));
    csv.write_record(header).map_err(wrap)?;
    for r in rows {
        csv.write_record(r).map_err(wrap)?;
    }
    csv.flush()?;
    Ok(())
}

/// Render `doc`. Without an explicit format a table is written as CSV and
/// a plain report as `key: value` lines.
pub fn render<W: Write>(w: &mut W, doc: &Document, format: Option<Format>) -> CliResult<()> {
    match (format, &doc.table) {
        (Some(Format::Json), _) => write_json_value(w, &to_json(doc)),
        (Some(Format::Csv), None) => {
            let header: Vec<String> = doc.summary.iter().map(|(k, _)| k.clone()).collect();
            let row: Vec<String> = doc.summary.iter().map(|(_, v)| v.text()).collect();
            write_csv(w, &header, &[row])
        }
        (_, Some(t)) => {
            let rows: Vec<Vec<String>> = t.rows.iter().map(|r| r.iter().map(Cell::text).collect()).collect();
            write_csv(w, &t.header(), &rows)
        }
        (None, None) => {
            for (k, v) in &doc.summary {
                writeln!(w, "{k}: {}", v.text())?;
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_num(1.0), "1.0000000000000000e0");
        assert_eq!(fmt_num(-0.1), "-1.0000000000000001e-1");
        let x = 2.085_786_437_626_905;
        assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn json_floats_round_trip() {
        let mut buf = Vec::new();
        write_json_value(&mut buf, &serde_json::json!({"x": 0.1, "n": 3, "bad": f64::NAN})).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s.trim(), r#"{"bad":null,"n":3,"x":1.0000000000000001e-1}"#);
        let v: Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["x"].as_f64(), Some(0.1));
    }

    #[test]
    fn csv_quotes_and_units() {
        let mut t = Table::new(&[("p", "c/l"), ("verdict", ""), ("krein", "")]);
        t.rows.push(vec![Cell::Num(2.0), Cell::Text("unstable".into()), Cell::Text("+1, -1".into())]);
        let mut doc = Document::new("sweep");
        doc.table = Some(t);
        let mut buf = Vec::new();
        render(&mut buf, &doc, None).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "p[c/l],verdict,krein\r\n2.0000000000000000e0,unstable,\"+1, -1\"\r\n");
    }
}
