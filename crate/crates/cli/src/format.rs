//! Number formatting and the two tabular renderings (CSV and JSON).

use serde_json::{Map, Value};

/// Significant digits that round-trip every `f64`.
pub const ROUND_TRIP_DIGITS: usize = 17;

/// `x` with `digits` significant digits, in the shorter of fixed and
/// exponent notation, trailing zeros removed.
pub fn number(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let d = digits.clamp(1, ROUND_TRIP_DIGITS);
    let sci = format!("{:.*e}", d - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= d as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (d as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One output field.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    /// Blank in CSV, `null` in JSON.
    Missing,
    Int(u64),
    Text(String),
    Bool(bool),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Missing, Cell::Num)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n as u64)
    }
}

impl From<u64> for Cell {
    fn from(n: u64) -> Self {
        Cell::Int(n)
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Bool(b)
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

impl Cell {
    pub fn csv(&self, digits: usize) -> String {
        match self {
            Cell::Num(x) => number(*x, digits),
            Cell::Missing => String::new(),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
        }
    }

    pub fn json(&self) -> Value {
        match self {
            Cell::Num(x) => serde_json::Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Missing => Value::Null,
            Cell::Int(n) => Value::from(*n),
            Cell::Text(s) => Value::from(s.as_str()),
            Cell::Bool(b) => Value::from(*b),
        }
    }
}

/// An ordered list of named fields.
pub type Record = Vec<(&'static str, Cell)>;

pub fn csv_table(header: &[&str], rows: &[Record], digits: usize) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for row in rows {
        let line: Vec<String> = row.iter().map(|(_, c)| c.csv(digits)).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Header and single row of a record.
pub fn csv_record(record: &Record, digits: usize) -> String {
    let header: Vec<&str> = record.iter().map(|(k, _)| *k).collect();
    csv_table(&header, std::slice::from_ref(record), digits)
}

pub fn json_object(record: &Record) -> Map<String, Value> {
    record.iter().map(|(k, c)| (k.to_string(), c.json())).collect()
}
