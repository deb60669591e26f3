//! JSON and CSV emission. JSON keeps struct field order; CSV flattens nested fields to
//! dotted column names, complex values to `_re`/`_im` pairs, and quotes per RFC 4180.

use crate::error::{Error, Result};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(Error::Parse(format!("unknown output format {s:?}"))),
        }
    }
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Parse(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn is_complex_pair(items: &[Value]) -> bool {
    items.len() == 2 && items.iter().all(|v| v.is_number() || v.is_null())
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, inner) in map {
                flatten(&key(k), inner, out);
            }
        }
        Value::Array(items) if is_complex_pair(items) => {
            out.push((format!("{prefix}_re"), scalar(&items[0])));
            out.push((format!("{prefix}_im"), scalar(&items[1])));
        }
        Value::Array(_) => out.push((prefix.to_string(), v.to_string())),
        other => out.push((prefix.to_string(), scalar(other))),
    }
}

/// Flatten one record into (column, value) pairs.
pub fn flatten_record<T: Serialize>(row: &T) -> Result<Vec<(String, String)>> {
    let v = serde_json::to_value(row).map_err(|e| Error::Parse(e.to_string()))?;
    let mut out = Vec::new();
    match &v {
        Value::Object(_) => flatten("", &v, &mut out),
        other => out.push(("value".to_string(), scalar(other))),
    }
    Ok(out)
}

/// CSV with a header row taken from the first record.
pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Option<Vec<String>> = None;
    for row in rows {
        let fields = flatten_record(row)?;
        let names: Vec<String> = fields.iter().map(|(k, _)| k.clone()).collect();
        match &header {
            None => {
                w.write_record(&names).map_err(|e| Error::Io(e.to_string()))?;
                header = Some(names);
            }
            Some(h) if *h != names => {
                return Err(Error::Parse(format!("record columns {names:?} differ from header {h:?}")));
            }
            _ => {}
        }
        w.write_record(fields.iter().map(|(_, v)| v)).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}
