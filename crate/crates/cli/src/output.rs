use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{Map, Value};
use typent::format_f64;

use crate::args::Format;
use crate::config::RunConfig;

/// A rendered result: scalar fields plus an optional table.
///
/// JSON holds the config under `"config"`, the fields in insertion order and
/// the table as an array of row objects under `"rows"`. CSV starts with a
/// `# config` comment. Without a table the fields become `quantity,value`
/// lines with arrays spread over `key_1, key_2, …`; with a table they become
/// `# key=value` comments above the table.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub config: RunConfig,
    pub fields: Vec<(String, Value)>,
    pub table: Option<Table>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    /// Builds a table from serializable records, keeping field order.
    pub fn from_records<T: Serialize>(records: &[T]) -> Self {
        let mut columns = Vec::new();
        let rows = records
            .iter()
            .map(|r| match to_value(r) {
                Value::Object(map) => {
                    if columns.is_empty() {
                        columns = map.keys().cloned().collect();
                    }
                    map.into_iter().map(|(_, v)| v).collect()
                }
                other => vec![other],
            })
            .collect();
        Self { columns, rows }
    }
}

/// Serializes to JSON with non-finite floats as `null`.
pub fn to_value<T: Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("plain data always serializes")
}

pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

impl Document {
    pub fn new(config: RunConfig) -> Self {
        Self {
            config,
            fields: Vec::new(),
            table: None,
        }
    }

    pub fn field(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.fields.push((key.to_string(), value.into()));
        self
    }

    pub fn real(&mut self, key: &str, x: f64) -> &mut Self {
        self.field(key, num(x))
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
        }
    }

    fn to_json(&self) -> String {
        let mut root = Map::new();
        root.insert("config".into(), to_value(&self.config));
        for (k, v) in &self.fields {
            root.insert(k.clone(), v.clone());
        }
        if let Some(t) = &self.table {
            let rows = t
                .rows
                .iter()
                .map(|row| {
                    Value::Object(t.columns.iter().cloned().zip(row.iter().cloned()).collect())
                })
                .collect();
            root.insert("rows".into(), Value::Array(rows));
        }
        let mut s =
            serde_json::to_string_pretty(&Value::Object(root)).expect("JSON values serialize");
        s.push('\n');
        s
    }

    fn to_csv(&self) -> String {
        let mut out = String::new();
        let config = match to_value(&self.config) {
            Value::Object(map) => map
                .iter()
                .map(|(k, v)| format!("{k}={}", cell(v)))
                .collect::<Vec<_>>()
                .join(" "),
            _ => unreachable!("RunConfig serializes to an object"),
        };
        writeln!(out, "# config {config}").unwrap();
        match &self.table {
            None => {
                out.push_str("quantity,value\n");
                for (k, v) in &self.fields {
                    match v {
                        Value::Array(items) => {
                            for (i, item) in items.iter().enumerate() {
                                writeln!(
                                    out,
                                    "{},{}",
                                    quote(&format!("{k}_{}", i + 1)),
                                    cell(item)
                                )
                                .unwrap();
                            }
                        }
                        _ => writeln!(out, "{},{}", quote(k), cell(v)).unwrap(),
                    }
                }
            }
            Some(t) => {
                for (k, v) in &self.fields {
                    writeln!(out, "# {k}={}", cell(v)).unwrap();
                }
                writeln!(
                    out,
                    "{}",
                    t.columns
                        .iter()
                        .map(|c| quote(c))
                        .collect::<Vec<_>>()
                        .join(",")
                )
                .unwrap();
                for row in &t.rows {
                    writeln!(
                        out,
                        "{}",
                        row.iter().map(cell).collect::<Vec<_>>().join(",")
                    )
                    .unwrap();
                }
            }
        }
        out
    }
}

/// One CSV cell. Floats use the shortest representation that round-trips,
/// so they parse to the same `f64` as the JSON encoding.
fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::Bool(b) => b.to_string(),
        Value::Number(n) => {
            if n.is_f64() {
                format_f64(n.as_f64().expect("f64 numbers convert"))
            } else {
                n.to_string()
            }
        }
        Value::String(s) => quote(s),
        Value::Array(items) => quote(&items.iter().map(cell).collect::<Vec<_>>().join(",")),
        Value::Object(_) => quote(&v.to_string()),
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde::Serialize;

    fn doc() -> Document {
        Document::new(RunConfig::new("typical", Format::Json, "-".into()))
    }

    #[test]
    fn csv_record_spreads_arrays() {
        let mut d = doc();
        d.real("xi", 4.0)
            .field("spectrum", nums(&[0.75, 1e-7]))
            .real("log_det", f64::NEG_INFINITY);
        let csv = d.render(Format::Csv);
        let lines: Vec<&str> = csv.lines().collect();
        assert!(lines[0].starts_with("# config command=typical"));
        assert_eq!(
            &lines[1..],
            [
                "quantity,value",
                "xi,4",
                "spectrum_1,0.75",
                "spectrum_2,1e-7",
                "log_det,"
            ]
        );
    }

    #[test]
    fn json_keeps_insertion_order_and_rows() {
        #[derive(Serialize)]
        struct Row {
            z: f64,
            a: usize,
        }
        let mut d = doc();
        d.real("b", 1.5).real("a", 0.1);
        d.table = Some(Table::from_records(&[Row { z: 0.5, a: 3 }]));
        let json = d.render(Format::Json);
        let (b, a) = (
            json.find("\"b\"").unwrap(),
            json.find("\"a\": 0.1").unwrap(),
        );
        assert!(json.find("\"config\"").unwrap() < b && b < a);
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["rows"][0]["z"], 0.5);
        let csv = d.render(Format::Csv);
        assert!(csv.contains("# b=1.5\n# a=0.1\nz,a\n0.5,3\n"));
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("plain"), "plain");
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("say \"x\""), "\"say \"\"x\"\"\"");
    }
}
