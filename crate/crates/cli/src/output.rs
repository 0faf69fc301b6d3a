use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
    /// One `key=value` line.
    Text,
}

/// A rendered result: a JSON value plus optional specialised tabular and
/// one-line renderings. Without them a flat object becomes a header row plus
/// one data row, and `key=value` pairs.
pub struct Report {
    json: Value,
    table: Option<(Vec<String>, Vec<Vec<String>>)>,
    text: Option<String>,
    /// JSON lines instead of one document.
    lines: bool,
}

impl Report {
    pub fn object(value: impl Serialize) -> Self {
        Report { json: serde_json::to_value(value).expect("reports serialize"), table: None, text: None, lines: false }
    }

    pub fn with_text(mut self, text: String) -> Self {
        self.text = Some(text);
        self
    }

    pub fn with_table(mut self, header: &[&str], rows: Vec<Vec<String>>) -> Self {
        self.table = Some((header.iter().map(|s| s.to_string()).collect(), rows));
        self
    }

    /// TSV and text renderings taken from `flat` instead of the JSON value.
    pub fn with_flat_table(mut self, flat: &Value) -> Self {
        let table = flat_table(flat);
        let (header, row) = (&table.0, &table.1[0]);
        let pairs: Vec<String> = header.iter().zip(row).map(|(k, v)| format!("{k}={v}")).collect();
        self.text = Some(pairs.join(" "));
        self.table = Some(table);
        self
    }

    /// Rows rendered as JSON lines or as a TSV table.
    pub fn rows<T: Serialize>(header: &[&str], items: &[T], to_row: impl Fn(&T) -> Vec<String>) -> Self {
        let json = Value::Array(items.iter().map(|r| serde_json::to_value(r).expect("rows serialize")).collect());
        let rows = items.iter().map(to_row).collect();
        Report { json, table: None, text: None, lines: true }.with_table(header, rows)
    }

    pub fn write(&self, format: Format, out: &mut impl Write) -> io::Result<()> {
        match format {
            Format::Json if self.lines => {
                for v in self.json.as_array().into_iter().flatten() {
                    writeln!(out, "{}", serde_json::to_string(v)?)?;
                }
                Ok(())
            }
            Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&self.json)?),
            Format::Tsv => {
                let (header, rows) = match &self.table {
                    Some(t) => t.clone(),
                    None => flat_table(&self.json),
                };
                writeln!(out, "{}", header.join("\t"))?;
                for row in rows {
                    writeln!(out, "{}", row.join("\t"))?;
                }
                Ok(())
            }
            Format::Text => match &self.text {
                Some(t) => writeln!(out, "{t}"),
                None => {
                    let (header, rows) = flat_table(&self.json);
                    let row = rows.into_iter().next().unwrap_or_default();
                    let pairs: Vec<String> = header.iter().zip(row).map(|(k, v)| format!("{k}={v}")).collect();
                    writeln!(out, "{}", pairs.join(" "))
                }
            },
        }
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flat_table(v: &Value) -> (Vec<String>, Vec<Vec<String>>) {
    match v {
        Value::Object(map) => {
            let map: &Map<String, Value> = map;
            (map.keys().cloned().collect(), vec![map.values().map(cell).collect()])
        }
        other => (vec!["value".into()], vec![vec![cell(other)]]),
    }
}
