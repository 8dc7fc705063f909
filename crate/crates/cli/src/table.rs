//! Tabular output in TSV or JSON.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde_json::{json, Map, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

/// Run metadata printed at the top of every output.
#[derive(Clone, Debug, Default)]
pub struct Header {
    pub command: String,
    pub fields: Vec<(String, String)>,
}

impl Header {
    pub fn new(command: &str) -> Self {
        Self { command: command.into(), fields: Vec::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.fields.push((key.into(), value.to_string()));
        self
    }
}

#[derive(Clone, Debug)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: &str, columns: &[&str]) -> Self {
        Self { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }
}

/// Renders the header, the tables and a status line.
pub fn render(format: Format, header: &Header, tables: &[Table], failures: &[String]) -> String {
    match format {
        Format::Tsv => {
            let mut out = String::new();
            let meta: Vec<String> = header.fields.iter().map(|(k, v)| format!("{k}={v}")).collect();
            writeln!(out, "# hypertoric {} {}", header.command, meta.join(" ")).unwrap();
            for t in tables {
                writeln!(out, "## {}", t.name).unwrap();
                writeln!(out, "{}", t.columns.join("\t")).unwrap();
                for r in &t.rows {
                    writeln!(out, "{}", r.join("\t")).unwrap();
                }
            }
            for f in failures {
                writeln!(out, "# failure: {f}").unwrap();
            }
            writeln!(out, "# status: {}", if failures.is_empty() { "PASS" } else { "FAIL" }).unwrap();
            out
        }
        Format::Json => {
            let meta: Map<String, Value> = header.fields.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
            let tables: Vec<Value> = tables
                .iter()
                .map(|t| {
                    let rows: Vec<Value> = t
                        .rows
                        .iter()
                        .map(|r| {
                            Value::Object(t.columns.iter().cloned().zip(r.iter().map(|c| Value::String(c.clone()))).collect())
                        })
                        .collect();
                    json!({ "name": t.name, "columns": t.columns, "rows": rows })
                })
                .collect();
            let v = json!({
                "command": header.command,
                "header": meta,
                "tables": tables,
                "failures": failures,
                "status": if failures.is_empty() { "pass" } else { "fail" },
            });
            serde_json::to_string_pretty(&v).unwrap() + "\n"
        }
    }
}
