//! Output formats: pretty JSON, a plain-text layout, and CSV of a report's
//! `rows` array.

use serde_json::{Map, Value};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

pub fn render(report: &Map<String, Value>, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            Ok(s)
        }
        Format::Table => {
            let mut out = String::new();
            write_object(&mut out, report, 0);
            Ok(out)
        }
        Format::Csv => csv_rows(report),
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(scalar).collect::<Vec<_>>().join(" "),
        Value::Object(_) => serde_json::to_string(v).expect("value serializes"),
        other => other.to_string(),
    }
}

fn write_object(out: &mut String, obj: &Map<String, Value>, indent: usize) {
    let pad = " ".repeat(indent);
    for (key, value) in obj {
        match value {
            Value::Object(inner) => {
                out.push_str(&format!("{pad}{key}:\n"));
                write_object(out, inner, indent + 2);
            }
            Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object) => {
                out.push_str(&format!("{pad}{key}:\n"));
                write_table(out, items, indent + 2);
            }
            other => out.push_str(&format!("{pad}{key}: {}\n", scalar(other))),
        }
    }
}

/// Aligned columns for an array of objects; nested values are flattened.
fn write_table(out: &mut String, rows: &[Value], indent: usize) {
    let pad = " ".repeat(indent);
    let headers: Vec<&String> = rows[0].as_object().expect("rows are objects").keys().collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            let obj = r.as_object().expect("rows are objects");
            headers
                .iter()
                .map(|h| obj.get(*h).map(scalar).unwrap_or_default())
                .collect()
        })
        .collect();
    let widths: Vec<usize> = headers
        .iter()
        .enumerate()
        .map(|(i, h)| cells.iter().map(|r| r[i].len()).chain([h.len()]).max().unwrap_or(0))
        .collect();
    let line = |values: Vec<&str>| {
        let parts: Vec<String> = values
            .iter()
            .zip(&widths)
            .map(|(v, w)| format!("{v:<w$}"))
            .collect();
        format!("{pad}{}\n", parts.join("  ").trim_end())
    };
    out.push_str(&line(headers.iter().map(|h| h.as_str()).collect()));
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
}

fn csv_rows(report: &Map<String, Value>) -> Result<String, CliError> {
    let rows = match report.get("rows") {
        Some(Value::Array(rows)) => rows,
        _ => {
            return Err(CliError::input(
                "csv output is not available for this command".to_string(),
            ))
        }
    };
    let mut writer = csv::Writer::from_writer(Vec::new());
    if let Some(Value::Object(first)) = rows.first() {
        let headers: Vec<&String> = first.keys().collect();
        writer
            .write_record(headers.iter().map(|h| h.as_str()))
            .map_err(|e| CliError::internal(e.to_string()))?;
        for row in rows {
            let obj = row.as_object().expect("rows are objects");
            let record: Vec<String> = headers
                .iter()
                .map(|h| obj.get(*h).map(scalar).unwrap_or_default())
                .collect();
            writer
                .write_record(&record)
                .map_err(|e| CliError::internal(e.to_string()))?;
        }
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::internal(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::internal(e.to_string()))
}
