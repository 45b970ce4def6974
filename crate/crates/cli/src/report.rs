//! The report document every command produces, and its three renderings.
//!
//! The JSON layout is described by `docs/report.schema.json`.  CSV is a flat
//! projection of `rows`: one column per key, in first-seen order.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::args::Format;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    /// Subcommand name.
    pub command: String,
    /// The arguments as given, without the program name.
    pub argv: Vec<String>,
    pub version: String,
    pub status: Status,
    /// Truncation mode, merge order, tolerances and similar settings.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub provenance: Map<String, Value>,
    /// Scalar results that do not belong to any row.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub summary: Map<String, Value>,
    /// Wall time; omitted under `--deterministic`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub meta: Meta,
    pub params: Map<String, Value>,
    pub rows: Vec<Map<String, Value>>,
}

impl ReportDocument {
    pub fn new(command: &str, argv: &[String]) -> Self {
        ReportDocument {
            meta: Meta {
                command: command.to_string(),
                argv: argv.to_vec(),
                version: rkit::VERSION.to_string(),
                status: Status::Ok,
                provenance: Map::new(),
                summary: Map::new(),
                elapsed_ms: None,
            },
            params: Map::new(),
            rows: Vec::new(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    pub fn provenance(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.provenance.insert(key.to_string(), value.into());
        self
    }

    pub fn summary(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.meta.summary.insert(key.to_string(), value.into());
        self
    }

    /// Appends a row; `row` must be a JSON object.
    pub fn row(&mut self, row: Value) {
        match row {
            Value::Object(map) => self.rows.push(map),
            other => panic!("report rows must be objects, got {other}"),
        }
    }

    pub fn fail(&mut self) {
        self.meta.status = Status::Failed;
    }

    pub fn failed(&self) -> bool {
        self.meta.status == Status::Failed
    }

    pub fn parse_json(text: &str) -> Result<Self, CliError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => Ok(self.to_text()),
        }
    }

    pub fn to_json(&self) -> Result<String, CliError> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    fn columns(&self) -> Vec<&str> {
        let mut cols: Vec<&str> = Vec::new();
        for row in &self.rows {
            for key in row.keys() {
                if !cols.contains(&key.as_str()) {
                    cols.push(key);
                }
            }
        }
        cols
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let cols = self.columns();
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&cols)?;
        for row in &self.rows {
            w.write_record(
                cols.iter()
                    .map(|c| row.get(*c).map(csv_cell).unwrap_or_default()),
            )?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "rkit {} ({})", self.meta.command, self.meta.version);
        for (k, v) in &self.params {
            let _ = writeln!(out, "  {k}: {}", text_cell(v));
        }
        for (k, v) in &self.meta.provenance {
            let _ = writeln!(out, "  {k}: {}", text_cell(v));
        }
        let cols = self.columns();
        if !cols.is_empty() {
            let cells: Vec<Vec<String>> = self
                .rows
                .iter()
                .map(|r| {
                    cols.iter()
                        .map(|c| r.get(*c).map(text_cell).unwrap_or_default())
                        .collect()
                })
                .collect();
            let widths: Vec<usize> = cols
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    cells
                        .iter()
                        .map(|r| r[i].len())
                        .chain([c.len()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            out.push('\n');
            let line = |fields: Vec<&str>| -> String {
                let padded: Vec<String> = fields
                    .iter()
                    .zip(&widths)
                    .map(|(f, w)| format!("{f:>w$}"))
                    .collect();
                padded.join("  ").trim_end().to_string()
            };
            let _ = writeln!(out, "{}", line(cols.clone()));
            for row in &cells {
                let _ = writeln!(out, "{}", line(row.iter().map(String::as_str).collect()));
            }
        }
        if !self.meta.summary.is_empty() {
            out.push('\n');
            for (k, v) in &self.meta.summary {
                let _ = writeln!(out, "{k}: {}", text_cell(v));
            }
        }
        let status = match self.meta.status {
            Status::Ok => "ok",
            Status::Failed => "FAILED",
        };
        let _ = writeln!(out, "status: {status}");
        if let Some(ms) = self.meta.elapsed_ms {
            let _ = writeln!(out, "elapsed: {ms:.1} ms");
        }
        out
    }
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn text_cell(v: &Value) -> String {
    match v {
        Value::Null => "-".to_string(),
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let inner: Vec<String> = items.iter().map(text_cell).collect();
            format!("({})", inner.join(", "))
        }
        other => other.to_string(),
    }
}

/// A 128-bit integer as a JSON number when it fits in 64 bits, else a string.
pub fn int_value(n: i128) -> Value {
    match i64::try_from(n) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(n.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn sample() -> ReportDocument {
        let argv = vec!["coeff".to_string(), "--q".to_string(), "2".to_string()];
        let mut doc = ReportDocument::new("coeff", &argv);
        doc.param("family", "sigma_1").param("q", json!([2, 2]));
        doc.provenance("mode", "closed");
        doc.summary("lhs", 1.5);
        doc.row(
            json!({"q": [2, 2], "symbolic": "7/64 * zeta(3)", "value": 0.131_474_916_159_858_6}),
        );
        doc.row(json!({"q": [1, 2], "symbolic": null, "value": -0.1, "extra": "x,y"}));
        doc.meta.elapsed_ms = Some(1.25);
        doc
    }

    #[test]
    fn json_round_trip_is_idempotent() {
        let doc = sample();
        let text = doc.to_json().unwrap();
        let back = ReportDocument::parse_json(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_json().unwrap(), text);
    }

    #[test]
    fn empty_sections_are_omitted_and_restored() {
        let doc = ReportDocument::new("eval", &[]);
        let text = doc.to_json().unwrap();
        assert!(!text.contains("provenance"));
        assert!(!text.contains("elapsed_ms"));
        assert_eq!(ReportDocument::parse_json(&text).unwrap(), doc);
    }

    #[test]
    fn csv_projects_rows_with_union_of_columns() {
        let csv = sample().to_csv().unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "q,symbolic,value,extra");
        assert_eq!(lines[1], "\"[2,2]\",7/64 * zeta(3),0.1314749161598586,");
        assert_eq!(lines[2], "\"[1,2]\",,-0.1,\"x,y\"");
    }

    #[test]
    fn text_table_aligns_columns() {
        let text = sample().to_text();
        assert!(text.starts_with("rkit coeff ("));
        assert!(text.contains("(2, 2)  7/64 * zeta(3)"));
        assert!(text.contains("lhs: 1.5"));
        assert!(text.contains("elapsed: 1.2 ms") || text.contains("elapsed: 1.3 ms"));
    }

    #[test]
    fn wide_integers_become_strings() {
        assert_eq!(int_value(-5), json!(-5));
        assert_eq!(int_value(1 << 70), json!("1180591620717411303424"));
    }
}
