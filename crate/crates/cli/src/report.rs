//! One report shape for every command, rendered as text, JSON or CSV.

use std::io::Write;

use serde_json::{json, Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: &'static str,
    pub params: Map<String, Value>,
    /// Flat rows; every row of one report has the same keys in the same order.
    pub results: Vec<Map<String, Value>>,
    /// Scalar outcomes that are not per-row, e.g. aggregate residuals.
    pub summary: Map<String, Value>,
    /// Free-form lines shown only in text output.
    pub notes: Vec<String>,
    pub max_residual: Option<f64>,
    pub pass: bool,
    pub seed: u64,
}

impl Report {
    pub fn new(command: &'static str, seed: u64) -> Self {
        Self {
            command,
            params: Map::new(),
            results: Vec::new(),
            summary: Map::new(),
            notes: Vec::new(),
            max_residual: None,
            pass: true,
            seed,
        }
    }

    pub fn param(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.params.insert(key.to_owned(), value.into());
        self
    }

    pub fn stat(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.summary.insert(key.to_owned(), value.into());
        self
    }

    pub fn to_json(&self) -> Value {
        json!({
            "command": self.command,
            "params": self.params,
            "results": self.results,
            "summary": self.summary,
            "max_residual": self.max_residual,
            "pass": self.pass,
            "seed": self.seed,
            "version": env!("CARGO_PKG_VERSION"),
        })
    }

    pub fn render(&self, format: Format, out: &mut dyn Write) -> std::io::Result<()> {
        match format {
            Format::Json => {
                serde_json::to_writer_pretty(&mut *out, &self.to_json())?;
                writeln!(out)
            }
            Format::Csv => self.render_csv(out),
            Format::Text => self.render_text(out),
        }
    }

    fn render_csv(&self, out: &mut dyn Write) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        if let Some(first) = self.results.first() {
            w.write_record(first.keys())?;
        }
        for row in &self.results {
            w.write_record(row.values().map(scalar))?;
        }
        w.flush()
    }

    fn render_text(&self, out: &mut dyn Write) -> std::io::Result<()> {
        writeln!(
            out,
            "# jtheta {} {}",
            self.command,
            env!("CARGO_PKG_VERSION")
        )?;
        writeln!(out, "# seed {}", self.seed)?;
        for (k, v) in &self.params {
            writeln!(out, "# {k} = {}", scalar(v))?;
        }
        for row in &self.results {
            let line: Vec<String> = row
                .iter()
                .map(|(k, v)| format!("{k}={}", scalar(v)))
                .collect();
            writeln!(out, "{}", line.join("  "))?;
        }
        for (k, v) in &self.summary {
            writeln!(out, "{k} = {}", scalar(v))?;
        }
        for note in &self.notes {
            writeln!(out, "{note}")?;
        }
        if let Some(r) = self.max_residual {
            writeln!(out, "max_residual = {r:e}")?;
        }
        writeln!(out, "{}", if self.pass { "PASS" } else { "FAIL" })
    }
}

/// Strings unquoted, numbers in shortest round-trip form.
fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}
