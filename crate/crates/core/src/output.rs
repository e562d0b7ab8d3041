//! Rendering of command results as aligned text, CSV or JSON.
//!
//! Numbers are rounded once, before rendering, so every format shows the same
//! value. JSON keys are sorted and floats use the shortest round-trip form,
//! which makes parse-and-re-render byte-identical.

use clap::ValueEnum;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

/// Default significant digits when `--decimals` is absent.
pub const SIGNIFICANT: usize = 12;

#[derive(Debug, Clone, Copy, Default)]
pub struct NumberStyle {
    pub decimals: Option<usize>,
}

impl NumberStyle {
    pub fn round(&self, x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return x;
        }
        let text = match self.decimals {
            Some(d) => format!("{x:.d$}"),
            None => format!("{x:.*e}", SIGNIFICANT - 1),
        };
        text.parse().unwrap_or(x)
    }

    pub fn text(&self, x: f64) -> String {
        let r = self.round(x);
        match self.decimals {
            Some(d) if r.is_finite() => format!("{r:.d$}"),
            _ if r == 0.0 => "0".to_string(),
            _ if r.is_finite() && (1e-4..1e15).contains(&r.abs()) => format!("{r}"),
            _ => format!("{r:e}"),
        }
    }

    fn value(&self, v: &Value) -> Value {
        match v {
            Value::Number(n) if n.is_f64() => n.as_f64().map(|x| self.round(x)).map_or(Value::Null, json_number),
            Value::Array(a) => Value::Array(a.iter().map(|x| self.value(x)).collect()),
            Value::Object(o) => Value::Object(o.iter().map(|(k, x)| (k.clone(), self.value(x))).collect()),
            other => other.clone(),
        }
    }

    fn cell(&self, v: &Value) -> String {
        match v {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            Value::Number(n) if n.is_f64() => self.text(n.as_f64().unwrap_or(f64::NAN)),
            other => other.to_string(),
        }
    }
}

/// A float as JSON, or null when it is not finite.
pub fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

/// A command's result: one table plus summary fields.
#[derive(Debug, Clone, Default)]
pub struct Output {
    pub command: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Value>>,
    pub summary: Vec<(String, Value)>,
}

impl Output {
    pub fn new(command: &str, columns: &[&str]) -> Self {
        Self {
            command: command.to_string(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, row: Vec<Value>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn summarize(&mut self, key: &str, value: Value) {
        self.summary.push((key.to_string(), value));
    }

    pub fn render(&self, format: Format, style: NumberStyle, meta: Option<Value>) -> String {
        match format {
            Format::Json => self.json(style, meta),
            Format::Csv => self.csv(style),
            Format::Table => self.table(style),
        }
    }

    fn json(&self, style: NumberStyle, meta: Option<Value>) -> String {
        let mut doc = Map::new();
        doc.insert("command".into(), Value::String(self.command.clone()));
        let rows = self
            .rows
            .iter()
            .map(|r| Value::Object(self.columns.iter().cloned().zip(r.iter().map(|v| style.value(v))).collect()))
            .collect();
        doc.insert("rows".into(), Value::Array(rows));
        let summary: Map<String, Value> = self.summary.iter().map(|(k, v)| (k.clone(), style.value(v))).collect();
        doc.insert("summary".into(), Value::Object(summary));
        if let Some(meta) = meta {
            doc.insert("meta".into(), meta);
        }
        let mut text = serde_json::to_string_pretty(&Value::Object(doc)).expect("values serialize");
        text.push('\n');
        text
    }

    fn csv(&self, style: NumberStyle) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for r in &self.rows {
            w.write_record(r.iter().map(|v| style.cell(v))).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 cells")
    }

    fn table(&self, style: NumberStyle) -> String {
        let cells: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(|v| style.cell(v)).collect()).collect();
        let mut widths: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &cells {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |items: &[String]| {
            let padded: Vec<String> = items.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect();
            padded.join("  ").trim_end().to_string() + "\n"
        };
        let mut out = String::new();
        if !self.columns.is_empty() {
            out += &line(&self.columns);
            for r in &cells {
                out += &line(r);
            }
        }
        if !self.summary.is_empty() {
            if !out.is_empty() {
                out.push('\n');
            }
            for (k, v) in &self.summary {
                out += &format!("{k}: {}\n", style.cell(&style.value(v)));
            }
        }
        out
    }
}
