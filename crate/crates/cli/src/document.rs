//! Result document: request echo, named scalars, optional table, notes.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::CliError;

pub const SIGNIFICANT_DIGITS: usize = 9;

/// Rounds to [`SIGNIFICANT_DIGITS`] significant digits. Non-finite values pass
/// through unchanged.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().unwrap_or(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDocument {
    pub request: BTreeMap<String, Value>,
    pub results: BTreeMap<String, f64>,
    pub table: Option<Table>,
    pub notes: Vec<String>,
}

impl ResultDocument {
    pub fn new(subcommand: &str) -> Self {
        let mut request = BTreeMap::new();
        request.insert("subcommand".to_string(), Value::from(subcommand));
        Self { request, results: BTreeMap::new(), table: None, notes: Vec::new() }
    }

    pub fn echo(&mut self, key: &str, value: impl Into<Value>) {
        self.request.insert(key.to_string(), value.into());
    }

    pub fn echo_number(&mut self, key: &str, value: f64) {
        self.echo(key, round_sig(value));
    }

    pub fn echo_vector(&mut self, key: &str, v: [f64; 3]) {
        self.echo(key, v.iter().map(|&c| round_sig(c)).collect::<Vec<_>>());
    }

    /// Records a named scalar; non-finite values become a note instead, since
    /// JSON has no representation for them.
    pub fn result(&mut self, name: &str, value: f64) {
        if value.is_finite() {
            self.results.insert(name.to_string(), round_sig(value));
        } else {
            self.note(format!("{name} is not finite ({value})"));
        }
    }

    pub fn flag(&mut self, name: &str, value: bool) {
        self.result(name, if value { 1.0 } else { 0.0 });
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn set_table(&mut self, columns: &[&str], rows: Vec<Vec<f64>>) {
        let rows = rows.into_iter().map(|r| r.into_iter().map(round_sig).collect()).collect();
        self.table = Some(Table { columns: columns.iter().map(|c| c.to_string()).collect(), rows });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document values are finite");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let table = self
            .table
            .as_ref()
            .ok_or_else(|| CliError::Usage("--format csv needs a tabular result; this subcommand has none".into()))?;
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        let io = |e: csv::Error| CliError::Usage(format!("csv: {e}"));
        w.write_record(&table.columns).map_err(io)?;
        for row in &table.rows {
            w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Usage(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is ascii"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

pub fn emit(doc: &ResultDocument, format: Format, out: &mut dyn Write) -> Result<(), CliError> {
    let text = match format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv()?,
    };
    out.write_all(text.as_bytes()).map_err(|e| CliError::Usage(format!("write failed: {e}")))
}
