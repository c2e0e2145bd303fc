//! Writing JSON, CSV and plain-text output to stdout or a file.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;

use sudler_core::report::VerificationReport;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

pub struct Output {
    path: Option<PathBuf>,
}

impl Output {
    pub fn new(path: Option<PathBuf>) -> Self {
        Output { path }
    }

    fn with<F: FnOnce(&mut dyn Write) -> io::Result<()>>(&self, f: F) -> io::Result<()> {
        match &self.path {
            Some(p) => {
                let mut w = BufWriter::new(File::create(p)?);
                f(&mut w)?;
                w.flush()
            }
            None => {
                let stdout = io::stdout();
                let mut w = stdout.lock();
                f(&mut w)?;
                w.flush()
            }
        }
    }

    pub fn json<T: Serialize + ?Sized>(&self, value: &T) -> io::Result<()> {
        let s = serde_json::to_string_pretty(value).map_err(io::Error::other)?;
        self.with(|w| writeln!(w, "{s}"))
    }

    /// A flat JSON object; CSV and text show `fields` only.
    pub fn value(&self, format: Format, doc: &Value, fields: &[&str]) -> io::Result<()> {
        let cell = |k: &str| match &doc[k] {
            Value::Null => String::new(),
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        match format {
            Format::Json => self.json(doc),
            Format::Csv => self.rows(format, fields, std::iter::once(fields.iter().map(|k| cell(k)).collect())),
            Format::Text => self.with(|w| {
                for k in fields {
                    writeln!(w, "{k} = {}", cell(k))?;
                }
                Ok(())
            }),
        }
    }

    /// A header line and one line per row, comma separated for CSV and
    /// space separated for text.
    pub fn rows(&self, format: Format, header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> io::Result<()> {
        let sep = if format == Format::Text { " " } else { "," };
        self.with(|w| {
            writeln!(w, "{}", header.join(sep))?;
            for r in rows {
                writeln!(w, "{}", r.join(sep))?;
            }
            Ok(())
        })
    }

    pub fn report(&self, format: Format, report: &VerificationReport) -> io::Result<()> {
        match format {
            Format::Json => self.json(report),
            Format::Text => self.with(|w| write!(w, "{}", report.to_text())),
            Format::Csv => self.rows(
                format,
                &["id", "status", "margin"],
                report.cases.iter().map(|c| {
                    let status = serde_json::to_value(c.status).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
                    let id = if c.id.contains([',', '"']) { format!("\"{}\"", c.id.replace('"', "\"\"")) } else { c.id.clone() };
                    vec![id, status, c.margin.map(|m| format!("{m:e}")).unwrap_or_default()]
                }),
            ),
        }
    }
}
