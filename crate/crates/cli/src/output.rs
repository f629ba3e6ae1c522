//! CSV and JSON emitters.
//!
//! Floats in CSV are written as `{:.16e}` (17 significant digits) so a
//! reimport is bit-exact; records end in `\n`.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::Failure;

pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn optional(x: Option<f64>) -> String {
    x.map(float).unwrap_or_default()
}

/// Builds a CSV document in memory.
pub struct Table {
    writer: csv::Writer<Vec<u8>>,
    preamble: String,
}

impl Table {
    pub fn new<S: AsRef<str>>(header: &[S]) -> Self {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(header.iter().map(|h| h.as_ref()))
            .expect("in-memory write");
        Self {
            writer,
            preamble: String::new(),
        }
    }

    /// A `# ` comment line placed before the header.
    pub fn comment(&mut self, line: &str) {
        self.preamble.push_str("# ");
        self.preamble.push_str(line);
        self.preamble.push('\n');
    }

    pub fn row<S: AsRef<str>>(&mut self, fields: &[S]) {
        self.writer
            .write_record(fields.iter().map(|f| f.as_ref()))
            .expect("in-memory write");
    }

    pub fn finish(self) -> String {
        let body = self.writer.into_inner().expect("in-memory flush");
        let mut out = self.preamble;
        out.push_str(std::str::from_utf8(&body).expect("utf-8 fields"));
        out
    }
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

/// Writes `text` to `path`, or to standard output when `path` is `None`.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::io("standard output", e))
        }
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::io(format!("writing {}", path.display()), e))
}

pub fn create_dir(path: &Path) -> Result<(), Failure> {
    fs::create_dir_all(path).map_err(|e| Failure::io(format!("creating {}", path.display()), e))
}
