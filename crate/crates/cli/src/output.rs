//! CSV tables with `#` comment headers.

use std::io::Write;

/// A cell that could not be computed.
pub const FAILED: &str = "ERR";

/// Shortest decimal that parses back to the same `f64`.
pub fn number(x: f64) -> String {
    format!("{x:?}")
}

#[derive(Debug, Clone, Default)]
pub struct Table {
    pub comments: Vec<String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            ..Self::default()
        }
    }

    pub fn comment(&mut self, line: impl Into<String>) {
        self.comments.push(line.into());
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for line in &self.comments {
            if line.is_empty() {
                out.extend_from_slice(b"#\n");
            } else {
                writeln!(out, "# {line}").unwrap();
            }
        }
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        writer.write_record(&self.columns).unwrap();
        for row in &self.rows {
            writer.write_record(row).unwrap();
        }
        writer.into_inner().expect("in-memory writer")
    }
}
