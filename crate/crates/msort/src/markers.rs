//! Marker tables: labelled codes that become group headings when sorted
//! into a word list.

use std::io::BufRead;

use thiserror::Error;

use crate::codes::{CategoryCode, CodeError};

/// Why a marker file was rejected.
#[derive(Debug, Error)]
pub enum MarkerError {
    #[error("line {line}: expected <code>TAB<label>")]
    MissingSeparator { line: usize },
    #[error("line {line}: {source}")]
    Code { line: usize, source: CodeError },
    #[error("line {line}: empty label")]
    EmptyLabel { line: usize },
    #[error("line {line}: duplicate label {label:?}")]
    DuplicateLabel { line: usize, label: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An ordered list of (code, label) rows. Labels are unique so that group
/// headings stay unambiguous; codes may repeat.
#[derive(Debug, Clone, Default)]
pub struct MarkerTable {
    entries: Vec<(CategoryCode, String)>,
}

impl MarkerTable {
    pub fn new(entries: Vec<(CategoryCode, String)>) -> MarkerTable {
        MarkerTable { entries }
    }

    /// Parse a marker file: one `<code>TAB<label>` per line, blank lines
    /// and `#` comment lines skipped.
    pub fn from_reader(reader: impl BufRead) -> Result<MarkerTable, MarkerError> {
        let mut entries: Vec<(CategoryCode, String)> = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches('\r');
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let (code, label) = text
                .split_once('\t')
                .ok_or(MarkerError::MissingSeparator { line: line_no })?;
            let code = code
                .trim()
                .parse()
                .map_err(|source| MarkerError::Code { line: line_no, source })?;
            let label = label.trim();
            if label.is_empty() {
                return Err(MarkerError::EmptyLabel { line: line_no });
            }
            if entries.iter().any(|(_, l)| l == label) {
                return Err(MarkerError::DuplicateLabel {
                    line: line_no,
                    label: label.to_string(),
                });
            }
            entries.push((code, label.to_string()));
        }
        Ok(MarkerTable { entries })
    }

    /// The marker set shipped with the crate, aligned with the builtin
    /// remap rules.
    pub fn builtin() -> MarkerTable {
        static DATA: &str = include_str!("../data/markers_default.tsv");
        MarkerTable::from_reader(DATA.as_bytes()).expect("builtin markers parse")
    }

    /// Rows in file order.
    pub fn rows(&self) -> &[(CategoryCode, String)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}
