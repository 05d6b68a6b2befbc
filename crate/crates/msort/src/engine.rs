//! The meaning-sort pipeline: annotate words with codes, merge in group
//! markers, sort by code, and condense into labelled groups. Also the two
//! derived modes: pair-corpus sorting and keyword line grouping.

use std::cmp::Ordering;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codes::{compare_codes, CategoryCode, CODE_LEN};
use crate::lexicon::{CodedLexicon, SensePolicy};
use crate::markers::MarkerTable;

/// An input word with an opaque payload that rides along unsorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub word: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

impl Entry {
    pub fn new(word: impl Into<String>) -> Entry {
        Entry { word: word.into(), payload: None }
    }

    pub fn with_payload(word: impl Into<String>, payload: impl Into<String>) -> Entry {
        Entry { word: word.into(), payload: Some(payload.into()) }
    }

    /// Parse a word-list line: the text before the first tab is the word,
    /// anything after it is the payload.
    pub fn parse(line: &str) -> Entry {
        match line.split_once('\t') {
            Some((word, payload)) => Entry::with_payload(word, payload),
            None => Entry::new(line),
        }
    }
}

/// One (code, word) row produced by sense expansion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub code: CategoryCode,
    pub word: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

/// Whether a sorted row is a group marker or an annotated word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowKind {
    Marker,
    Word,
}

/// A row of the intermediate sorted sequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SortedRow {
    pub code: CategoryCode,
    pub kind: RowKind,
    /// Marker label (unparenthesized) or surface word.
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub payload: Option<String>,
}

/// A labelled group of words in final order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    /// Marker label; empty for words preceding the first marker.
    pub label: String,
    pub words: Vec<Entry>,
}

/// The condensed result: labelled groups plus words absent from the lexicon.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GroupedList {
    pub groups: Vec<Group>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknowns: Vec<Entry>,
}

/// A group whose words are split into lines of shared code prefixes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineGroup {
    pub label: String,
    pub lines: Vec<Vec<Entry>>,
}

/// Keyword-grouping result: per-group prefix lines plus unknowns.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct LineGroupedList {
    pub groups: Vec<LineGroup>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub unknowns: Vec<Entry>,
}

/// Condensing switches; both default on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CondenseOptions {
    pub dedup_within_group: bool,
    pub drop_empty_groups: bool,
}

impl Default for CondenseOptions {
    fn default() -> CondenseOptions {
        CondenseOptions { dedup_within_group: true, drop_empty_groups: true }
    }
}

/// How rows with equal codes are ordered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Keep input order.
    #[default]
    Stable,
    /// Numeric payloads descending; rows without one keep input order after
    /// the numeric rows.
    PayloadDescending,
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("prefix length {0} out of range 1..={CODE_LEN}")]
    BadPrefixLength(usize),
    #[error("no column named {0:?}")]
    MissingColumn(String),
}

/// Expand each word into one annotation per sense, preserving input order;
/// words absent from the lexicon land in the second list.
pub fn annotate(words: &[Entry], lex: &CodedLexicon) -> (Vec<Annotation>, Vec<Entry>) {
    let mut annotations = Vec::new();
    let mut unknowns = Vec::new();
    for entry in words {
        match lex.lookup(&entry.word) {
            Some(senses) => annotations.extend(senses.iter().map(|&code| Annotation {
                code,
                word: entry.word.clone(),
                payload: entry.payload.clone(),
            })),
            None => unknowns.push(entry.clone()),
        }
    }
    (annotations, unknowns)
}

/// Merge marker rows in and stable-sort everything by code. At equal codes
/// markers precede words, so each marker heads its own group.
pub fn sort_annotations(rows: &[Annotation], markers: &MarkerTable) -> Vec<SortedRow> {
    sort_annotations_by(rows, markers, TieBreak::Stable)
}

/// [`sort_annotations`] with an explicit equal-code tie-break.
pub fn sort_annotations_by(
    rows: &[Annotation],
    markers: &MarkerTable,
    tie_break: TieBreak,
) -> Vec<SortedRow> {
    let mut out: Vec<SortedRow> = markers
        .rows()
        .iter()
        .map(|(code, label)| SortedRow {
            code: *code,
            kind: RowKind::Marker,
            text: label.clone(),
            payload: None,
        })
        .collect();
    out.extend(rows.iter().map(|a| SortedRow {
        code: a.code,
        kind: RowKind::Word,
        text: a.word.clone(),
        payload: a.payload.clone(),
    }));
    out.sort_by(|a, b| {
        compare_codes(&a.code, &b.code)
            .then_with(|| kind_rank(a.kind).cmp(&kind_rank(b.kind)))
            .then_with(|| match tie_break {
                TieBreak::Stable => Ordering::Equal,
                TieBreak::PayloadDescending => payload_desc(a, b),
            })
    });
    out
}

fn kind_rank(kind: RowKind) -> u8 {
    match kind {
        RowKind::Marker => 0,
        RowKind::Word => 1,
    }
}

fn payload_desc(a: &SortedRow, b: &SortedRow) -> Ordering {
    let num = |row: &SortedRow| -> Option<f64> {
        row.payload
            .as_deref()
            .and_then(|p| p.trim().parse::<f64>().ok())
            .filter(|n| !n.is_nan())
    };
    match (num(a), num(b)) {
        (Some(x), Some(y)) => y.partial_cmp(&x).unwrap_or(Ordering::Equal),
        (Some(_), None) => Ordering::Less,
        (None, Some(_)) => Ordering::Greater,
        (None, None) => Ordering::Equal,
    }
}

/// Delete codes, bucket words under the preceding marker, and prune.
/// Rows before the first marker form a leading unlabeled group, kept only
/// when non-empty.
pub fn condense(rows: &[SortedRow], options: CondenseOptions) -> GroupedList {
    let mut groups: Vec<Group> = vec![Group { label: String::new(), words: Vec::new() }];
    for row in rows {
        match row.kind {
            RowKind::Marker => groups.push(Group { label: row.text.clone(), words: Vec::new() }),
            RowKind::Word => {
                let group = groups.last_mut().expect("leading group always present");
                if options.dedup_within_group && group.words.iter().any(|e| e.word == row.text) {
                    continue;
                }
                group.words.push(Entry { word: row.text.clone(), payload: row.payload.clone() });
            }
        }
    }
    let groups = groups
        .into_iter()
        .enumerate()
        .filter(|(i, g)| {
            // The synthetic leading group only exists when it caught words;
            // marker-derived groups survive when empty-group dropping is off.
            let required = *i > 0 && !options.drop_empty_groups;
            required || !g.words.is_empty()
        })
        .map(|(_, g)| g)
        .collect();
    GroupedList { groups, unknowns: Vec::new() }
}

/// The full pipeline: annotate, sort with markers, condense. Unknown words
/// are carried through in input order.
pub fn msort(
    words: &[Entry],
    lex: &CodedLexicon,
    markers: &MarkerTable,
    options: CondenseOptions,
) -> GroupedList {
    msort_by(words, lex, markers, options, TieBreak::Stable)
}

/// [`msort`] with an explicit equal-code tie-break.
pub fn msort_by(
    words: &[Entry],
    lex: &CodedLexicon,
    markers: &MarkerTable,
    options: CondenseOptions,
    tie_break: TieBreak,
) -> GroupedList {
    let (annotations, unknowns) = annotate(words, lex);
    let rows = sort_annotations_by(&annotations, markers, tie_break);
    let mut grouped = condense(&rows, options);
    grouped.unknowns = unknowns;
    grouped
}

/// A TSV corpus: a header naming the columns, then rows of equal arity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCorpus {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing header row")]
    MissingHeader,
    #[error("line {line}: expected {expected} columns, got {got}")]
    ColumnCount { line: usize, expected: usize, got: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl PairCorpus {
    /// Parse a TSV stream whose first non-comment line is the header.
    pub fn from_reader(reader: impl BufRead) -> Result<PairCorpus, CorpusError> {
        let mut header: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches(['\r', '\n']);
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<String> = text.split('\t').map(str::to_string).collect();
            match &header {
                None => header = Some(fields),
                Some(h) => {
                    if fields.len() != h.len() {
                        return Err(CorpusError::ColumnCount {
                            line: line_no,
                            expected: h.len(),
                            got: fields.len(),
                        });
                    }
                    rows.push(fields);
                }
            }
        }
        Ok(PairCorpus { header: header.ok_or(CorpusError::MissingHeader)?, rows })
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Per-field sort key: known codes ascend, unknown words sort after all of
/// them (ties stay stable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum PairKey {
    Known(CategoryCode),
    Unknown,
}

/// Stable-sort corpus rows by the sort keys of the named columns, in the
/// order given; all other columns ride along unchanged.
pub fn msort_pairs(
    corpus: &PairCorpus,
    lex: &CodedLexicon,
    key_fields: &[String],
    policy: SensePolicy,
) -> Result<PairCorpus, EngineError> {
    let columns: Vec<usize> = key_fields
        .iter()
        .map(|name| {
            corpus
                .column(name)
                .ok_or_else(|| EngineError::MissingColumn(name.clone()))
        })
        .collect::<Result<_, _>>()?;
    let mut rows = corpus.rows.clone();
    let key_of = |row: &Vec<String>| -> Vec<PairKey> {
        columns
            .iter()
            .map(|&c| match lex.sort_key(&row[c], policy) {
                Some(code) => PairKey::Known(code),
                None => PairKey::Unknown,
            })
            .collect()
    };
    rows.sort_by_cached_key(key_of);
    Ok(PairCorpus { header: corpus.header.clone(), rows })
}

/// Meaning-sort the words, then split each group into display lines of
/// words whose placing codes share the first `prefix_length` symbols.
pub fn group_keywords(
    words: &[Entry],
    lex: &CodedLexicon,
    markers: &MarkerTable,
    prefix_length: usize,
) -> Result<LineGroupedList, EngineError> {
    if prefix_length == 0 || prefix_length > CODE_LEN {
        return Err(EngineError::BadPrefixLength(prefix_length));
    }
    let (annotations, unknowns) = annotate(words, lex);
    let rows = sort_annotations(&annotations, markers);

    // Condense while keeping each word's placing code for the line split.
    let mut groups: Vec<(String, Vec<(CategoryCode, Entry)>)> = vec![(String::new(), Vec::new())];
    for row in &rows {
        match row.kind {
            RowKind::Marker => groups.push((row.text.clone(), Vec::new())),
            RowKind::Word => {
                let (_, words) = groups.last_mut().expect("leading group always present");
                if words.iter().any(|(_, e)| e.word == row.text) {
                    continue;
                }
                words.push((
                    row.code,
                    Entry { word: row.text.clone(), payload: row.payload.clone() },
                ));
            }
        }
    }

    let grouped = groups
        .into_iter()
        .filter(|(_, words)| !words.is_empty())
        .map(|(label, words)| {
            let mut lines: Vec<Vec<Entry>> = Vec::new();
            let mut last_prefix: Option<Vec<_>> = None;
            for (code, entry) in words {
                let prefix = code.prefix(prefix_length).to_vec();
                if last_prefix.as_ref() != Some(&prefix) {
                    lines.push(Vec::new());
                    last_prefix = Some(prefix);
                }
                lines.last_mut().unwrap().push(entry);
            }
            LineGroup { label, lines }
        })
        .collect();
    Ok(LineGroupedList { groups: grouped, unknowns })
}
