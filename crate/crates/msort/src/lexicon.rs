//! Coded lexicon: word → category-code senses, with optional remapping
//! applied at load time.

use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use crate::codes::{CategoryCode, CodeError};
use crate::remap::RemapTable;

/// Which sense supplies a word's single sort key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum SensePolicy {
    /// First sense in listing order.
    FirstSense,
    /// Least code under the alphabet order.
    #[default]
    MinimumCode,
}

/// Why a lexicon file was rejected.
#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("line {line}: expected <word>TAB<code>")]
    MissingSeparator { line: usize },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: {source}")]
    Code { line: usize, source: CodeError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// A non-fatal load observation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LexiconWarning {
    /// Remapping was requested but no rule matched; code kept as-is.
    UnmatchedRemap { line: usize, word: String, code: CategoryCode },
}

impl std::fmt::Display for LexiconWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            LexiconWarning::UnmatchedRemap { line, word, code } => {
                write!(f, "line {line}: code {code} for {word:?} matched no remap rule; kept")
            }
        }
    }
}

/// Word → ordered sense codes. Sense order is the listing order of the
/// source; duplicate (word, code) pairs collapse to the first occurrence.
#[derive(Debug, Clone, Default)]
pub struct CodedLexicon {
    senses: HashMap<String, Vec<CategoryCode>>,
}

impl CodedLexicon {
    /// Parse `<word>TAB<code>` lines, skipping blanks and `#` comments.
    /// When a remap table is given, every code is rewritten through it;
    /// codes matching no rule are kept and reported as warnings.
    pub fn load(
        reader: impl BufRead,
        remap: Option<&RemapTable>,
    ) -> Result<(CodedLexicon, Vec<LexiconWarning>), LexiconError> {
        let mut lex = CodedLexicon::default();
        let mut warnings = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches(['\r', '\n']);
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let (word, code) = text
                .split_once('\t')
                .ok_or(LexiconError::MissingSeparator { line: line_no })?;
            let word = word.trim();
            if word.is_empty() {
                return Err(LexiconError::EmptyWord { line: line_no });
            }
            let code: CategoryCode = code
                .trim()
                .parse()
                .map_err(|source| LexiconError::Code { line: line_no, source })?;
            let code = match remap {
                Some(table) => {
                    let (mapped, matched) = table.remap_or_keep(&code);
                    if !matched {
                        warnings.push(LexiconWarning::UnmatchedRemap {
                            line: line_no,
                            word: word.to_string(),
                            code,
                        });
                    }
                    mapped
                }
                None => code,
            };
            lex.insert(word.to_string(), code);
        }
        Ok((lex, warnings))
    }

    /// Build from (word, code) pairs, keeping listing order per word.
    pub fn from_senses<W, I>(pairs: I) -> CodedLexicon
    where
        W: Into<String>,
        I: IntoIterator<Item = (W, CategoryCode)>,
    {
        let mut lex = CodedLexicon::default();
        for (word, code) in pairs {
            lex.insert(word.into(), code);
        }
        lex
    }

    fn insert(&mut self, word: String, code: CategoryCode) {
        let senses = self.senses.entry(word).or_default();
        if !senses.contains(&code) {
            senses.push(code);
        }
    }

    /// All senses in listing order, or `None` for an unknown word.
    pub fn lookup(&self, word: &str) -> Option<&[CategoryCode]> {
        self.senses.get(word).map(Vec::as_slice)
    }

    /// The word's single sort key under the given policy.
    pub fn sort_key(&self, word: &str, policy: SensePolicy) -> Option<CategoryCode> {
        let senses = self.lookup(word)?;
        match policy {
            SensePolicy::FirstSense => senses.first().copied(),
            SensePolicy::MinimumCode => senses.iter().min().copied(),
        }
    }

    pub fn len(&self) -> usize {
        self.senses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.senses.is_empty()
    }

    /// Words in arbitrary order (senses themselves stay ordered).
    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.senses.keys().map(String::as_str)
    }
}

/// How to compare two free-text terms (definition strings, feature values).
#[derive(Debug, Clone, Copy, Default)]
pub enum TextOrder<'a> {
    /// Plain string comparison by scalar value.
    #[default]
    Lexicographic,
    /// Compare the terms' lexicon sort keys; unknown terms sort after all
    /// known ones; ties fall back to string comparison.
    ViaLexicon { lexicon: &'a CodedLexicon, policy: SensePolicy },
}

impl TextOrder<'_> {
    pub fn cmp(&self, a: &str, b: &str) -> std::cmp::Ordering {
        match self {
            TextOrder::Lexicographic => a.cmp(b),
            TextOrder::ViaLexicon { lexicon, policy } => {
                let ka = lexicon.sort_key(a, *policy);
                let kb = lexicon.sort_key(b, *policy);
                match (ka, kb) {
                    (Some(ca), Some(cb)) => ca.cmp(&cb).then_with(|| a.cmp(b)),
                    (Some(_), None) => std::cmp::Ordering::Less,
                    (None, Some(_)) => std::cmp::Ordering::Greater,
                    (None, None) => a.cmp(b),
                }
            }
        }
    }
}
