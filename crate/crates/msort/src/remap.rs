//! Code remapping: rewrite category-code prefixes so that rows from
//! different top-level divisions interleave into one meaning order.
//!
//! A rule rewrites the first one to three symbols of a code and leaves the
//! rest untouched. Slots are literals or symbol classes; a replacement class
//! maps positionally onto the pattern class at the same slot.

use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::codes::{CategoryCode, Symbol};

/// Longest prefix a rule may rewrite.
pub const MAX_SLOTS: usize = 3;

/// One slot of a pattern or replacement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot {
    Literal(Symbol),
    /// Symbols in listed order; order carries the positional mapping.
    Class(Vec<Symbol>),
}

impl Slot {
    fn matches(&self, s: Symbol) -> bool {
        match self {
            Slot::Literal(l) => *l == s,
            Slot::Class(cs) => cs.contains(&s),
        }
    }
}

/// Why a single rule was rejected.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RuleError {
    #[error("empty pattern")]
    EmptyPattern,
    #[error("pattern has {0} slots, at most {MAX_SLOTS} allowed")]
    TooManySlots(usize),
    #[error("pattern has {pattern} slots but replacement has {replacement}")]
    SlotCountMismatch { pattern: usize, replacement: usize },
    #[error("replacement class at slot {slot} requires a pattern class at the same slot")]
    ClassWithoutSource { slot: usize },
    #[error(
        "class size mismatch at slot {slot}: pattern has {pattern} symbols, replacement {replacement}"
    )]
    ClassSizeMismatch { slot: usize, pattern: usize, replacement: usize },
    #[error("unclosed '[' in slot pattern")]
    UnclosedClass,
    #[error("empty class")]
    EmptyClass,
    #[error("duplicate symbol '{0}' in class")]
    DuplicateInClass(char),
    #[error("range '{0}-{1}' is not ascending")]
    BadRange(char, char),
    #[error("invalid symbol '{0}' (alphabet is 0-9, a-d)")]
    BadSymbol(char),
}

/// A prefix-rewriting rule, validated on construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RemapRule {
    pattern: Vec<Slot>,
    replacement: Vec<Slot>,
}

impl RemapRule {
    pub fn new(pattern: Vec<Slot>, replacement: Vec<Slot>) -> Result<RemapRule, RuleError> {
        if pattern.is_empty() {
            return Err(RuleError::EmptyPattern);
        }
        if pattern.len() > MAX_SLOTS {
            return Err(RuleError::TooManySlots(pattern.len()));
        }
        if pattern.len() != replacement.len() {
            return Err(RuleError::SlotCountMismatch {
                pattern: pattern.len(),
                replacement: replacement.len(),
            });
        }
        for (i, (p, r)) in pattern.iter().zip(&replacement).enumerate() {
            if let Slot::Class(rs) = r {
                match p {
                    Slot::Literal(_) => return Err(RuleError::ClassWithoutSource { slot: i }),
                    Slot::Class(ps) => {
                        if ps.len() != rs.len() {
                            return Err(RuleError::ClassSizeMismatch {
                                slot: i,
                                pattern: ps.len(),
                                replacement: rs.len(),
                            });
                        }
                    }
                }
            }
        }
        Ok(RemapRule { pattern, replacement })
    }

    pub fn pattern(&self) -> &[Slot] {
        &self.pattern
    }

    pub fn replacement(&self) -> &[Slot] {
        &self.replacement
    }

    pub fn matches(&self, code: &CategoryCode) -> bool {
        self.pattern
            .iter()
            .zip(code.symbols())
            .all(|(slot, &s)| slot.matches(s))
    }

    /// Rewrite the matched prefix; symbols past the pattern are preserved.
    /// Caller must check [`matches`](Self::matches) first.
    fn apply(&self, code: &CategoryCode) -> CategoryCode {
        let mut out = *code;
        for (i, (p, r)) in self.pattern.iter().zip(&self.replacement).enumerate() {
            let s = code.symbols()[i];
            match r {
                Slot::Literal(l) => out.set(i, *l),
                Slot::Class(rs) => {
                    let Slot::Class(ps) = p else { unreachable!("validated at construction") };
                    let j = ps.iter().position(|&c| c == s).expect("matched class");
                    out.set(i, rs[j]);
                }
            }
        }
        out
    }
}

/// Parse one slot pattern like `12[0-4]` into slots.
fn parse_slots(pattern: &str) -> Result<Vec<Slot>, RuleError> {
    let mut slots = Vec::new();
    let mut chars = pattern.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '[' {
            let mut class = Vec::new();
            loop {
                let c = chars.next().ok_or(RuleError::UnclosedClass)?;
                if c == ']' {
                    break;
                }
                let lo = Symbol::from_char(c).ok_or(RuleError::BadSymbol(c))?;
                if chars.peek() == Some(&'-') {
                    chars.next();
                    let hc = chars.next().ok_or(RuleError::UnclosedClass)?;
                    let hi = Symbol::from_char(hc).ok_or(RuleError::BadSymbol(hc))?;
                    if hi.rank() < lo.rank() {
                        return Err(RuleError::BadRange(c, hc));
                    }
                    for rank in lo.rank()..=hi.rank() {
                        push_class_symbol(&mut class, Symbol::from_rank(rank).unwrap())?;
                    }
                } else {
                    push_class_symbol(&mut class, lo)?;
                }
            }
            if class.is_empty() {
                return Err(RuleError::EmptyClass);
            }
            slots.push(Slot::Class(class));
        } else {
            let s = Symbol::from_char(c).ok_or(RuleError::BadSymbol(c))?;
            slots.push(Slot::Literal(s));
        }
    }
    Ok(slots)
}

fn push_class_symbol(class: &mut Vec<Symbol>, s: Symbol) -> Result<(), RuleError> {
    if class.contains(&s) {
        return Err(RuleError::DuplicateInClass(s.as_char()));
    }
    class.push(s);
    Ok(())
}

impl FromStr for RemapRule {
    type Err = RuleError;

    /// Parse `<pattern> -> <replacement>` where the arrow may also be a tab.
    fn from_str(s: &str) -> Result<RemapRule, RuleError> {
        let (pat, rep) = s
            .split_once('\t')
            .or_else(|| s.split_once("->"))
            .ok_or(RuleError::EmptyPattern)?;
        RemapRule::new(parse_slots(pat.trim())?, parse_slots(rep.trim())?)
    }
}

/// Why a rule file was rejected.
#[derive(Debug, Error)]
pub enum RemapError {
    #[error("line {line}: expected <pattern>TAB<replacement>")]
    MissingSeparator { line: usize },
    #[error("line {line}: {source}")]
    Rule { line: usize, source: RuleError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An ordered rule list; the first matching rule wins.
#[derive(Debug, Clone, Default)]
pub struct RemapTable {
    rules: Vec<RemapRule>,
}

impl RemapTable {
    pub fn new(rules: Vec<RemapRule>) -> RemapTable {
        RemapTable { rules }
    }

    /// Parse a rule file: one `<pattern>TAB<replacement>` per line,
    /// blank lines and `#` comment lines skipped.
    pub fn from_reader(reader: impl BufRead) -> Result<RemapTable, RemapError> {
        let mut rules = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (pat, rep) = line
                .split_once('\t')
                .ok_or(RemapError::MissingSeparator { line: line_no })?;
            let rule = RemapRule::new(
                parse_slots(pat.trim()).map_err(|source| RemapError::Rule { line: line_no, source })?,
                parse_slots(rep.trim()).map_err(|source| RemapError::Rule { line: line_no, source })?,
            )
            .map_err(|source| RemapError::Rule { line: line_no, source })?;
            rules.push(rule);
        }
        Ok(RemapTable { rules })
    }

    /// The ruleset shipped with the crate, aligned with the builtin markers.
    pub fn builtin() -> RemapTable {
        static DATA: &str = include_str!("../data/remap_default.tsv");
        RemapTable::from_reader(DATA.as_bytes()).expect("builtin ruleset parses")
    }

    pub fn rules(&self) -> &[RemapRule] {
        &self.rules
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    /// Apply the first matching rule, or `None` if no rule matches.
    pub fn remap(&self, code: &CategoryCode) -> Option<CategoryCode> {
        self.rules
            .iter()
            .find(|r| r.matches(code))
            .map(|r| r.apply(code))
    }

    /// Remap, keeping unmatched codes unchanged; the flag reports a match.
    pub fn remap_or_keep(&self, code: &CategoryCode) -> (CategoryCode, bool) {
        match self.remap(code) {
            Some(c) => (c, true),
            None => (*code, false),
        }
    }
}
