//! Output renderers. Three formats everywhere: `text` (the human layout,
//! golden-file stable), `tsv` (fixed-arity machine rows), and `json`
//! (mirrors the library types via serde).

use serde::{Deserialize, Serialize};

use crate::engine::{Entry, GroupedList, LineGroupedList, PairCorpus, RowKind, SortedRow};
use crate::features::{DerivedNode, DerivedThesaurus, Similarity};

/// Output format selector shared by every pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Tsv,
    Json,
}

/// Label of the pseudo-group holding words absent from the lexicon.
pub const UNKNOWN_LABEL: &str = "Unknown";

fn display_label(label: &str) -> String {
    if label.is_empty() {
        String::new()
    } else {
        format!("({label})")
    }
}

fn words_csv(entries: &[Entry]) -> String {
    entries.iter().map(|e| e.word.as_str()).collect::<Vec<_>>().join(", ")
}

fn payload_or_empty(e: &Entry) -> &str {
    e.payload.as_deref().unwrap_or("")
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Render a grouped list. Text: one `(Label) w1, w2` line per group (label
/// omitted for the leading unlabeled group, empty groups print the label
/// alone); unknowns close the output as `(Unknown)`. TSV: one
/// `label TAB word TAB payload` row per word, labels parenthesized the same
/// way.
pub fn grouped(list: &GroupedList, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for group in &list.groups {
                let label = display_label(&group.label);
                let words = words_csv(&group.words);
                match (label.is_empty(), words.is_empty()) {
                    (true, _) => out.push_str(&words),
                    (false, true) => out.push_str(&label),
                    (false, false) => {
                        out.push_str(&label);
                        out.push(' ');
                        out.push_str(&words);
                    }
                }
                out.push('\n');
            }
            if !list.unknowns.is_empty() {
                out.push_str(&display_label(UNKNOWN_LABEL));
                out.push(' ');
                out.push_str(&words_csv(&list.unknowns));
                out.push('\n');
            }
            out
        }
        Format::Tsv => {
            let mut out = String::new();
            for group in &list.groups {
                let label = display_label(&group.label);
                for entry in &group.words {
                    out.push_str(&format!("{label}\t{}\t{}\n", entry.word, payload_or_empty(entry)));
                }
            }
            for entry in &list.unknowns {
                out.push_str(&format!(
                    "{}\t{}\t{}\n",
                    display_label(UNKNOWN_LABEL),
                    entry.word,
                    payload_or_empty(entry)
                ));
            }
            out
        }
        Format::Json => json_line(list),
    }
}

/// Render a keyword grouping. Text: the group's first line follows the
/// label, further lines are indented two spaces; unknowns form one
/// `(Unknown)` line. TSV adds a 1-based line column.
pub fn line_grouped(list: &LineGroupedList, format: Format) -> String {
    match format {
        Format::Text => {
            let mut out = String::new();
            for group in &list.groups {
                let label = display_label(&group.label);
                for (i, line) in group.lines.iter().enumerate() {
                    if i == 0 {
                        if label.is_empty() {
                            out.push_str(&words_csv(line));
                        } else {
                            out.push_str(&format!("{label} {}", words_csv(line)));
                        }
                    } else {
                        out.push_str(&format!("  {}", words_csv(line)));
                    }
                    out.push('\n');
                }
            }
            if !list.unknowns.is_empty() {
                out.push_str(&format!(
                    "{} {}\n",
                    display_label(UNKNOWN_LABEL),
                    words_csv(&list.unknowns)
                ));
            }
            out
        }
        Format::Tsv => {
            let mut out = String::new();
            for group in &list.groups {
                let label = display_label(&group.label);
                for (i, line) in group.lines.iter().enumerate() {
                    for entry in line {
                        out.push_str(&format!(
                            "{label}\t{}\t{}\t{}\n",
                            i + 1,
                            entry.word,
                            payload_or_empty(entry)
                        ));
                    }
                }
            }
            for entry in &list.unknowns {
                out.push_str(&format!(
                    "{}\t1\t{}\t{}\n",
                    display_label(UNKNOWN_LABEL),
                    entry.word,
                    payload_or_empty(entry)
                ));
            }
            out
        }
        Format::Json => json_line(list),
    }
}

/// Render the intermediate sorted sequence. Text: `code text`, with marker
/// labels parenthesized. TSV: `code TAB kind TAB text TAB payload`.
pub fn sorted_rows(rows: &[SortedRow], format: Format) -> String {
    match format {
        Format::Text => rows
            .iter()
            .map(|row| match row.kind {
                RowKind::Marker => format!("{} ({})\n", row.code, row.text),
                RowKind::Word => format!("{} {}\n", row.code, row.text),
            })
            .collect(),
        Format::Tsv => rows
            .iter()
            .map(|row| {
                let kind = match row.kind {
                    RowKind::Marker => "marker",
                    RowKind::Word => "word",
                };
                format!(
                    "{}\t{kind}\t{}\t{}\n",
                    row.code,
                    row.text,
                    row.payload.as_deref().unwrap_or("")
                )
            })
            .collect(),
        Format::Json => json_line(&rows),
    }
}

/// Render a pair corpus; text and TSV are the same header-plus-rows table.
pub fn pair_corpus(corpus: &PairCorpus, format: Format) -> String {
    match format {
        Format::Text | Format::Tsv => {
            let mut out = corpus.header.join("\t");
            out.push('\n');
            for row in &corpus.rows {
                out.push_str(&row.join("\t"));
                out.push('\n');
            }
            out
        }
        Format::Json => json_line(corpus),
    }
}

/// Render a plain word order, one word per line.
pub fn word_list(words: &[String], format: Format) -> String {
    match format {
        Format::Text | Format::Tsv => {
            words.iter().map(|w| format!("{w}\n")).collect()
        }
        Format::Json => json_line(&words),
    }
}

/// Render a derived thesaurus. Text: `*` for the root, two spaces of indent
/// per depth, `feature=value` per branch, attached words in brackets.
/// TSV: `depth TAB feature TAB value TAB words`.
pub fn derived(th: &DerivedThesaurus, format: Format) -> String {
    fn text_node(node: &DerivedNode, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("{}={}", node.feature, node.value));
        if !node.words.is_empty() {
            out.push_str(&format!(" [{}]", node.words.join(", ")));
        }
        out.push('\n');
        for child in &node.children {
            text_node(child, depth + 1, out);
        }
    }
    fn tsv_node(node: &DerivedNode, depth: usize, out: &mut String) {
        out.push_str(&format!(
            "{depth}\t{}\t{}\t{}\n",
            node.feature,
            node.value,
            node.words.join(", ")
        ));
        for child in &node.children {
            tsv_node(child, depth + 1, out);
        }
    }
    match format {
        Format::Text => {
            let mut out = String::from("*");
            if !th.words.is_empty() {
                out.push_str(&format!(" [{}]", th.words.join(", ")));
            }
            out.push('\n');
            for child in &th.children {
                text_node(child, 1, &mut out);
            }
            out
        }
        Format::Tsv => {
            let mut out = format!("0\t*\t\t{}\n", th.words.join(", "));
            for child in &th.children {
                tsv_node(child, 1, &mut out);
            }
            out
        }
        Format::Json => json_line(th),
    }
}

/// One inferred superordinate/subordinate pair, named for JSON output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HierarchyPair {
    pub superordinate: String,
    pub subordinate: String,
}

/// Render inferred hierarchy pairs. Text: `super > sub` per line.
pub fn hierarchy(pairs: &[(String, String)], format: Format) -> String {
    match format {
        Format::Text => pairs.iter().map(|(a, b)| format!("{a} > {b}\n")).collect(),
        Format::Tsv => pairs.iter().map(|(a, b)| format!("{a}\t{b}\n")).collect(),
        Format::Json => {
            let named: Vec<HierarchyPair> = pairs
                .iter()
                .map(|(a, b)| HierarchyPair {
                    superordinate: a.clone(),
                    subordinate: b.clone(),
                })
                .collect();
            json_line(&named)
        }
    }
}

/// Render a similarity ratio. Text: `m/t`; TSV: `m TAB t`; JSON adds the
/// quotient for convenience.
pub fn similarity(s: &Similarity, format: Format) -> String {
    match format {
        Format::Text => format!("{s}\n"),
        Format::Tsv => format!("{}\t{}\n", s.matching, s.total),
        Format::Json => json_line(&serde_json::json!({
            "matching": s.matching,
            "total": s.total,
            "value": s.as_f64(),
        })),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Group;

    fn sample() -> GroupedList {
        GroupedList {
            groups: vec![
                Group {
                    label: "Human".into(),
                    words: vec![Entry::new("the Imperial Household"), Entry::new("a Royal family")],
                },
                Group { label: "Quantity".into(), words: vec![Entry::with_payload("the whole country", "7")] },
            ],
            unknowns: vec![Entry::new("xyzzy")],
        }
    }

    #[test]
    fn grouped_text_layout() {
        assert_eq!(
            grouped(&sample(), Format::Text),
            "(Human) the Imperial Household, a Royal family\n\
             (Quantity) the whole country\n\
             (Unknown) xyzzy\n"
        );
    }

    #[test]
    fn grouped_text_edge_cases() {
        let list = GroupedList {
            groups: vec![
                Group { label: String::new(), words: vec![Entry::new("early")] },
                Group { label: "Empty".into(), words: vec![] },
            ],
            unknowns: vec![],
        };
        assert_eq!(grouped(&list, Format::Text), "early\n(Empty)\n");
    }

    #[test]
    fn grouped_tsv_has_fixed_arity() {
        assert_eq!(
            grouped(&sample(), Format::Tsv),
            "(Human)\tthe Imperial Household\t\n\
             (Human)\ta Royal family\t\n\
             (Quantity)\tthe whole country\t7\n\
             (Unknown)\txyzzy\t\n"
        );
    }

    #[test]
    fn grouped_json_round_trips() {
        let list = sample();
        let json = grouped(&list, Format::Json);
        let back: GroupedList = serde_json::from_str(&json).unwrap();
        assert_eq!(back, list);
        assert_eq!(grouped(&back, Format::Text), grouped(&list, Format::Text));
    }

    #[test]
    fn line_grouped_text_indents_continuations() {
        let list = LineGroupedList {
            groups: vec![crate::engine::LineGroup {
                label: "Human activity".into(),
                lines: vec![
                    vec![Entry::new("retrieval")],
                    vec![Entry::new("a document"), Entry::new("a keyword")],
                ],
            }],
            unknowns: vec![],
        };
        assert_eq!(
            line_grouped(&list, Format::Text),
            "(Human activity) retrieval\n  a document, a keyword\n"
        );
    }

    #[test]
    fn similarity_formats() {
        let s = Similarity { matching: 4, total: 5 };
        assert_eq!(similarity(&s, Format::Text), "4/5\n");
        assert_eq!(similarity(&s, Format::Tsv), "4\t5\n");
        let json = similarity(&s, Format::Json);
        let back: Similarity = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn sorted_rows_text_parenthesizes_markers() {
        let rows = vec![
            SortedRow {
                code: "5100000000".parse().unwrap(),
                kind: RowKind::Marker,
                text: "Animal".into(),
                payload: None,
            },
            SortedRow {
                code: "5110001013".parse().unwrap(),
                kind: RowKind::Word,
                text: "an animal".into(),
                payload: None,
            },
        ];
        assert_eq!(
            sorted_rows(&rows, Format::Text),
            "5100000000 (Animal)\n5110001013 an animal\n"
        );
    }
}
