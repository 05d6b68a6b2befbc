//! Semantic sorting over uncoded is-a thesauri: the root-to-node chain of
//! definition strings plays the role of a category code.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::io::BufRead;

use thiserror::Error;

use crate::engine::{Entry, Group, GroupedList};
use crate::lexicon::TextOrder;

#[derive(Debug, Error)]
pub enum PathError {
    #[error("line {line}: unknown record type {tag:?} (expected NODE or WORD)")]
    UnknownRecordType { line: usize, tag: String },
    #[error("line {line}: {tag} record needs {expected} tab-separated fields, got {got}")]
    FieldCount { line: usize, tag: &'static str, expected: usize, got: usize },
    #[error("line {line}: empty field")]
    EmptyField { line: usize },
    #[error("line {line}: node {id:?} redefined with a different definition")]
    ConflictingDefinition { line: usize, id: String },
    #[error("line {line}: node {id:?} references unknown parent {parent:?}")]
    UnknownParent { line: usize, id: String, parent: String },
    #[error("line {line}: word {word:?} references unknown node {node:?}")]
    UnknownWordNode { line: usize, word: String, node: String },
    #[error("parent links form a cycle through node {id:?}")]
    Cycle { id: String },
    #[error("marker depth must be at least 1")]
    BadDepth,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone)]
struct NodeData {
    definition: String,
    parents: Vec<String>,
}

/// An is-a thesaurus with definition strings at every node. Nodes may have
/// several parents; every root-to-node route is a distinct sort key.
#[derive(Debug, Clone, Default)]
pub struct PathThesaurus {
    nodes: HashMap<String, NodeData>,
    word_senses: HashMap<String, Vec<String>>,
}

/// A root-first chain of definition strings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefinitionPath {
    terms: Vec<String>,
}

impl DefinitionPath {
    pub fn terms(&self) -> &[String] {
        &self.terms
    }

    /// The first `depth` terms joined with " : " (clamped to path length).
    pub fn label(&self, depth: usize) -> String {
        self.terms[..depth.min(self.terms.len())].join(" : ")
    }
}

impl PathThesaurus {
    /// Parse `NODE<TAB>id<TAB>parent-or-"-"<TAB>definition` and
    /// `WORD<TAB>word<TAB>node-id` records. Repeating a NODE id adds another
    /// parent; the definition must repeat verbatim. Definitions cannot
    /// contain a tab (the field count enforces this). Parent links are
    /// checked for dangling ids and cycles.
    pub fn from_reader(reader: impl BufRead) -> Result<PathThesaurus, PathError> {
        let mut nodes: HashMap<String, NodeData> = HashMap::new();
        let mut word_senses: HashMap<String, Vec<String>> = HashMap::new();
        let mut parent_refs: Vec<(usize, String, String)> = Vec::new();
        let mut word_refs: Vec<(usize, String, String)> = Vec::new();

        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches(['\r', '\n']);
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split('\t').collect();
            match fields[0] {
                "NODE" => {
                    if fields.len() != 4 {
                        return Err(PathError::FieldCount {
                            line: line_no,
                            tag: "NODE",
                            expected: 4,
                            got: fields.len(),
                        });
                    }
                    let (id, parent, definition) = (fields[1], fields[2], fields[3]);
                    if id.is_empty() || parent.is_empty() || definition.is_empty() {
                        return Err(PathError::EmptyField { line: line_no });
                    }
                    let node = nodes.entry(id.to_string()).or_insert_with(|| NodeData {
                        definition: definition.to_string(),
                        parents: Vec::new(),
                    });
                    if node.definition != definition {
                        return Err(PathError::ConflictingDefinition {
                            line: line_no,
                            id: id.to_string(),
                        });
                    }
                    if parent != "-" && !node.parents.iter().any(|p| p == parent) {
                        node.parents.push(parent.to_string());
                        parent_refs.push((line_no, id.to_string(), parent.to_string()));
                    }
                }
                "WORD" => {
                    if fields.len() != 3 {
                        return Err(PathError::FieldCount {
                            line: line_no,
                            tag: "WORD",
                            expected: 3,
                            got: fields.len(),
                        });
                    }
                    let (word, node) = (fields[1], fields[2]);
                    if word.is_empty() || node.is_empty() {
                        return Err(PathError::EmptyField { line: line_no });
                    }
                    let senses = word_senses.entry(word.to_string()).or_default();
                    if !senses.iter().any(|s| s == node) {
                        senses.push(node.to_string());
                    }
                    word_refs.push((line_no, word.to_string(), node.to_string()));
                }
                tag => {
                    return Err(PathError::UnknownRecordType {
                        line: line_no,
                        tag: tag.to_string(),
                    })
                }
            }
        }

        for (line, id, parent) in parent_refs {
            if !nodes.contains_key(&parent) {
                return Err(PathError::UnknownParent { line, id, parent });
            }
        }
        for (line, word, node) in word_refs {
            if !nodes.contains_key(&node) {
                return Err(PathError::UnknownWordNode { line, word, node });
            }
        }

        let th = PathThesaurus { nodes, word_senses };
        th.check_acyclic()?;
        Ok(th)
    }

    fn check_acyclic(&self) -> Result<(), PathError> {
        // 0 = unvisited, 1 = on stack, 2 = done.
        let mut state: HashMap<&str, u8> = HashMap::new();
        fn visit<'a>(
            id: &'a str,
            nodes: &'a HashMap<String, NodeData>,
            state: &mut HashMap<&'a str, u8>,
        ) -> Result<(), PathError> {
            match state.get(id) {
                Some(1) => return Err(PathError::Cycle { id: id.to_string() }),
                Some(2) => return Ok(()),
                _ => {}
            }
            state.insert(id, 1);
            for parent in &nodes[id].parents {
                visit(parent, nodes, state)?;
            }
            state.insert(id, 2);
            Ok(())
        }
        let mut ids: Vec<&str> = self.nodes.keys().map(String::as_str).collect();
        ids.sort_unstable();
        for id in ids {
            visit(id, &self.nodes, &mut state)?;
        }
        Ok(())
    }

    pub fn contains_node(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node_definition(&self, id: &str) -> Option<&str> {
        self.nodes.get(id).map(|n| n.definition.as_str())
    }

    pub fn node_parents(&self, id: &str) -> Option<&[String]> {
        self.nodes.get(id).map(|n| n.parents.as_slice())
    }

    /// Node ids in deterministic (sorted) order.
    pub fn node_ids(&self) -> Vec<&str> {
        let mut ids: Vec<&str> = self.nodes.keys().map(String::as_str).collect();
        ids.sort_unstable();
        ids
    }

    /// All root-to-sense paths for the word, or `None` if it is absent.
    /// Senses expand in listing order; a multi-parent node contributes one
    /// path per route, in parent listing order.
    pub fn path_keys(&self, word: &str) -> Option<Vec<DefinitionPath>> {
        let senses = self.word_senses.get(word)?;
        let mut paths = Vec::new();
        for node in senses {
            self.routes_to(node, &mut Vec::new(), &mut paths);
        }
        Some(paths)
    }

    fn routes_to(&self, id: &str, below: &mut Vec<String>, out: &mut Vec<DefinitionPath>) {
        let node = &self.nodes[id];
        below.push(node.definition.clone());
        if node.parents.is_empty() {
            let mut terms = below.clone();
            terms.reverse();
            out.push(DefinitionPath { terms });
        } else {
            for parent in &node.parents {
                self.routes_to(parent, below, out);
            }
        }
        below.pop();
    }
}

fn cmp_terms(a: &[String], b: &[String], order: &TextOrder<'_>) -> Ordering {
    for (ta, tb) in a.iter().zip(b) {
        match order.cmp(ta, tb) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

/// Meaning-sort words by their definition paths. Group labels are the first
/// `marker_depth` terms of each path; within-group dedup keeps the first
/// occurrence; unknown words are carried through in input order.
pub fn msort_by_path(
    words: &[Entry],
    th: &PathThesaurus,
    marker_depth: usize,
    order: &TextOrder<'_>,
) -> Result<GroupedList, PathError> {
    if marker_depth == 0 {
        return Err(PathError::BadDepth);
    }
    let mut rows: Vec<(DefinitionPath, &Entry)> = Vec::new();
    let mut unknowns = Vec::new();
    for entry in words {
        match th.path_keys(&entry.word) {
            Some(paths) => rows.extend(paths.into_iter().map(|p| (p, entry))),
            None => unknowns.push(entry.clone()),
        }
    }
    rows.sort_by(|(pa, _), (pb, _)| cmp_terms(&pa.terms, &pb.terms, order));

    let mut groups: Vec<Group> = Vec::new();
    let mut last_key: Option<String> = None;
    for (path, entry) in rows {
        let key = path.label(marker_depth);
        if last_key.as_ref() != Some(&key) {
            groups.push(Group { label: key.clone(), words: Vec::new() });
            last_key = Some(key);
        }
        let group = groups.last_mut().unwrap();
        if !group.words.iter().any(|e| e.word == entry.word) {
            group.words.push(entry.clone());
        }
    }
    Ok(GroupedList { groups, unknowns })
}
