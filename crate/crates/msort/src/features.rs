//! Semantic sorting over multi-feature dictionaries: per-feature values act as
//! the levels of an imaginary is-a thesaurus. Also derives explicit
//! thesaurus trees, infers super/subordinate pairs from feature inclusion,
//! and measures word similarity as the share of agreeing features.

use std::cmp::{Ordering, Reverse};
use std::collections::HashMap;
use std::fmt;
use std::io::BufRead;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lexicon::TextOrder;

#[derive(Debug, Error)]
pub enum FeatureError {
    #[error("missing header row")]
    MissingHeader,
    #[error("header declares no feature columns")]
    NoFeatures,
    #[error("duplicate feature {0:?} in header")]
    DuplicateFeature(String),
    #[error("empty feature name in header")]
    EmptyFeatureName,
    #[error("line {line}: expected {expected} columns, got {got}")]
    ColumnCount { line: usize, expected: usize, got: usize },
    #[error("line {line}: empty word")]
    EmptyWord { line: usize },
    #[error("line {line}: duplicate word {word:?}")]
    DuplicateWord { line: usize, word: String },
    #[error("no feature named {0:?}")]
    UnknownFeature(String),
    #[error("feature {0:?} repeated in priority")]
    RepeatedPriority(String),
    #[error("priority omits feature {0:?}")]
    IncompletePriority(String),
    #[error("no word {0:?} in the dictionary")]
    UnknownWord(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Words with one optional value per feature. Cell "-" or empty means the
/// value is unspecified.
#[derive(Debug, Clone)]
pub struct FeatureDictionary {
    features: Vec<String>,
    words: Vec<String>,
    values: Vec<Vec<Option<String>>>,
    index: HashMap<String, usize>,
}

impl FeatureDictionary {
    /// Parse a TSV stream: header `word TAB f1 TAB f2 …`, then one row per
    /// word. At least one feature column is required.
    pub fn from_reader(reader: impl BufRead) -> Result<FeatureDictionary, FeatureError> {
        let mut features: Option<Vec<String>> = None;
        let mut words = Vec::new();
        let mut values = Vec::new();
        let mut index = HashMap::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            let line_no = i + 1;
            let text = line.trim_end_matches(['\r', '\n']);
            if text.trim().is_empty() || text.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = text.split('\t').collect();
            match &features {
                None => {
                    if fields.len() < 2 {
                        return Err(FeatureError::NoFeatures);
                    }
                    let names: Vec<String> = fields[1..].iter().map(|f| f.to_string()).collect();
                    for (j, name) in names.iter().enumerate() {
                        if name.is_empty() {
                            return Err(FeatureError::EmptyFeatureName);
                        }
                        if names[..j].contains(name) {
                            return Err(FeatureError::DuplicateFeature(name.clone()));
                        }
                    }
                    features = Some(names);
                }
                Some(names) => {
                    if fields.len() != names.len() + 1 {
                        return Err(FeatureError::ColumnCount {
                            line: line_no,
                            expected: names.len() + 1,
                            got: fields.len(),
                        });
                    }
                    let word = fields[0];
                    if word.is_empty() {
                        return Err(FeatureError::EmptyWord { line: line_no });
                    }
                    if index.contains_key(word) {
                        return Err(FeatureError::DuplicateWord {
                            line: line_no,
                            word: word.to_string(),
                        });
                    }
                    let record: Vec<Option<String>> = fields[1..]
                        .iter()
                        .map(|cell| match *cell {
                            "" | "-" => None,
                            value => Some(value.to_string()),
                        })
                        .collect();
                    index.insert(word.to_string(), words.len());
                    words.push(word.to_string());
                    values.push(record);
                }
            }
        }
        let features = features.ok_or(FeatureError::MissingHeader)?;
        Ok(FeatureDictionary { features, words, values, index })
    }

    pub fn features(&self) -> &[String] {
        &self.features
    }

    /// Words in listing order.
    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn record(&self, word: &str) -> Option<&[Option<String>]> {
        self.index.get(word).map(|&i| self.values[i].as_slice())
    }

    fn record_at(&self, i: usize) -> &[Option<String>] {
        &self.values[i]
    }
}

/// A validated permutation of the dictionary's features, most important
/// first. Holds feature indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeaturePriority {
    order: Vec<usize>,
}

impl FeaturePriority {
    pub fn new<S: AsRef<str>>(
        dict: &FeatureDictionary,
        names: &[S],
    ) -> Result<FeaturePriority, FeatureError> {
        let mut order = Vec::with_capacity(names.len());
        for name in names {
            let name = name.as_ref();
            let idx = dict
                .features
                .iter()
                .position(|f| f == name)
                .ok_or_else(|| FeatureError::UnknownFeature(name.to_string()))?;
            if order.contains(&idx) {
                return Err(FeatureError::RepeatedPriority(name.to_string()));
            }
            order.push(idx);
        }
        for (idx, feature) in dict.features.iter().enumerate() {
            if !order.contains(&idx) {
                return Err(FeatureError::IncompletePriority(feature.clone()));
            }
        }
        Ok(FeaturePriority { order })
    }

    /// Header order, leftmost feature most important.
    pub fn left_to_right(dict: &FeatureDictionary) -> FeaturePriority {
        FeaturePriority { order: (0..dict.features.len()).collect() }
    }

    /// Reversed header order, rightmost feature most important.
    pub fn right_to_left(dict: &FeatureDictionary) -> FeaturePriority {
        FeaturePriority { order: (0..dict.features.len()).rev().collect() }
    }

    pub fn feature_indices(&self) -> &[usize] {
        &self.order
    }
}

fn cmp_records(
    a: &[Option<String>],
    b: &[Option<String>],
    priority: &FeaturePriority,
    value_order: &TextOrder<'_>,
) -> Ordering {
    for &f in &priority.order {
        let ord = match (&a[f], &b[f]) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Less,
            (Some(_), None) => Ordering::Greater,
            (Some(x), Some(y)) => value_order.cmp(x, y),
        };
        if ord != Ordering::Equal {
            return ord;
        }
    }
    Ordering::Equal
}

/// Stable sort of the dictionary's words by their value tuples in priority
/// order; an unspecified value sorts before any specified one.
pub fn msort_by_features(
    dict: &FeatureDictionary,
    priority: &FeaturePriority,
    value_order: &TextOrder<'_>,
) -> Vec<String> {
    let mut idx: Vec<usize> = (0..dict.words.len()).collect();
    idx.sort_by(|&a, &b| {
        cmp_records(dict.record_at(a), dict.record_at(b), priority, value_order)
    });
    idx.into_iter().map(|i| dict.words[i].clone()).collect()
}

/// One node of a derived thesaurus: a (feature, value) branch with its
/// attached words and sub-branches.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivedNode {
    pub feature: String,
    pub value: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivedNode>,
}

/// A thesaurus tree derived from a feature dictionary. The root carries the
/// words with no specified features.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DerivedThesaurus {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub words: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<DerivedNode>,
}

impl DerivedThesaurus {
    /// Words in depth-first order: a node's own words, then each child's.
    pub fn depth_first_words(&self) -> Vec<String> {
        fn walk(words: &[String], children: &[DerivedNode], out: &mut Vec<String>) {
            out.extend_from_slice(words);
            for child in children {
                walk(&child.words, &child.children, out);
            }
        }
        let mut out = Vec::new();
        walk(&self.words, &self.children, &mut out);
        out
    }
}

struct BuildNode {
    words: Vec<String>,
    children: Vec<(usize, String, BuildNode)>,
}

impl BuildNode {
    fn new() -> BuildNode {
        BuildNode { words: Vec::new(), children: Vec::new() }
    }
}

/// Build the thesaurus tree for the given priority: each word descends
/// through its specified values in priority order (unspecified features are
/// skipped) and attaches where its chain ends.
///
/// Sibling order mirrors the flat word sort: a branch on a lower-priority
/// feature precedes one on a higher-priority feature (its words leave the
/// higher-priority feature unspecified), and branches on the same feature
/// order by value. Reading the tree depth-first therefore reproduces
/// [`msort_by_features`] under lexicographic value order.
pub fn derive_thesaurus(dict: &FeatureDictionary, priority: &FeaturePriority) -> DerivedThesaurus {
    let mut root = BuildNode::new();
    for (i, word) in dict.words.iter().enumerate() {
        let mut node = &mut root;
        for &f in &priority.order {
            let Some(value) = &dict.values[i][f] else { continue };
            let pos = node
                .children
                .iter()
                .position(|(cf, cv, _)| *cf == f && cv == value);
            let pos = match pos {
                Some(p) => p,
                None => {
                    node.children.push((f, value.clone(), BuildNode::new()));
                    node.children.len() - 1
                }
            };
            node = &mut node.children[pos].2;
        }
        node.words.push(word.clone());
    }

    // Feature index → position in the priority order.
    let mut rank = vec![0usize; dict.features.len()];
    for (pos, &f) in priority.order.iter().enumerate() {
        rank[f] = pos;
    }
    fn finalize(node: BuildNode, rank: &[usize], features: &[String]) -> (Vec<String>, Vec<DerivedNode>) {
        let mut children = node.children;
        children.sort_by(|(fa, va, _), (fb, vb, _)| {
            Reverse(rank[*fa]).cmp(&Reverse(rank[*fb])).then_with(|| va.cmp(vb))
        });
        let children = children
            .into_iter()
            .map(|(f, value, child)| {
                let (words, grandchildren) = finalize(child, rank, features);
                DerivedNode { feature: features[f].clone(), value, words, children: grandchildren }
            })
            .collect();
        (node.words, children)
    }
    let (words, children) = finalize(root, &rank, &dict.features);
    DerivedThesaurus { words, children }
}

/// All (superordinate, subordinate) pairs: A is superordinate to B when
/// every feature A specifies, B specifies with the same value, and B
/// specifies strictly more. Pairs are listed in dictionary order.
pub fn infer_hierarchy(dict: &FeatureDictionary) -> Vec<(String, String)> {
    let specified =
        |i: usize| -> usize { dict.values[i].iter().filter(|v| v.is_some()).count() };
    let mut pairs = Vec::new();
    for a in 0..dict.words.len() {
        for b in 0..dict.words.len() {
            if a == b || specified(a) >= specified(b) {
                continue;
            }
            let includes = dict.values[a]
                .iter()
                .zip(&dict.values[b])
                .all(|(va, vb)| match va {
                    None => true,
                    Some(_) => va == vb,
                });
            if includes {
                pairs.push((dict.words[a].clone(), dict.words[b].clone()));
            }
        }
    }
    pairs
}

/// A similarity ratio kept exact: matching features over total features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Similarity {
    pub matching: usize,
    pub total: usize,
}

impl Similarity {
    pub fn as_f64(&self) -> f64 {
        self.matching as f64 / self.total as f64
    }
}

impl fmt::Display for Similarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.matching, self.total)
    }
}

/// Share of features on which the two words agree; two unspecified values
/// agree.
pub fn similarity(dict: &FeatureDictionary, w1: &str, w2: &str) -> Result<Similarity, FeatureError> {
    let r1 = dict
        .record(w1)
        .ok_or_else(|| FeatureError::UnknownWord(w1.to_string()))?;
    let r2 = dict
        .record(w2)
        .ok_or_else(|| FeatureError::UnknownWord(w2.to_string()))?;
    let matching = r1.iter().zip(r2).filter(|(a, b)| a == b).count();
    Ok(Similarity { matching, total: dict.features.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONTAINERS: &str = "\
word\tStyle\tObject\tDepth\tSize\tMaterial
utsuwa\t-\t-\t-\t-\t-
wan1\tOriental\t-\tdeep\t-\tceramic
wan2\tOriental\t-\tdeep\t-\twooden
yunomi\tOriental\tJapanese tea\tdeep\t-\tceramic
sara\t-\t-\tshallow\t-\t-
";

    fn containers() -> FeatureDictionary {
        FeatureDictionary::from_reader(CONTAINERS.as_bytes()).unwrap()
    }

    #[test]
    fn leftmost_priority_order() {
        let dict = containers();
        let order = msort_by_features(
            &dict,
            &FeaturePriority::left_to_right(&dict),
            &TextOrder::Lexicographic,
        );
        assert_eq!(order, ["utsuwa", "sara", "wan1", "wan2", "yunomi"]);
    }

    #[test]
    fn rightmost_priority_order() {
        let dict = containers();
        let order = msort_by_features(
            &dict,
            &FeaturePriority::right_to_left(&dict),
            &TextOrder::Lexicographic,
        );
        assert_eq!(order, ["utsuwa", "sara", "wan1", "yunomi", "wan2"]);
    }

    #[test]
    fn all_unspecified_keeps_input_order() {
        let text = "word\tf\nzz\t-\naa\t-\n";
        let dict = FeatureDictionary::from_reader(text.as_bytes()).unwrap();
        let order = msort_by_features(
            &dict,
            &FeaturePriority::left_to_right(&dict),
            &TextOrder::Lexicographic,
        );
        assert_eq!(order, ["zz", "aa"]);
    }

    #[test]
    fn priority_must_be_a_permutation() {
        let dict = containers();
        let err = FeaturePriority::new(&dict, &["Style"]).unwrap_err();
        assert!(matches!(err, FeatureError::IncompletePriority(_)));
        let err =
            FeaturePriority::new(&dict, &["Style", "Style", "Depth", "Size", "Material"])
                .unwrap_err();
        assert!(matches!(err, FeatureError::RepeatedPriority(_)));
        let err =
            FeaturePriority::new(&dict, &["Style", "Object", "Depth", "Size", "Color"])
                .unwrap_err();
        assert!(matches!(err, FeatureError::UnknownFeature(name) if name == "Color"));
        let ok = FeaturePriority::new(&dict, &["Material", "Size", "Depth", "Object", "Style"])
            .unwrap();
        assert_eq!(ok, FeaturePriority::right_to_left(&dict));
    }

    #[test]
    fn derived_tree_leftmost() {
        let dict = containers();
        let th = derive_thesaurus(&dict, &FeaturePriority::left_to_right(&dict));
        assert_eq!(th.words, ["utsuwa"]);
        // sara branches on a later-priority feature, so it comes first.
        assert_eq!(th.children[0].feature, "Depth");
        assert_eq!(th.children[0].value, "shallow");
        assert_eq!(th.children[0].words, ["sara"]);
        let oriental = &th.children[1];
        assert_eq!((oriental.feature.as_str(), oriental.value.as_str()), ("Style", "Oriental"));
        let deep = &oriental.children[0];
        assert_eq!((deep.feature.as_str(), deep.value.as_str()), ("Depth", "deep"));
        // wan1 and wan2 sit side by side under Style=Oriental → Depth=deep.
        let values: Vec<(&str, &str)> = deep
            .children
            .iter()
            .map(|c| (c.value.as_str(), c.words[0].as_str()))
            .collect();
        assert_eq!(values, [("ceramic", "wan1"), ("wooden", "wan2")]);
    }

    #[test]
    fn derived_tree_rightmost_groups_ceramic() {
        let dict = containers();
        let th = derive_thesaurus(&dict, &FeaturePriority::right_to_left(&dict));
        let ceramic = th
            .children
            .iter()
            .find(|c| c.feature == "Material" && c.value == "ceramic")
            .unwrap();
        // Both ceramic words live in this subtree.
        let mut words = Vec::new();
        fn collect(node: &DerivedNode, out: &mut Vec<String>) {
            out.extend(node.words.iter().cloned());
            for child in &node.children {
                collect(child, out);
            }
        }
        collect(ceramic, &mut words);
        assert_eq!(words, ["wan1", "yunomi"]);
    }

    #[test]
    fn depth_first_matches_msort() {
        let dict = containers();
        for priority in [
            FeaturePriority::left_to_right(&dict),
            FeaturePriority::right_to_left(&dict),
        ] {
            let th = derive_thesaurus(&dict, &priority);
            assert_eq!(
                th.depth_first_words(),
                msort_by_features(&dict, &priority, &TextOrder::Lexicographic)
            );
        }
    }

    #[test]
    fn hierarchy_pairs() {
        let pairs = infer_hierarchy(&containers());
        let expect: Vec<(String, String)> = [
            ("utsuwa", "wan1"),
            ("utsuwa", "wan2"),
            ("utsuwa", "yunomi"),
            ("utsuwa", "sara"),
            ("wan1", "yunomi"),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
        assert_eq!(pairs, expect);
    }

    #[test]
    fn identical_records_are_not_related() {
        let text = "word\tf\na\tx\nb\tx\n";
        let dict = FeatureDictionary::from_reader(text.as_bytes()).unwrap();
        assert!(infer_hierarchy(&dict).is_empty());
    }

    #[test]
    fn similarity_counts_shared_values() {
        let dict = containers();
        let s = similarity(&dict, "wan1", "wan2").unwrap();
        assert_eq!(s, Similarity { matching: 4, total: 5 });
        assert_eq!(s.to_string(), "4/5");
        assert_eq!(
            similarity(&dict, "utsuwa", "sara").unwrap(),
            Similarity { matching: 4, total: 5 }
        );
        let s = similarity(&dict, "yunomi", "yunomi").unwrap();
        assert_eq!(s.matching, s.total);
        let err = similarity(&dict, "wan1", "kyusu").unwrap_err();
        assert!(matches!(err, FeatureError::UnknownWord(name) if name == "kyusu"));
    }

    #[test]
    fn load_validates_shape() {
        let err = FeatureDictionary::from_reader("word\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::NoFeatures));
        let err = FeatureDictionary::from_reader("".as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::MissingHeader));
        let err =
            FeatureDictionary::from_reader("word\tf\tf\na\tx\ty\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::DuplicateFeature(_)));
        let err = FeatureDictionary::from_reader("word\tf\na\tx\ty\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::ColumnCount { line: 2, expected: 2, got: 3 }));
        let err = FeatureDictionary::from_reader("word\tf\na\tx\na\ty\n".as_bytes()).unwrap_err();
        assert!(matches!(err, FeatureError::DuplicateWord { line: 3, .. }));
    }

    #[test]
    fn empty_cell_and_dash_are_unspecified() {
        let text = "word\tf1\tf2\na\t\t-\n";
        let dict = FeatureDictionary::from_reader(text.as_bytes()).unwrap();
        assert_eq!(dict.record("a").unwrap(), &[None, None]);
    }
}
