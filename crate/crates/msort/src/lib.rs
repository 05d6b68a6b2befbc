//! Sort word lists into meaning order instead of alphabetical or frequency
//! order.
//!
//! The core pipeline annotates each word with the category codes of a
//! thesaurus-style lexicon, merges in labelled marker codes as bookmarks,
//! sorts everything by code, and condenses the result into labelled groups.
//! Two further backends provide the same grouping without numeric codes:
//! definition-string paths from an is-a thesaurus ([`path`]) and value
//! tuples from a multi-feature dictionary ([`features`]).
//!
//! ```
//! use msort::engine::{msort, CondenseOptions, Entry};
//! use msort::lexicon::CodedLexicon;
//! use msort::markers::MarkerTable;
//!
//! let lexicon = CodedLexicon::from_senses([
//!     ("a Royal family", "5210007022".parse().unwrap()),
//!     ("a festival", "ab46002012".parse().unwrap()),
//! ]);
//! let words = vec![Entry::new("a festival"), Entry::new("a Royal family")];
//! let grouped = msort(&words, &lexicon, &MarkerTable::builtin(), CondenseOptions::default());
//! let labels: Vec<&str> = grouped.groups.iter().map(|g| g.label.as_str()).collect();
//! assert_eq!(labels, ["Human", "Human activity"]);
//! ```

pub mod cli;
pub mod codes;
pub mod engine;
pub mod features;
pub mod lexicon;
pub mod markers;
pub mod path;
pub mod remap;
pub mod render;

pub use codes::{compare_codes, CategoryCode, CodeError, Symbol, ALPHABET, CODE_LEN};
pub use engine::{
    annotate, condense, group_keywords, msort, msort_pairs, sort_annotations, CondenseOptions,
    Entry, GroupedList, PairCorpus,
};
pub use features::{
    derive_thesaurus, infer_hierarchy, msort_by_features, similarity, FeatureDictionary,
    FeaturePriority,
};
pub use lexicon::{CodedLexicon, SensePolicy, TextOrder};
pub use markers::MarkerTable;
pub use path::{msort_by_path, DefinitionPath, PathThesaurus};
pub use remap::{RemapRule, RemapTable};
