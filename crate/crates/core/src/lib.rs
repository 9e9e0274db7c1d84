//! Syntactic comparison of email corpora.
//!
//! The crate reads constituency trees and typed dependencies produced by an
//! external parser, anchors them at a list of target verbs and measures how
//! similar two corpora are:
//!
//! * [`treebank`] reads bracketed trees and finds target-verb tokens.
//! * [`pathex`] computes parse tree paths from a verb to every other token.
//! * [`depargs`] reads dependency output and extracts verb subjects and objects.
//! * [`stats`] holds the sparse counters, cosine similarity and top-k tables.
//! * [`pipeline`] ties these together over a corpus manifest and renders reports.
//!
//! ```
//! use mailsyntax::pathex::{canonical_string, tree_path, PathEncoding};
//! use mailsyntax::treebank::parse_ptb;
//!
//! let tree = parse_ptb("(S (NP (PRP I)) (VP (VBP run)))").unwrap().remove(0);
//! let path = tree_path(&tree, 2, 1).unwrap();
//! assert_eq!(canonical_string(&path, PathEncoding::Full), "↑VBP↑VP↑S↓NP↓PRP");
//! ```

pub mod depargs;
pub mod pathex;
pub mod pipeline;
pub mod stats;
pub mod treebank;

pub use depargs::{parse_deps, ArgRecord, DepFormat, DepGraph, RelationConfig};
pub use pathex::{canonical_string, extract_all_paths, tree_path, ParseTreePath, PathEncoding};
pub use stats::{cosine, FreqDist, PathVector};
pub use treebank::{parse_ptb, print_ptb, InflectionTable, ParseTree, VerbOccurrence};
