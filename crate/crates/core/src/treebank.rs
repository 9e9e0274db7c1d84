//! Reading and writing constituency trees in bracketed Penn Treebank notation.
//!
//! Trees are read from text such as `(ROOT (S (NP (PRP I)) (VP (VBP run))))`.
//! Every word becomes a [`TreeNode::Terminal`] carrying its 1-based position in
//! the sentence; every bracketed constituent becomes a [`TreeNode::Phrase`].
//! Escape tokens like `-LRB-` are kept as they are.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("unbalanced brackets at byte {0}")]
    UnbalancedBrackets(usize),
    #[error("empty tree at byte {0}")]
    EmptyTree(usize),
    #[error("node at byte {0} mixes a word with other children")]
    TerminalWithChildren(usize),
}

/// A node of a constituency tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreeNode {
    Phrase { label: String, children: Vec<TreeNode> },
    Terminal { token: String, index: usize },
}

impl TreeNode {
    pub fn phrase(label: impl Into<String>, children: Vec<TreeNode>) -> Self {
        TreeNode::Phrase { label: label.into(), children }
    }

    /// Tag of a phrase, or the surface word of a terminal.
    pub fn label(&self) -> &str {
        match self {
            TreeNode::Phrase { label, .. } => label,
            TreeNode::Terminal { token, .. } => token,
        }
    }

    pub fn children(&self) -> &[TreeNode] {
        match self {
            TreeNode::Phrase { children, .. } => children,
            TreeNode::Terminal { .. } => &[],
        }
    }

    pub fn is_terminal(&self) -> bool {
        matches!(self, TreeNode::Terminal { .. })
    }

    /// A preterminal is a phrase whose only child is a terminal.
    pub fn is_preterminal(&self) -> bool {
        matches!(self.children(), [TreeNode::Terminal { .. }])
    }

    /// For a preterminal, the word and index it dominates.
    pub fn preterminal_token(&self) -> Option<(&str, usize)> {
        match self.children() {
            [TreeNode::Terminal { token, index }] => Some((token, *index)),
            _ => None,
        }
    }

    fn write_ptb(&self, out: &mut String) {
        match self {
            TreeNode::Terminal { token, .. } => out.push_str(token),
            TreeNode::Phrase { label, children } => {
                out.push('(');
                out.push_str(label);
                for child in children {
                    out.push(' ');
                    child.write_ptb(out);
                }
                out.push(')');
            }
        }
    }
}

/// One parsed sentence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseTree {
    pub root: TreeNode,
    pub sentence_id: String,
    pub token_count: usize,
}

impl ParseTree {
    /// Builds a tree from a root node, renumbering terminals left to right.
    pub fn new(mut root: TreeNode, sentence_id: impl Into<String>) -> Self {
        fn renumber(node: &mut TreeNode, next: &mut usize) {
            match node {
                TreeNode::Terminal { index, .. } => {
                    *next += 1;
                    *index = *next;
                }
                TreeNode::Phrase { children, .. } => {
                    for child in children {
                        renumber(child, next);
                    }
                }
            }
        }
        let mut count = 0;
        renumber(&mut root, &mut count);
        ParseTree { root, sentence_id: sentence_id.into(), token_count: count }
    }

    /// Surface words in order.
    pub fn tokens(&self) -> Vec<&str> {
        self.preterminals()
            .into_iter()
            .filter_map(|(node, _)| node.preterminal_token().map(|(t, _)| t))
            .collect()
    }

    /// Words joined by single spaces.
    pub fn sentence_text(&self) -> String {
        self.tokens().join(" ")
    }

    /// Preterminal nodes in token order, paired with their token index.
    pub fn preterminals(&self) -> Vec<(&TreeNode, usize)> {
        fn walk<'a>(node: &'a TreeNode, out: &mut Vec<(&'a TreeNode, usize)>) {
            if let Some((_, idx)) = node.preterminal_token() {
                out.push((node, idx));
                return;
            }
            for child in node.children() {
                walk(child, out);
            }
        }
        let mut out = Vec::with_capacity(self.token_count);
        walk(&self.root, &mut out);
        out
    }

    pub fn to_ptb(&self) -> String {
        print_ptb(self)
    }
}

/// Renders a tree on one line in canonical bracketed form.
pub fn print_ptb(tree: &ParseTree) -> String {
    let mut out = String::new();
    tree.root.write_ptb(&mut out);
    out
}

/// Parses zero or more whitespace-separated bracketed trees.
///
/// Sentence ids default to 1-based ordinals; see [`assign_sentence_ids`].
/// A top-level wrapper with an empty label, as in `( (S ...))`, is removed.
pub fn parse_ptb(input: &str) -> Result<Vec<ParseTree>, TreeError> {
    let mut parser = Parser { src: input, pos: 0 };
    let mut trees = Vec::new();
    loop {
        parser.skip_ws();
        match parser.peek() {
            None => break,
            Some(b'(') => {
                let root = parser.node()?;
                let root = match root {
                    Raw::Phrase { label, mut children, .. }
                        if label.is_empty() && children.len() == 1 =>
                    {
                        children.pop().unwrap()
                    }
                    other => other,
                };
                let root = root.finish(&mut 0)?;
                let id = (trees.len() + 1).to_string();
                trees.push(ParseTree::new(root, id));
            }
            Some(_) => return Err(TreeError::UnbalancedBrackets(parser.pos)),
        }
    }
    Ok(trees)
}

/// Applies ids from a sidecar file (one id per tree, same order).
///
/// Blank lines are ignored; the number of ids must match the number of trees.
pub fn assign_sentence_ids(trees: &mut [ParseTree], ids: &str) -> Result<(), IdCountMismatch> {
    let ids: Vec<&str> = ids.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if ids.len() != trees.len() {
        return Err(IdCountMismatch { ids: ids.len(), trees: trees.len() });
    }
    for (tree, id) in trees.iter_mut().zip(ids) {
        tree.sentence_id = id.to_string();
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{ids} sentence ids for {trees} trees")]
pub struct IdCountMismatch {
    pub ids: usize,
    pub trees: usize,
}

enum Raw {
    Phrase { label: String, children: Vec<Raw>, start: usize },
    Word(String),
}

impl Raw {
    fn finish(self, next: &mut usize) -> Result<TreeNode, TreeError> {
        match self {
            Raw::Word(token) => {
                *next += 1;
                Ok(TreeNode::Terminal { token, index: *next })
            }
            Raw::Phrase { label, children, start } => {
                if label.is_empty() || children.is_empty() {
                    return Err(TreeError::EmptyTree(start));
                }
                let words = children.iter().filter(|c| matches!(c, Raw::Word(_))).count();
                if words > 0 && children.len() > 1 {
                    return Err(TreeError::TerminalWithChildren(start));
                }
                let children = children
                    .into_iter()
                    .map(|c| c.finish(next))
                    .collect::<Result<Vec<_>, _>>()?;
                Ok(TreeNode::Phrase { label, children })
            }
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.as_bytes().get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.pos += c.len_utf8();
        }
    }

    fn atom(&mut self) -> &str {
        let start = self.pos;
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() || c == '(' || c == ')' {
                break;
            }
            self.pos += c.len_utf8();
        }
        &self.src[start..self.pos]
    }

    // Expects to sit on '('.
    fn node(&mut self) -> Result<Raw, TreeError> {
        let start = self.pos;
        self.pos += 1;
        self.skip_ws();
        let label = self.atom().to_string();
        let mut children = Vec::new();
        loop {
            self.skip_ws();
            match self.peek() {
                None => return Err(TreeError::UnbalancedBrackets(start)),
                Some(b')') => {
                    self.pos += 1;
                    return Ok(Raw::Phrase { label, children, start });
                }
                Some(b'(') => children.push(self.node()?),
                Some(_) => children.push(Raw::Word(self.atom().to_string())),
            }
        }
    }
}

/// A target-verb token found in a tree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerbOccurrence {
    pub doc_id: String,
    pub sentence_id: String,
    pub token_index: usize,
    pub surface_form: String,
    pub target_lemma: String,
}

/// Accepted surface forms for each target lemma, matched case-insensitively.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct InflectionTable {
    forms: BTreeMap<String, BTreeSet<String>>,
}

const DEFAULT_INFLECTIONS: &[(&str, &[&str])] = &[
    ("access", &["access", "accesses", "accessed", "accessing"]),
    ("click", &["click", "clicks", "clicked", "clicking"]),
    ("confirm", &["confirm", "confirms", "confirmed", "confirming"]),
    ("enter", &["enter", "enters", "entered", "entering"]),
    ("follow", &["follow", "follows", "followed", "following"]),
    ("protect", &["protect", "protects", "protected", "protecting"]),
    ("update", &["update", "updates", "updated", "updating"]),
    ("use", &["use", "uses", "used", "using"]),
];

/// The eight target verbs analysed by default.
pub const DEFAULT_TARGET_VERBS: [&str; 8] =
    ["access", "click", "confirm", "enter", "follow", "protect", "update", "use"];

impl InflectionTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table for the eight default target verbs.
    pub fn english_defaults() -> Self {
        let mut table = Self::new();
        for (lemma, forms) in DEFAULT_INFLECTIONS {
            table.insert(lemma, forms.iter().copied());
        }
        table
    }

    /// Adds forms for a lemma. The lemma itself is always accepted.
    pub fn insert<'a>(&mut self, lemma: &str, forms: impl IntoIterator<Item = &'a str>) {
        let lemma = lemma.to_lowercase();
        let entry = self.forms.entry(lemma.clone()).or_default();
        entry.insert(lemma);
        entry.extend(forms.into_iter().map(str::to_lowercase));
    }

    pub fn forms(&self, lemma: &str) -> Option<&BTreeSet<String>> {
        self.forms.get(&lemma.to_lowercase())
    }

    /// Reads a table from text lines of the form `lemma: form form ...`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut table = Self::new();
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (lemma, forms) = line
                .split_once(':')
                .ok_or_else(|| format!("line {}: expected `lemma: forms`", n + 1))?;
            let lemma = lemma.trim();
            if lemma.is_empty() {
                return Err(format!("line {}: empty lemma", n + 1));
            }
            table.insert(lemma, forms.split_whitespace());
        }
        Ok(table)
    }
}

/// Finds verb tokens whose lowercased form belongs to a target lemma.
///
/// Only preterminals tagged `VB*` qualify. Lemmas missing from `inflections`
/// match their own base form only.
pub fn find_target_occurrences(
    tree: &ParseTree,
    targets: &BTreeSet<String>,
    inflections: &InflectionTable,
) -> Vec<VerbOccurrence> {
    find_target_occurrences_in_doc(tree, "", targets, inflections)
}

pub fn find_target_occurrences_in_doc(
    tree: &ParseTree,
    doc_id: &str,
    targets: &BTreeSet<String>,
    inflections: &InflectionTable,
) -> Vec<VerbOccurrence> {
    let mut out = Vec::new();
    for (node, _) in tree.preterminals() {
        if !node.label().starts_with("VB") {
            continue;
        }
        let Some((token, index)) = node.preterminal_token() else { continue };
        let lower = token.to_lowercase();
        let lemma = targets.iter().find(|lemma| match inflections.forms(lemma) {
            Some(forms) => forms.contains(&lower),
            None => lemma.to_lowercase() == lower,
        });
        if let Some(lemma) = lemma {
            out.push(VerbOccurrence {
                doc_id: doc_id.to_string(),
                sentence_id: tree.sentence_id.clone(),
                token_index: index,
                surface_form: token.to_string(),
                target_lemma: lemma.clone(),
            });
        }
    }
    out
}

impl fmt::Display for ParseTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_ptb(self))
    }
}
