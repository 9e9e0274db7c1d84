//! Typed dependencies and verb argument extraction.
//!
//! Two input formats are read: the plain Stanford dependency listing
//! (`nsubj(run-2, I-1)`, one relation per line, blank line between sentences)
//! and ten-column CoNLL-X.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use regex::Regex;
use serde::Serialize;
use thiserror::Error;

use crate::treebank::VerbOccurrence;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DepError {
    #[error("malformed dependency line {0}")]
    MalformedLine(usize),
    #[error("line {line}: token {index} is `{found}`, previously `{expected}`")]
    IndexMismatch { line: usize, index: usize, expected: String, found: String },
    #[error("token index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },
    #[error("no dependency graph for sentence `{0}`")]
    UnknownSentenceId(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepToken {
    pub index: usize,
    pub form: String,
    pub pos: Option<String>,
    pub lemma: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DepEdge {
    pub relation: String,
    /// 0 for the artificial root.
    pub governor: usize,
    pub dependent: usize,
}

/// Tokens (sorted by index, possibly with gaps) and relation edges of one sentence.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct DepGraph {
    pub sentence_id: String,
    pub tokens: Vec<DepToken>,
    pub edges: Vec<DepEdge>,
}

impl DepGraph {
    pub fn token(&self, index: usize) -> Option<&DepToken> {
        self.tokens
            .binary_search_by_key(&index, |t| t.index)
            .ok()
            .map(|i| &self.tokens[i])
    }

    pub fn max_index(&self) -> usize {
        self.tokens.last().map_or(0, |t| t.index)
    }

    fn check_index(&self, index: usize) -> Result<(), DepError> {
        let max = self.max_index();
        if index == 0 || index > max {
            Err(DepError::IndexOutOfRange { index, max })
        } else {
            Ok(())
        }
    }

    /// Dependent of the first matching edge governed by `verb_index`.
    ///
    /// Relations are tried in the order given; within one relation the
    /// lowest dependent index wins.
    pub fn argument<S: AsRef<str>>(
        &self,
        verb_index: usize,
        relations: &[S],
    ) -> Result<Option<&DepToken>, DepError> {
        self.check_index(verb_index)?;
        for rel in relations {
            let best = self
                .edges
                .iter()
                .filter(|e| e.governor == verb_index && e.relation == rel.as_ref())
                .map(|e| e.dependent)
                .min();
            if let Some(dep) = best {
                return Ok(self.token(dep));
            }
        }
        Ok(None)
    }
}

pub fn subject_of<'g, S: AsRef<str>>(
    graph: &'g DepGraph,
    verb_index: usize,
    subject_relations: &[S],
) -> Result<Option<&'g DepToken>, DepError> {
    graph.argument(verb_index, subject_relations)
}

pub fn object_of<'g, S: AsRef<str>>(
    graph: &'g DepGraph,
    verb_index: usize,
    object_relations: &[S],
) -> Result<Option<&'g DepToken>, DepError> {
    graph.argument(verb_index, object_relations)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DepFormat {
    #[default]
    SdText,
    ConllX,
}

impl FromStr for DepFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sd" | "sd-text" => Ok(DepFormat::SdText),
            "conll" | "conllx" | "conll-x" => Ok(DepFormat::ConllX),
            other => Err(format!("unknown dependency format `{other}` (expected sd-text|conll-x)")),
        }
    }
}

impl fmt::Display for DepFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DepFormat::SdText => "sd-text",
            DepFormat::ConllX => "conll-x",
        })
    }
}

/// Parses dependency output; sentence ids are 1-based ordinals.
pub fn parse_deps(input: &str, format: DepFormat) -> Result<Vec<DepGraph>, DepError> {
    let mut graphs = Vec::new();
    let mut block: Vec<(usize, &str)> = Vec::new();
    let lines = input.lines().enumerate().map(|(n, l)| (n + 1, l.trim_end_matches('\r')));
    for (n, line) in lines.chain(std::iter::once((0, ""))) {
        if line.trim().is_empty() {
            if !block.is_empty() {
                let mut graph = match format {
                    DepFormat::SdText => sd_block(&block)?,
                    DepFormat::ConllX => conll_block(&block)?,
                };
                graph.sentence_id = (graphs.len() + 1).to_string();
                graphs.push(graph);
                block.clear();
            }
        } else if !(format == DepFormat::ConllX && line.starts_with('#')) {
            block.push((n, line));
        }
    }
    Ok(graphs)
}

fn sd_line() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(r"^\s*([^\s(]+)\((\S+)-(\d+)'*, (\S+)-(\d+)'*\)\s*$").unwrap()
    })
}

struct TokenTable {
    forms: HashMap<usize, String>,
}

impl TokenTable {
    fn add(&mut self, line: usize, index: usize, form: &str) -> Result<(), DepError> {
        match self.forms.get(&index) {
            Some(prev) if prev != form => Err(DepError::IndexMismatch {
                line,
                index,
                expected: prev.clone(),
                found: form.to_string(),
            }),
            Some(_) => Ok(()),
            None => {
                self.forms.insert(index, form.to_string());
                Ok(())
            }
        }
    }
}

fn sd_block(lines: &[(usize, &str)]) -> Result<DepGraph, DepError> {
    let mut table = TokenTable { forms: HashMap::new() };
    let mut edges = Vec::new();
    for &(n, line) in lines {
        let caps = sd_line().captures(line).ok_or(DepError::MalformedLine(n))?;
        let idx = |i: usize| caps[i].parse::<usize>().map_err(|_| DepError::MalformedLine(n));
        let (gov, dep) = (idx(3)?, idx(5)?);
        if dep == 0 {
            return Err(DepError::MalformedLine(n));
        }
        if gov != 0 {
            table.add(n, gov, &caps[2])?;
        }
        table.add(n, dep, &caps[4])?;
        edges.push(DepEdge { relation: caps[1].to_string(), governor: gov, dependent: dep });
    }
    let mut tokens: Vec<DepToken> = table
        .forms
        .into_iter()
        .map(|(index, form)| DepToken { index, form, pos: None, lemma: None })
        .collect();
    tokens.sort_by_key(|t| t.index);
    Ok(DepGraph { sentence_id: String::new(), tokens, edges })
}

fn conll_block(lines: &[(usize, &str)]) -> Result<DepGraph, DepError> {
    let opt = |s: &str| (s != "_").then(|| s.to_string());
    let mut tokens = Vec::new();
    let mut edges = Vec::new();
    let mut heads = Vec::new();
    for &(n, line) in lines {
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() != 10 {
            return Err(DepError::MalformedLine(n));
        }
        let index: usize = cols[0].parse().map_err(|_| DepError::MalformedLine(n))?;
        if index != tokens.len() + 1 || cols[1].is_empty() {
            return Err(DepError::MalformedLine(n));
        }
        tokens.push(DepToken {
            index,
            form: cols[1].to_string(),
            lemma: opt(cols[2]),
            pos: opt(cols[4]).or_else(|| opt(cols[3])),
        });
        if cols[6] != "_" {
            let head: usize = cols[6].parse().map_err(|_| DepError::MalformedLine(n))?;
            if cols[7].is_empty() || cols[7] == "_" {
                return Err(DepError::MalformedLine(n));
            }
            heads.push((n, head));
            edges.push(DepEdge { relation: cols[7].to_string(), governor: head, dependent: index });
        }
    }
    if let Some(&(n, _)) = heads.iter().find(|(_, head)| *head > tokens.len()) {
        return Err(DepError::MalformedLine(n));
    }
    Ok(DepGraph { sentence_id: String::new(), tokens, edges })
}

/// Relation labels that count as subjects and objects, in priority order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationConfig {
    pub subject: Vec<String>,
    pub object: Vec<String>,
    /// Count arguments by lemma (falling back to form) instead of form.
    pub use_lemma: bool,
}

impl Default for RelationConfig {
    fn default() -> Self {
        RelationConfig {
            subject: vec!["nsubj".into(), "xsubj".into(), "nsubjpass".into()],
            object: vec!["dobj".into(), "obj".into()],
            use_lemma: false,
        }
    }
}

impl RelationConfig {
    pub fn without_passive_subjects(mut self) -> Self {
        self.subject.retain(|r| r != "nsubjpass");
        self
    }

    /// Counting key for an argument token.
    pub fn key(&self, token: &DepToken) -> String {
        let raw = if self.use_lemma { token.lemma.as_deref().unwrap_or(&token.form) } else { &token.form };
        raw.to_lowercase()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgRecord {
    pub occurrence: VerbOccurrence,
    pub subject: Option<DepToken>,
    pub object: Option<DepToken>,
}

/// One record per occurrence, in occurrence order.
///
/// Arguments keep their surface token; use [`RelationConfig::key`] to count.
/// An occurrence whose verb index lies outside its graph's token range
/// yields a record with no arguments.
pub fn collect_arg_records(
    graphs: &[DepGraph],
    occurrences: &[VerbOccurrence],
    config: &RelationConfig,
) -> Result<Vec<ArgRecord>, DepError> {
    let by_id: HashMap<&str, &DepGraph> =
        graphs.iter().rev().map(|g| (g.sentence_id.as_str(), g)).collect();
    occurrences
        .iter()
        .map(|occ| {
            let graph = by_id
                .get(occ.sentence_id.as_str())
                .ok_or_else(|| DepError::UnknownSentenceId(occ.sentence_id.clone()))?;
            let form = |rels: &[String]| match graph.argument(occ.token_index, rels) {
                Ok(tok) => tok.cloned(),
                Err(_) => None,
            };
            Ok(ArgRecord {
                occurrence: occ.clone(),
                subject: form(&config.subject),
                object: form(&config.object),
            })
        })
        .collect()
}
