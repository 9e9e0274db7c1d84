//! Parse tree paths from a verb to the other nodes of its sentence.
//!
//! A path climbs from the verb's preterminal to the lowest common ancestor
//! and then descends to the target node, recording the label of every node
//! it enters: `↑VB↑VP↓NP↓PRP$`.
//!
//! Two renderings are provided. [`PathEncoding::Full`] keeps every label.
//! [`PathEncoding::Recoded`] drops the verb's own tag, replaces a
//! preterminal end label with `T`, and uses diagonal arrows: `↗VP↖S↙NP`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::treebank::{ParseTree, TreeNode, VerbOccurrence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("source and target are the same token ({0})")]
    SameToken(usize),
    #[error("token index {index} out of range 1..={count}")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("occurrence {sentence_id}:{token_index} is not a token of this tree")]
    OccurrenceNotInTree { sentence_id: String, token_index: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Direction {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct PathStep {
    pub direction: Direction,
    pub label: String,
}

impl PathStep {
    pub fn up(label: impl Into<String>) -> Self {
        PathStep { direction: Direction::Up, label: label.into() }
    }

    pub fn down(label: impl Into<String>) -> Self {
        PathStep { direction: Direction::Down, label: label.into() }
    }
}

/// Route from a verb to another node.
///
/// `end_token_index` is set when the path ends at a preterminal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ParseTreePath {
    pub steps: Vec<PathStep>,
    pub end_token_index: Option<usize>,
}

impl ParseTreePath {
    pub fn ends_at_preterminal(&self) -> bool {
        self.end_token_index.is_some()
    }

    pub fn up_steps(&self) -> usize {
        self.steps.iter().take_while(|s| s.direction == Direction::Up).count()
    }
}

/// Which nodes paths are drawn to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PathTarget {
    /// The preterminal of every other token.
    #[default]
    Preterminal,
    /// Every phrase node except the verb's own preterminal, ancestors included.
    All,
}

impl FromStr for PathTarget {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "preterminal" => Ok(PathTarget::Preterminal),
            "all" => Ok(PathTarget::All),
            other => Err(format!("unknown path target `{other}` (expected preterminal|all)")),
        }
    }
}

/// Tree flattened into parent links.
struct Arena<'a> {
    labels: Vec<&'a str>,
    parents: Vec<Option<usize>>,
    depths: Vec<usize>,
    // node id -> token index, for preterminals
    pre_token: Vec<Option<usize>>,
    // token index - 1 -> preterminal node id
    pre_of_token: Vec<usize>,
}

impl<'a> Arena<'a> {
    fn new(tree: &'a ParseTree) -> Self {
        let mut arena = Arena {
            labels: Vec::new(),
            parents: Vec::new(),
            depths: Vec::new(),
            pre_token: Vec::new(),
            pre_of_token: vec![usize::MAX; tree.token_count],
        };
        arena.add(&tree.root, None, 0);
        arena
    }

    fn add(&mut self, node: &'a TreeNode, parent: Option<usize>, depth: usize) {
        if node.is_terminal() {
            return;
        }
        let id = self.labels.len();
        self.labels.push(node.label());
        self.parents.push(parent);
        self.depths.push(depth);
        let tok = node.preterminal_token().map(|(_, i)| i);
        self.pre_token.push(tok);
        if let Some(i) = tok {
            self.pre_of_token[i - 1] = id;
        }
        for child in node.children() {
            self.add(child, Some(id), depth + 1);
        }
    }

    fn path(&self, from: usize, to: usize) -> ParseTreePath {
        let (mut a, mut b) = (from, to);
        let mut ups = Vec::new();
        let mut downs = Vec::new();
        while self.depths[a] > self.depths[b] {
            ups.push(a);
            a = self.parents[a].unwrap();
        }
        while self.depths[b] > self.depths[a] {
            downs.push(b);
            b = self.parents[b].unwrap();
        }
        while a != b {
            ups.push(a);
            downs.push(b);
            a = self.parents[a].unwrap();
            b = self.parents[b].unwrap();
        }
        ups.push(a);
        let steps = ups
            .iter()
            .map(|&n| PathStep::up(self.labels[n]))
            .chain(downs.iter().rev().map(|&n| PathStep::down(self.labels[n])))
            .collect();
        ParseTreePath { steps, end_token_index: self.pre_token[to] }
    }
}

fn check_index(tree: &ParseTree, index: usize) -> Result<(), PathError> {
    if index == 0 || index > tree.token_count {
        Err(PathError::IndexOutOfRange { index, count: tree.token_count })
    } else {
        Ok(())
    }
}

/// Path from the verb at `from_token` to the preterminal of `to_token`.
pub fn tree_path(
    tree: &ParseTree,
    from_token: usize,
    to_token: usize,
) -> Result<ParseTreePath, PathError> {
    check_index(tree, from_token)?;
    check_index(tree, to_token)?;
    if from_token == to_token {
        return Err(PathError::SameToken(from_token));
    }
    let arena = Arena::new(tree);
    Ok(arena.path(arena.pre_of_token[from_token - 1], arena.pre_of_token[to_token - 1]))
}

/// One path per other token of the sentence, in token order.
pub fn extract_all_paths(
    tree: &ParseTree,
    verb: &VerbOccurrence,
) -> Result<Vec<ParseTreePath>, PathError> {
    extract_paths(tree, verb, PathTarget::Preterminal)
}

pub fn extract_paths(
    tree: &ParseTree,
    verb: &VerbOccurrence,
    target: PathTarget,
) -> Result<Vec<ParseTreePath>, PathError> {
    let not_in_tree = || PathError::OccurrenceNotInTree {
        sentence_id: verb.sentence_id.clone(),
        token_index: verb.token_index,
    };
    if verb.sentence_id != tree.sentence_id
        || verb.token_index == 0
        || verb.token_index > tree.token_count
    {
        return Err(not_in_tree());
    }
    let arena = Arena::new(tree);
    let from = arena.pre_of_token[verb.token_index - 1];
    let paths = match target {
        PathTarget::Preterminal => arena
            .pre_of_token
            .iter()
            .filter(|&&n| n != from)
            .map(|&n| arena.path(from, n))
            .collect(),
        PathTarget::All => {
            (0..arena.labels.len()).filter(|&n| n != from).map(|n| arena.path(from, n)).collect()
        }
    };
    Ok(paths)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub enum PathEncoding {
    /// Every label kept, straight arrows.
    #[default]
    Full,
    /// Verb tag dropped, generic end label, diagonal arrows.
    Recoded,
}

impl FromStr for PathEncoding {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gj" | "full" => Ok(PathEncoding::Full),
            "sg" | "recoded" => Ok(PathEncoding::Recoded),
            other => Err(format!("unknown encoding `{other}` (expected gj|sg)")),
        }
    }
}

impl fmt::Display for PathEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PathEncoding::Full => "gj",
            PathEncoding::Recoded => "sg",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Arrow {
    Up,
    Down,
    UpRight,
    UpLeft,
    DownLeft,
    DownRight,
}

impl Arrow {
    pub fn glyph(self) -> &'static str {
        match self {
            Arrow::Up => "↑",
            Arrow::Down => "↓",
            Arrow::UpRight => "↗",
            Arrow::UpLeft => "↖",
            Arrow::DownLeft => "↙",
            Arrow::DownRight => "↘",
        }
    }

    pub fn ascii(self) -> &'static str {
        match self {
            Arrow::Up => "u",
            Arrow::Down => "d",
            Arrow::UpRight => "UR",
            Arrow::UpLeft => "UL",
            Arrow::DownLeft => "DL",
            Arrow::DownRight => "DR",
        }
    }
}

/// Arrows used by the recoded form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecodedArrows {
    pub first_up: Arrow,
    pub later_up: Arrow,
    pub down: Arrow,
}

impl Default for RecodedArrows {
    fn default() -> Self {
        RecodedArrows { first_up: Arrow::UpRight, later_up: Arrow::UpLeft, down: Arrow::DownLeft }
    }
}

/// Label substituted for a preterminal end node in the recoded form.
pub const GENERIC_TERMINAL: &str = "T";

/// Turns paths into their canonical strings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PathEncoder {
    pub encoding: PathEncoding,
    pub ascii: bool,
    pub recoded_arrows: RecodedArrows,
}

impl PathEncoder {
    pub fn new(encoding: PathEncoding) -> Self {
        PathEncoder { encoding, ..Default::default() }
    }

    pub fn ascii(mut self, ascii: bool) -> Self {
        self.ascii = ascii;
        self
    }

    fn arrow(&self, a: Arrow) -> &'static str {
        if self.ascii {
            a.ascii()
        } else {
            a.glyph()
        }
    }

    pub fn encode(&self, path: &ParseTreePath) -> String {
        let mut out = String::new();
        match self.encoding {
            PathEncoding::Full => {
                for step in &path.steps {
                    out.push_str(self.arrow(match step.direction {
                        Direction::Up => Arrow::Up,
                        Direction::Down => Arrow::Down,
                    }));
                    out.push_str(&step.label);
                }
            }
            PathEncoding::Recoded => {
                let rest = path.steps.get(1..).unwrap_or_default();
                for (i, step) in rest.iter().enumerate() {
                    let arrow = match step.direction {
                        Direction::Up if i == 0 => self.recoded_arrows.first_up,
                        Direction::Up => self.recoded_arrows.later_up,
                        Direction::Down => self.recoded_arrows.down,
                    };
                    out.push_str(self.arrow(arrow));
                    if i + 1 == rest.len() && path.ends_at_preterminal() {
                        out.push_str(GENERIC_TERMINAL);
                    } else {
                        out.push_str(&step.label);
                    }
                }
            }
        }
        out
    }
}

/// Canonical string of a path with glyph arrows.
pub fn canonical_string(path: &ParseTreePath, encoding: PathEncoding) -> String {
    PathEncoder::new(encoding).encode(path)
}

/// Rewrites `PRP$` as `PRPS`, a spelling some tools and tables use.
pub fn prps_compat(s: &str) -> String {
    s.replace("PRP$", "PRPS")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::treebank::parse_ptb;

    fn tree(s: &str) -> ParseTree {
        parse_ptb(s).unwrap().remove(0)
    }

    fn occ(t: &ParseTree, index: usize) -> VerbOccurrence {
        VerbOccurrence {
            doc_id: String::new(),
            sentence_id: t.sentence_id.clone(),
            token_index: index,
            surface_form: t.tokens()[index - 1].to_string(),
            target_lemma: "x".into(),
        }
    }

    #[test]
    fn small_tree_by_hand() {
        let t = tree("(S (NP (PRP I)) (VP (VBP run)))");
        let p = tree_path(&t, 2, 1).unwrap();
        assert_eq!(canonical_string(&p, PathEncoding::Full), "↑VBP↑VP↑S↓NP↓PRP");
        assert_eq!(p.end_token_index, Some(1));
        assert_eq!(canonical_string(&p, PathEncoding::Recoded), "↗VP↖S↙NP↙T");
    }

    #[test]
    fn errors() {
        let t = tree("(S (NP (PRP I)) (VP (VBP run)))");
        assert_eq!(tree_path(&t, 2, 2), Err(PathError::SameToken(2)));
        assert_eq!(tree_path(&t, 3, 1), Err(PathError::IndexOutOfRange { index: 3, count: 2 }));
        assert!(matches!(tree_path(&t, 0, 1), Err(PathError::IndexOutOfRange { .. })));
        let mut o = occ(&t, 2);
        o.sentence_id = "9".into();
        assert!(matches!(extract_all_paths(&t, &o), Err(PathError::OccurrenceNotInTree { .. })));
    }

    #[test]
    fn two_tokens_one_path() {
        let t = tree("(S (NP (PRP I)) (VP (VBP run)))");
        assert_eq!(extract_all_paths(&t, &occ(&t, 2)).unwrap().len(), 1);
    }

    #[test]
    fn all_nodes_mode_includes_ancestors() {
        let t = tree("(S (NP (PRP I)) (VP (VBP run)))");
        let enc = PathEncoder::new(PathEncoding::Full);
        let got: Vec<_> = extract_paths(&t, &occ(&t, 2), PathTarget::All)
            .unwrap()
            .iter()
            .map(|p| enc.encode(p))
            .collect();
        assert_eq!(got, vec!["↑VBP↑VP↑S", "↑VBP↑VP↑S↓NP", "↑VBP↑VP↑S↓NP↓PRP", "↑VBP↑VP"]);
    }

    #[test]
    fn recoded_non_preterminal_end() {
        let p = ParseTreePath {
            steps: vec![PathStep::up("VB"), PathStep::up("VP"), PathStep::up("S"), PathStep::down("NP")],
            end_token_index: None,
        };
        assert_eq!(canonical_string(&p, PathEncoding::Recoded), "↗VP↖S↙NP");
        assert_eq!(PathEncoder::new(PathEncoding::Recoded).ascii(true).encode(&p), "URVPULSDLNP");
        assert_eq!(PathEncoder::new(PathEncoding::Full).ascii(true).encode(&p), "uVBuVPuSdNP");
    }

    #[test]
    fn recoded_arrow_table_is_configurable() {
        let p = ParseTreePath {
            steps: vec![PathStep::up("VB"), PathStep::up("VP"), PathStep::down("NP")],
            end_token_index: None,
        };
        let mut enc = PathEncoder::new(PathEncoding::Recoded);
        enc.recoded_arrows.down = Arrow::DownRight;
        assert_eq!(enc.encode(&p), "↗VP↘NP");
    }

    #[test]
    fn prps() {
        assert_eq!(prps_compat("↑VB↑VP↓NP↓PRP$"), "↑VB↑VP↓NP↓PRPS");
    }

    #[test]
    fn parse_flags() {
        assert_eq!("sg".parse::<PathEncoding>().unwrap(), PathEncoding::Recoded);
        assert_eq!("all".parse::<PathTarget>().unwrap(), PathTarget::All);
        assert!("x".parse::<PathTarget>().is_err());
    }
}
