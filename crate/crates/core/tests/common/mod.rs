#![allow(dead_code)]

use std::collections::VecDeque;
use std::path::{Path, PathBuf};

use mailsyntax::pathex::{Direction, PathStep};
use mailsyntax::treebank::{ParseTree, TreeNode};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures().join(name)).unwrap()
}

const PHRASES: &[&str] = &["S", "NP", "VP", "PP", "SBAR", "ADJP", "ADVP"];
const TAGS: &[&str] = &["NN", "NNS", "PRP", "PRP$", "DT", "JJ", "TO", "IN", "RB", "VB", "VBD", "VBZ"];
const WORDS: &[&str] = &[
    "you", "we", "I", "it", "link", "account", "information", "password", "the", "your", "here",
    "below", "to", "now", "records", "-LRB-", "-RRB-", "email", "form", "click", "update",
    "access", "confirm", "enter", "follow", "protect", "use", "clicked", "updating",
];
const VERBS: &[&str] =
    &["access", "click", "confirm", "enter", "follow", "protect", "update", "use", "clicked", "uses"];

/// Random tree with `1..=max_tokens` words and at most `max_depth` phrase levels
/// (preterminals included).
pub fn random_tree(rng: &mut StdRng, max_tokens: usize, max_depth: usize) -> ParseTree {
    let tokens = rng.gen_range(1..=max_tokens);
    let root = random_node(rng, 1, max_depth, tokens);
    ParseTree::new(root, "1")
}

fn preterminal(rng: &mut StdRng) -> TreeNode {
    let tag = *TAGS.choose(rng).unwrap();
    let word = if tag.starts_with("VB") && rng.gen_bool(0.7) {
        *VERBS.choose(rng).unwrap()
    } else {
        *WORDS.choose(rng).unwrap()
    };
    TreeNode::phrase(tag, vec![TreeNode::Terminal { token: word.into(), index: 0 }])
}

fn random_node(rng: &mut StdRng, level: usize, max_depth: usize, tokens: usize) -> TreeNode {
    if tokens == 1 && (level == max_depth || rng.gen_bool(0.6)) {
        return preterminal(rng);
    }
    let label = *PHRASES.choose(rng).unwrap();
    if level + 1 == max_depth {
        let children = (0..tokens).map(|_| preterminal(rng)).collect();
        return TreeNode::phrase(label, children);
    }
    let parts = if tokens == 1 { 1 } else { rng.gen_range(2..=tokens.min(4)) };
    // split `tokens` into `parts` positive sizes
    let mut cuts: Vec<usize> = (1..tokens).collect();
    cuts.shuffle(rng);
    let mut cuts: Vec<usize> = cuts.into_iter().take(parts - 1).collect();
    cuts.sort();
    let mut sizes = Vec::new();
    let mut prev = 0;
    for c in cuts.into_iter().chain(std::iter::once(tokens)) {
        sizes.push(c - prev);
        prev = c;
    }
    let children = sizes.into_iter().map(|n| random_node(rng, level + 1, max_depth, n)).collect();
    TreeNode::phrase(label, children)
}

/// Number of phrase levels from the root down to the deepest preterminal.
pub fn depth(node: &TreeNode) -> usize {
    if node.is_terminal() {
        0
    } else {
        1 + node.children().iter().map(depth).max().unwrap_or(0)
    }
}

/// Route from the verb's preterminal to another token's preterminal found by
/// breadth-first search over explicit parent/child links.
pub fn brute_force_path(tree: &ParseTree, from_token: usize, to_token: usize) -> Vec<PathStep> {
    let mut labels = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut token_node = vec![0; tree.token_count + 1];
    let mut stack = vec![(&tree.root, None)];
    while let Some((node, up)) = stack.pop() {
        if let TreeNode::Terminal { index, .. } = node {
            token_node[*index] = up.unwrap();
            continue;
        }
        let id = labels.len();
        labels.push(node.label().to_string());
        parent.push(up);
        for child in node.children().iter().rev() {
            stack.push((child, Some(id)));
        }
    }
    let n = labels.len();
    let mut adj = vec![Vec::new(); n];
    for (child, p) in parent.iter().enumerate() {
        if let Some(p) = *p {
            adj[child].push(p);
            adj[p].push(child);
        }
    }
    let (start, goal) = (token_node[from_token], token_node[to_token]);
    let mut prev = vec![usize::MAX; n];
    prev[start] = start;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if prev[v] == usize::MAX {
                prev[v] = u;
                queue.push_back(v);
            }
        }
    }
    let mut route = vec![goal];
    while *route.last().unwrap() != start {
        route.push(prev[*route.last().unwrap()]);
    }
    route.reverse();
    let mut steps = vec![PathStep { direction: Direction::Up, label: labels[start].clone() }];
    for w in route.windows(2) {
        let direction = if parent[w[0]] == Some(w[1]) { Direction::Up } else { Direction::Down };
        steps.push(PathStep { direction, label: labels[w[1]].clone() });
    }
    steps
}

pub fn render_steps(steps: &[PathStep]) -> String {
    steps
        .iter()
        .map(|s| format!("{}{}", if s.direction == Direction::Up { "↑" } else { "↓" }, s.label))
        .collect()
}

/// Stanford-style dependency lines consistent with the tree's tokens: every
/// token hangs off the first one, and each `VB*` token takes its left
/// neighbour as subject and its right neighbour as object.
pub fn synthetic_deps(tree: &ParseTree) -> String {
    let pts = tree.preterminals();
    let tok = |i: usize| pts[i - 1].0.preterminal_token().unwrap().0.to_string();
    let mut lines = vec![format!("root(ROOT-0, {}-1)", tok(1))];
    for i in 2..=tree.token_count {
        lines.push(format!("dep({}-1, {}-{i})", tok(1), tok(i)));
    }
    for (node, i) in &pts {
        if node.label().starts_with("VB") {
            if *i > 1 {
                lines.push(format!("nsubj({}-{i}, {}-{})", tok(*i), tok(i - 1), i - 1));
            }
            if *i < tree.token_count {
                lines.push(format!("dobj({}-{i}, {}-{})", tok(*i), tok(i + 1), i + 1));
            }
        }
    }
    lines.join("\n")
}

/// Writes a corpus of `n` random trees plus aligned dependencies into `dir`.
pub fn write_random_corpus(rng: &mut StdRng, dir: &Path, n: usize) {
    std::fs::create_dir_all(dir).unwrap();
    let trees: Vec<ParseTree> = (0..n).map(|_| random_tree(rng, 12, 6)).collect();
    let ptb: Vec<String> = trees.iter().map(|t| t.to_ptb()).collect();
    std::fs::write(dir.join("trees.mrg"), ptb.join("\n") + "\n").unwrap();
    let deps: Vec<String> = trees.iter().map(synthetic_deps).collect();
    std::fs::write(dir.join("deps.sd"), deps.join("\n\n") + "\n").unwrap();
}
