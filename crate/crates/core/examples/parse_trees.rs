// Reads bracketed parse trees and finds target verb occurrences.

use std::collections::BTreeSet;
use std::path::Path;

use mailsyntax::treebank::{find_target_occurrences, parse_ptb, InflectionTable, DEFAULT_TARGET_VERBS};

pub fn run_example() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpora/nazario/trees.mrg");
    let trees = parse_ptb(&std::fs::read_to_string(path)?)?;
    let verbs: BTreeSet<String> = DEFAULT_TARGET_VERBS.iter().map(|v| v.to_string()).collect();
    let table = InflectionTable::english_defaults();

    for tree in &trees {
        println!("[{}] {}", tree.sentence_id, tree.sentence_text());
        for occ in find_target_occurrences(tree, &verbs, &table) {
            println!("    {} ({}) at token {}", occ.surface_form, occ.target_lemma, occ.token_index);
        }
    }
    anyhow::ensure!(trees.len() == 5);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
