mod common;

use std::collections::BTreeSet;

use mailsyntax::treebank::{
    find_target_occurrences, parse_ptb, print_ptb, InflectionTable, DEFAULT_TARGET_VERBS,
};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn targets(words: &[&str]) -> BTreeSet<String> {
    words.iter().map(|s| s.to_string()).collect()
}

#[test]
fn update_fixture_has_verb_preterminal() {
    let trees = parse_ptb(&common::fixture("corpora/nazario/trees.mrg")).unwrap();
    let tree = &trees[0];
    assert_eq!(tree.sentence_text(), "To update your eBay records click here .");
    let pts = tree.preterminals();
    // the fixture tokenization keeps the final period as its own token
    assert_eq!(pts.len(), 8);
    assert_eq!(pts.len(), tree.token_count);
    let update = pts.iter().find(|(n, _)| n.preterminal_token().unwrap().0 == "update").unwrap();
    assert_eq!(update.0.label(), "VB");
    assert_eq!(update.1, 2);
}

#[test]
fn update_fixture_targets() {
    let tree = &parse_ptb(&common::fixture("corpora/nazario/trees.mrg")).unwrap()[0];
    let found =
        find_target_occurrences(tree, &targets(&["update", "click"]), &InflectionTable::english_defaults());
    let got: Vec<_> = found.iter().map(|o| (o.surface_form.as_str(), o.token_index, o.target_lemma.as_str())).collect();
    assert_eq!(got, vec![("update", 2, "update"), ("click", 6, "click")]);
}

#[test]
fn committed_inflection_table_matches_defaults() {
    let table = InflectionTable::parse(&common::fixture("inflections.txt")).unwrap();
    assert_eq!(table, InflectionTable::english_defaults());
    for verb in DEFAULT_TARGET_VERBS {
        assert!(table.forms(verb).unwrap().contains(verb));
    }
    let tree = &parse_ptb("(S (NP (PRP We)) (VP (VBD updated) (NP (DT the) (NNS records))) (. .))").unwrap()[0];
    let found = find_target_occurrences(tree, &targets(&DEFAULT_TARGET_VERBS), &table);
    assert_eq!(found.len(), 1);
    assert_eq!(found[0].target_lemma, "update");
}

#[test]
fn all_fixture_trees_parse_and_round_trip() {
    for corpus in ["nazario", "apwg", "legit"] {
        let text = common::fixture(&format!("corpora/{corpus}/trees.mrg"));
        let trees = parse_ptb(&text).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(trees.len(), lines.len());
        for (tree, line) in trees.iter().zip(lines) {
            assert_eq!(print_ptb(tree), line);
        }
    }
}

#[test]
fn random_trees_round_trip() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..200 {
        let tree = common::random_tree(&mut rng, 12, 6);
        let text = print_ptb(&tree);
        let back = parse_ptb(&text).unwrap();
        assert_eq!(back.len(), 1);
        assert_eq!(back[0], tree);
        assert_eq!(print_ptb(&back[0]), text);
    }
}

#[test]
fn indices_are_contiguous_and_gate_holds() {
    let mut rng = StdRng::seed_from_u64(11);
    let table = InflectionTable::english_defaults();
    let all = targets(&DEFAULT_TARGET_VERBS);
    for _ in 0..200 {
        let tree = common::random_tree(&mut rng, 12, 6);
        let idx: Vec<usize> = tree.preterminals().iter().map(|(_, i)| *i).collect();
        assert_eq!(idx, (1..=tree.token_count).collect::<Vec<_>>());
        for occ in find_target_occurrences(&tree, &all, &table) {
            let (node, _) = tree.preterminals()[occ.token_index - 1];
            assert!(node.label().starts_with("VB"));
            assert!(table.forms(&occ.target_lemma).unwrap().contains(&occ.surface_form.to_lowercase()));
        }
    }
}
