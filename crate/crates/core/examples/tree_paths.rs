// Paths from a verb to every other token, in both encodings.

use mailsyntax::pathex::{extract_all_paths, prps_compat, PathEncoder, PathEncoding};
use mailsyntax::treebank::{find_target_occurrences, parse_ptb, InflectionTable};

pub fn run_example() -> anyhow::Result<()> {
    let text = "(ROOT (S (S (VP (TO To) (VP (VB update) (NP (PRP$ your) (NNP eBay) (NNS records))))) \
                (VP (VB click) (ADVP (RB here))) (. .)))";
    let tree = parse_ptb(text)?.remove(0);
    let verbs = ["update".to_string()].into_iter().collect();
    let occ = find_target_occurrences(&tree, &verbs, &InflectionTable::english_defaults()).remove(0);

    let full = PathEncoder::new(PathEncoding::Full);
    let recoded = PathEncoder::new(PathEncoding::Recoded);
    let ascii = PathEncoder::new(PathEncoding::Recoded).ascii(true);
    let tokens = tree.tokens();
    for path in extract_all_paths(&tree, &occ)? {
        let target = tokens[path.end_token_index.unwrap() - 1];
        println!(
            "{:<10} {:<28} {:<20} {}",
            target,
            prps_compat(&full.encode(&path)),
            recoded.encode(&path),
            ascii.encode(&path)
        );
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
