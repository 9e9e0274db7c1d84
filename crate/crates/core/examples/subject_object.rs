// Subject and object of each verb in a dependency parse.

use std::path::Path;

use mailsyntax::depargs::{object_of, parse_deps, subject_of, DepFormat, RelationConfig};

pub fn run_example() -> anyhow::Result<()> {
    let fixtures = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let config = RelationConfig::default();

    for (file, format) in [("confirm.sd", DepFormat::SdText), ("confirm.conll", DepFormat::ConllX)] {
        println!("{file}");
        let graph = parse_deps(&std::fs::read_to_string(fixtures.join(file))?, format)?.remove(0);
        for token in &graph.tokens {
            if !token.form.starts_with(|c: char| c.is_alphabetic()) {
                continue;
            }
            let subj = subject_of(&graph, token.index, &config.subject)?;
            let obj = object_of(&graph, token.index, &config.object)?;
            if subj.is_some() || obj.is_some() {
                let show = |t: Option<&mailsyntax::depargs::DepToken>| t.map_or("-", |t| t.form.as_str()).to_string();
                println!("    {:<10} subject {:<6} object {}", token.form, show(subj), show(obj));
            }
        }
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
