// Removes duplicate bodies and flags likely non-English ones.

use std::path::Path;

use mailsyntax::pipeline::{dedup, language_filter, load_bodies, CorpusDoc, LanguageFilter};

pub fn run_example() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpora/nazario/bodies.jsonl");
    let mut docs = load_bodies(&path, "phish-nazario")?;
    docs.push(CorpusDoc {
        doc_id: "extra".into(),
        body: "Ваш аккаунт заблокирован, подтвердите данные".into(),
        label: "phish-nazario".into(),
    });
    let read = docs.len();
    let unique = dedup(docs);
    println!("read {read}, unique {}", unique.len());

    let (kept, flagged) = language_filter(unique, &LanguageFilter::default());
    for doc in &flagged {
        println!("flagged {}", doc.doc_id);
    }
    println!("kept {}", kept.len());
    anyhow::ensure!(kept.len() == 5 && flagged.len() == 1);
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
