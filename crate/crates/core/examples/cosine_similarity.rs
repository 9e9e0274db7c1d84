// Sparse frequency vectors, top-k tables and cosine similarity.

use mailsyntax::stats::{format_similarity, FreqDist, StatsError};

pub fn run_example() -> anyhow::Result<()> {
    let phishing: FreqDist = ["you", "you", "you", "we", "you"].into_iter().collect();
    let legit: FreqDist = ["i", "we", "people", "you"].into_iter().collect();

    for (name, dist) in [("phishing", &phishing), ("legit", &legit)] {
        println!("{name}:");
        for entry in dist.top_k(3)? {
            println!("    {} {} ({}%)", entry.key, entry.count, entry.percent);
        }
    }
    println!("cosine {}", format_similarity(phishing.cosine(&legit)?));
    match phishing.cosine(&FreqDist::new()) {
        Err(StatsError::ZeroVector) => println!("cosine with an empty distribution: n/a"),
        other => anyhow::bail!("expected ZeroVector, got {other:?}"),
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
