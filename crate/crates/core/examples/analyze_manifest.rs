// Full analysis of three small corpora described by a manifest.

use std::path::Path;

use mailsyntax::pipeline::{analyze, render, AnalysisConfig, CorpusManifest, OutputFormat, RenderOptions};

pub fn run_example() -> anyhow::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/corpora/manifest.toml");
    let manifest = CorpusManifest::load(&path)?;
    let config = AnalysisConfig {
        verbs: vec!["update".into(), "click".into()],
        workers: 2,
        ..Default::default()
    };
    let report = analyze(&manifest, &config, true, true)?;
    for (name, contents) in render(&report, OutputFormat::Markdown, RenderOptions::default()) {
        println!("==> {name} <==\n{contents}");
    }
    Ok(())
}

fn main() -> anyhow::Result<()> {
    run_example()
}
