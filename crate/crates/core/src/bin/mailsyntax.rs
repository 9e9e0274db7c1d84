use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mailsyntax::pathex::{PathEncoder, PathEncoding, PathTarget};
use mailsyntax::pipeline::{
    analyze, dedup, language_filter, load_bodies, render, render_files, write_bodies, AnalysisConfig,
    CorpusManifest, LanguageFilter, OutputFormat, PipelineError, RenderOptions,
};
use mailsyntax::treebank::InflectionTable;
use mailsyntax::RelationConfig;

#[derive(Parser)]
#[command(name = "mailsyntax", version, about = "Compare email corpora by syntax")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Drop duplicate bodies (and optionally non-English ones)
    Dedup(DedupArgs),
    /// Top parse tree paths per verb and their cosine similarities
    Paths(AnalysisArgs),
    /// Top subjects and objects per verb and their cosine similarities
    Args(AnalysisArgs),
    /// Both path and argument analysis in one report
    Analyze(AnalysisArgs),
}

#[derive(Args)]
struct DedupArgs {
    #[arg(long, required_unless_present = "bodies", conflicts_with = "bodies")]
    manifest: Option<PathBuf>,
    /// A single JSONL file or directory of bodies instead of a manifest
    #[arg(long)]
    bodies: Option<PathBuf>,
    /// Directory for the `<label>.jsonl` outputs
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    filter_language: bool,
    /// Expected number of unique documents, reported next to the actual count
    #[arg(long)]
    reference_count: Option<usize>,
}

#[derive(Args)]
struct AnalysisArgs {
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated target verbs
    #[arg(long, value_delimiter = ',')]
    verbs: Option<Vec<String>>,
    /// Inflection table (`lemma: form form ...` per line)
    #[arg(long)]
    inflections: Option<PathBuf>,
    #[arg(long, default_value = "gj")]
    encoding: PathEncoding,
    #[arg(long, default_value = "preterminal")]
    path_target: PathTarget,
    #[arg(long, default_value_t = 3)]
    top_k: usize,
    #[arg(long, default_value = "md")]
    format: OutputFormat,
    /// Output directory; reports go to stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Print PRP$ as PRPS
    #[arg(long)]
    prps_compat: bool,
    /// ASCII arrows in path strings
    #[arg(long)]
    ascii: bool,
    /// Corpus pairs to compare, as `a:b,c:d`
    #[arg(long, value_delimiter = ',', value_parser = parse_pair)]
    pairs: Option<Vec<(String, String)>>,
    /// Count arguments by lemma where the parse provides one
    #[arg(long)]
    lemma_args: bool,
    #[arg(long)]
    no_passive_subjects: bool,
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    match s.split_once(':') {
        Some((a, b)) if !a.is_empty() && !b.is_empty() => Ok((a.to_string(), b.to_string())),
        _ => Err(format!("expected `a:b`, got `{s}`")),
    }
}

impl AnalysisArgs {
    fn config(&self) -> Result<AnalysisConfig, PipelineError> {
        let mut config = AnalysisConfig::default();
        if let Some(verbs) = &self.verbs {
            config.verbs = verbs.iter().map(|v| v.trim().to_string()).filter(|v| !v.is_empty()).collect();
        }
        if let Some(path) = &self.inflections {
            let text = std::fs::read_to_string(path)
                .map_err(|source| PipelineError::Io { path: path.clone(), source })?;
            config.inflections = InflectionTable::parse(&text)
                .map_err(|message| PipelineError::BadInput { path: path.clone(), message })?;
        }
        config.encoder = PathEncoder::new(self.encoding).ascii(self.ascii);
        config.path_target = self.path_target;
        config.top_k = self.top_k;
        config.workers = self.workers.max(1);
        config.pairs = self.pairs.clone();
        let mut relations = RelationConfig { use_lemma: self.lemma_args, ..RelationConfig::default() };
        if self.no_passive_subjects {
            relations = relations.without_passive_subjects();
        }
        config.relations = relations;
        Ok(config)
    }
}

fn run_analysis(args: &AnalysisArgs, paths: bool, arguments: bool) -> Result<(), PipelineError> {
    let manifest = CorpusManifest::load(&args.manifest)?;
    let report = analyze(&manifest, &args.config()?, paths, arguments)?;
    let options = RenderOptions { prps_compat: args.prps_compat };
    match &args.out {
        Some(dir) => {
            for path in render_files(&report, args.format, options, dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        None => {
            let files = render(&report, args.format, options);
            let many = files.len() > 1;
            let mut out = std::io::stdout().lock();
            for (name, contents) in files {
                if many {
                    let _ = writeln!(out, "==> {name} <==");
                }
                let _ = out.write_all(contents.as_bytes());
            }
        }
    }
    Ok(())
}

fn run_dedup(args: &DedupArgs) -> Result<(), PipelineError> {
    let inputs: Vec<(String, PathBuf)> = match (&args.manifest, &args.bodies) {
        (Some(path), _) => {
            let manifest = CorpusManifest::load(path)?;
            manifest
                .corpora
                .iter()
                .map(|c| {
                    c.bodies.clone().map(|b| (c.label.clone(), b)).ok_or_else(|| PipelineError::Manifest {
                        path: path.clone(),
                        message: format!("corpus `{}` has no bodies", c.label),
                    })
                })
                .collect::<Result<_, _>>()?
        }
        (None, Some(bodies)) => vec![(label_of(bodies), bodies.clone())],
        (None, None) => unreachable!("clap requires one input"),
    };
    let filter = LanguageFilter::default();
    let mut total = 0;
    for (label, path) in inputs {
        let docs = load_bodies(&path, &label)?;
        let read = docs.len();
        let unique = dedup(docs);
        let unique_count = unique.len();
        let (kept, flagged) =
            if args.filter_language { language_filter(unique, &filter) } else { (unique, Vec::new()) };
        println!(
            "{label}\tread {read}\tunique {unique_count}\tflagged {}\tkept {}",
            flagged.len(),
            kept.len()
        );
        total += kept.len();
        if let Some(dir) = &args.out {
            std::fs::create_dir_all(dir)
                .map_err(|source| PipelineError::UnwritableOutput { path: dir.clone(), source })?;
            write_bodies(&dir.join(format!("{label}.jsonl")), &kept)?;
        }
    }
    if let Some(expected) = args.reference_count {
        let diff = total as i64 - expected as i64;
        println!("total kept {total}, reference {expected}, difference {diff:+}");
    }
    Ok(())
}

fn label_of(path: &Path) -> String {
    path.file_stem().map_or_else(|| "bodies".to_string(), |s| s.to_string_lossy().into_owned())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match &cli.command {
        Command::Dedup(a) => run_dedup(a),
        Command::Paths(a) => run_analysis(a, true, false),
        Command::Args(a) => run_analysis(a, false, true),
        Command::Analyze(a) => run_analysis(a, true, true),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
