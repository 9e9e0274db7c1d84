use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{CorpusKind, PipelineError, Result};
use crate::pathex::{prps_compat, PathEncoding, PathTarget};
use crate::stats::{format_similarity, Percent};

/// Sentence quoted for a table row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Example {
    pub sentence_id: String,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub doc_id: String,
    /// Tokens of the sentence joined by spaces.
    pub text: String,
    /// The verb as written.
    pub verb: String,
    /// Path end token (or node label), or the argument as written.
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimilarityCell {
    pub verb: String,
    pub corpus_a: String,
    pub corpus_b: String,
    /// `None` when either side never saw the verb.
    pub score: Option<f64>,
}

impl SimilarityCell {
    pub fn display(&self) -> String {
        self.score.map_or_else(|| "n/a".to_string(), format_similarity)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathRow {
    pub rank: usize,
    pub path: String,
    pub count: u64,
    pub percent: Percent,
    pub example: Example,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PathTable {
    pub verb: String,
    pub corpus: String,
    pub occurrences: u64,
    pub total_paths: u64,
    pub distinct_paths: usize,
    pub rows: Vec<PathRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PathSection {
    #[serde(serialize_with = "as_display")]
    pub encoding: PathEncoding,
    pub path_target: PathTarget,
    pub tables: Vec<PathTable>,
    pub cells: Vec<SimilarityCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgRow {
    pub rank: usize,
    pub form: String,
    pub count: u64,
    /// Share of occurrences that had this role filled.
    pub percent: Percent,
    /// Share of all occurrences of the verb.
    pub percent_of_occurrences: Percent,
    pub example: Example,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArgTable {
    pub verb: String,
    pub corpus: String,
    pub occurrences: u64,
    /// Occurrences with an extracted argument.
    pub extracted: u64,
    pub rows: Vec<ArgRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArgSection {
    pub subjects: Vec<ArgTable>,
    pub objects: Vec<ArgTable>,
    pub subject_cells: Vec<SimilarityCell>,
    pub object_cells: Vec<SimilarityCell>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub label: String,
    pub kind: CorpusKind,
    pub sentences: usize,
    pub occurrences: BTreeMap<String, u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub verbs: Vec<String>,
    pub top_k: usize,
    pub pairs: Vec<(String, String)>,
    pub corpora: Vec<CorpusSummary>,
    pub paths: Option<PathSection>,
    pub args: Option<ArgSection>,
}

fn as_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Markdown,
    Tsv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "md" | "markdown" => Ok(OutputFormat::Markdown),
            "tsv" => Ok(OutputFormat::Tsv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}` (expected md|tsv|json)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RenderOptions {
    /// Print `PRP$` as `PRPS` in path strings.
    pub prps_compat: bool,
}

impl AnalysisReport {
    fn with_options(&self, options: RenderOptions) -> AnalysisReport {
        let mut report = self.clone();
        if options.prps_compat {
            if let Some(paths) = &mut report.paths {
                for row in paths.tables.iter_mut().flat_map(|t| t.rows.iter_mut()) {
                    row.path = prps_compat(&row.path);
                }
            }
        }
        report
    }

    fn pair_names(&self) -> Vec<String> {
        self.pairs.iter().map(|(a, b)| format!("{a} vs {b}")).collect()
    }
}

/// Renders a report into `(file name, contents)` pairs.
pub fn render(report: &AnalysisReport, format: OutputFormat, options: RenderOptions) -> Vec<(String, String)> {
    let report = report.with_options(options);
    match format {
        OutputFormat::Markdown => vec![("report.md".into(), markdown(&report))],
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
            text.push('\n');
            vec![("report.json".into(), text)]
        }
        OutputFormat::Tsv => tsv(&report),
    }
}

/// Renders a report into `out_dir`, creating it if needed.
pub fn render_files(
    report: &AnalysisReport,
    format: OutputFormat,
    options: RenderOptions,
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    let err = |path: &Path| {
        let path = path.to_path_buf();
        move |source| PipelineError::UnwritableOutput { path, source }
    };
    std::fs::create_dir_all(out_dir).map_err(err(out_dir))?;
    let mut written = Vec::new();
    for (name, contents) in render(report, format, options) {
        let path = out_dir.join(name);
        std::fs::write(&path, contents).map_err(err(&path))?;
        written.push(path);
    }
    Ok(written)
}

fn md_cell(s: &str) -> String {
    s.replace('|', "\\|")
}

fn md_table(out: &mut String, header: &[String], rows: &[Vec<String>]) {
    let line = |cells: &[String]| {
        format!("| {} |\n", cells.iter().map(|c| md_cell(c)).collect::<Vec<_>>().join(" | "))
    };
    out.push_str(&line(header));
    out.push_str(&format!("|{}\n", "---|".repeat(header.len())));
    for row in rows {
        out.push_str(&line(row));
    }
    out.push('\n');
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn cell_row<'a>(cells: impl Iterator<Item = &'a SimilarityCell>, verb: &str) -> Vec<String> {
    cells.filter(|c| c.verb == verb).map(SimilarityCell::display).collect()
}

fn markdown(report: &AnalysisReport) -> String {
    let mut out = String::from("# Syntactic similarity report\n\n");
    let _ = writeln!(out, "Verbs: {}. Top-k: {}.\n", report.verbs.join(", "), report.top_k);

    out.push_str("## Corpora\n\n");
    let mut header = strings(&["Corpus", "Kind", "Sentences"]);
    header.extend(report.verbs.iter().cloned());
    let rows: Vec<Vec<String>> = report
        .corpora
        .iter()
        .map(|c| {
            let kind = match c.kind {
                CorpusKind::Phishing => "phishing",
                CorpusKind::Legitimate => "legitimate",
            };
            let mut row = vec![c.label.clone(), kind.to_string(), c.sentences.to_string()];
            row.extend(report.verbs.iter().map(|v| c.occurrences.get(v).copied().unwrap_or(0).to_string()));
            row
        })
        .collect();
    md_table(&mut out, &header, &rows);

    if let Some(paths) = &report.paths {
        let _ = writeln!(
            out,
            "## Top parse tree paths\n\nEncoding: {}. Path target: {}.\n",
            paths.encoding,
            match paths.path_target {
                PathTarget::Preterminal => "preterminal",
                PathTarget::All => "all",
            }
        );
        for verb in &report.verbs {
            let _ = writeln!(out, "### {verb}\n");
            let tables: Vec<&PathTable> = paths.tables.iter().filter(|t| &t.verb == verb).collect();
            let mut rows = Vec::new();
            for rank in 1..=report.top_k {
                for table in &tables {
                    if let Some(row) = table.rows.get(rank - 1) {
                        rows.push(vec![
                            rank.to_string(),
                            table.corpus.clone(),
                            format!(
                                "{} [{} → {}] : {}",
                                row.path, row.example.verb, row.example.target, row.example.text
                            ),
                        ]);
                    }
                }
            }
            for table in tables.iter().filter(|t| t.rows.is_empty()) {
                rows.push(vec!["-".into(), table.corpus.clone(), "no occurrences".into()]);
            }
            md_table(&mut out, &strings(&["Rank", "Corpus", "Parse tree path & example"]), &rows);
        }

        out.push_str("## Parse tree path cosine similarity\n\n");
        let mut header = vec!["Verb".to_string()];
        header.extend(report.pair_names());
        let rows: Vec<Vec<String>> = report
            .verbs
            .iter()
            .map(|v| {
                let mut row = vec![v.clone()];
                row.extend(cell_row(paths.cells.iter(), v));
                row
            })
            .collect();
        md_table(&mut out, &header, &rows);
    }

    if let Some(args) = &report.args {
        for (title, role, tables) in [
            ("Most frequent subjects", "Subject", &args.subjects),
            ("Most frequent objects", "Object", &args.objects),
        ] {
            let _ = writeln!(out, "## {title}\n");
            let mut rows = Vec::new();
            for table in tables {
                if table.rows.is_empty() {
                    let note = if table.occurrences == 0 { "no occurrences" } else { "none extracted" };
                    rows.push(vec![table.verb.clone(), table.corpus.clone(), "-".into(), note.into()]);
                }
                for row in &table.rows {
                    rows.push(vec![
                        table.verb.clone(),
                        table.corpus.clone(),
                        row.rank.to_string(),
                        format!("{} ({}%) *{}*", row.form, row.percent, row.example.text),
                    ]);
                }
            }
            let header = vec![
                "Verb".to_string(),
                "Corpus".to_string(),
                "Rank".to_string(),
                format!("{role} (percentage) & example"),
            ];
            md_table(&mut out, &header, &rows);
        }

        out.push_str("## Subject and object cosine similarity\n\n");
        let mut header = vec!["Verb".to_string()];
        header.extend(report.pair_names().iter().map(|p| format!("Subject: {p}")));
        header.extend(report.pair_names().iter().map(|p| format!("Object: {p}")));
        let rows: Vec<Vec<String>> = report
            .verbs
            .iter()
            .map(|v| {
                let mut row = vec![v.clone()];
                row.extend(cell_row(args.subject_cells.iter(), v));
                row.extend(cell_row(args.object_cells.iter(), v));
                row
            })
            .collect();
        md_table(&mut out, &header, &rows);
    }
    out
}

fn tsv_field(s: &str) -> String {
    s.replace(['\t', '\n', '\r'], " ")
}

fn tsv_file(header: &[&str], rows: impl Iterator<Item = Vec<String>>) -> String {
    let mut out = header.join("\t");
    out.push('\n');
    for row in rows {
        out.push_str(&row.iter().map(|f| tsv_field(f)).collect::<Vec<_>>().join("\t"));
        out.push('\n');
    }
    out
}

fn tsv(report: &AnalysisReport) -> Vec<(String, String)> {
    let mut files = Vec::new();
    if let Some(paths) = &report.paths {
        let rows = paths.tables.iter().flat_map(|t| {
            t.rows.iter().map(move |r| {
                vec![
                    t.verb.clone(),
                    t.corpus.clone(),
                    r.rank.to_string(),
                    r.path.clone(),
                    r.count.to_string(),
                    r.percent.to_string(),
                    r.example.sentence_id.clone(),
                    r.example.verb.clone(),
                    r.example.target.clone(),
                    r.example.text.clone(),
                ]
            })
        });
        files.push((
            "paths_top.tsv".to_string(),
            tsv_file(
                &["verb", "corpus", "rank", "path", "count", "percent", "sentence_id", "verb_form", "target", "example"],
                rows,
            ),
        ));
        let rows = paths
            .cells
            .iter()
            .map(|c| vec![c.verb.clone(), c.corpus_a.clone(), c.corpus_b.clone(), c.display()]);
        files.push((
            "paths_cosine.tsv".to_string(),
            tsv_file(&["verb", "corpus_a", "corpus_b", "cosine"], rows),
        ));
    }
    if let Some(args) = &report.args {
        for (name, tables) in [("subjects_top.tsv", &args.subjects), ("objects_top.tsv", &args.objects)] {
            let rows = tables.iter().flat_map(|t| {
                t.rows.iter().map(move |r| {
                    vec![
                        t.verb.clone(),
                        t.corpus.clone(),
                        r.rank.to_string(),
                        r.form.clone(),
                        r.count.to_string(),
                        r.percent.to_string(),
                        r.percent_of_occurrences.to_string(),
                        r.example.sentence_id.clone(),
                        r.example.text.clone(),
                    ]
                })
            });
            files.push((
                name.to_string(),
                tsv_file(
                    &["verb", "corpus", "rank", "form", "count", "percent", "percent_of_occurrences", "sentence_id", "example"],
                    rows,
                ),
            ));
        }
        let rows = [("subject", &args.subject_cells), ("object", &args.object_cells)]
            .into_iter()
            .flat_map(|(role, cells)| {
                cells.iter().map(move |c| {
                    vec![c.verb.clone(), role.to_string(), c.corpus_a.clone(), c.corpus_b.clone(), c.display()]
                })
            });
        files.push((
            "args_cosine.tsv".to_string(),
            tsv_file(&["verb", "role", "corpus_a", "corpus_b", "cosine"], rows),
        ));
    }
    files
}
