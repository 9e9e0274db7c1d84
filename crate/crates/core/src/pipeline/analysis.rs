use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::ops::Range;

use super::report::{
    AnalysisReport, ArgRow, ArgSection, ArgTable, CorpusSummary, Example, PathRow, PathSection,
    PathTable, SimilarityCell,
};
use super::{read_text, CorpusKind, CorpusManifest, PipelineError, Result};
use crate::depargs::{collect_arg_records, parse_deps, DepGraph, RelationConfig};
use crate::pathex::{extract_paths, PathEncoder, PathTarget};
use crate::stats::{cosine, Counter, FreqDist, PathVector, StatsError};
use crate::treebank::{
    find_target_occurrences_in_doc, parse_ptb, InflectionTable, ParseTree, VerbOccurrence,
    DEFAULT_TARGET_VERBS,
};

/// A parsed sentence with its aligned dependency graph, when one was loaded.
#[derive(Debug, Clone)]
pub struct Sentence {
    pub doc_id: String,
    pub tree: ParseTree,
    pub graph: Option<DepGraph>,
}

#[derive(Debug, Clone)]
pub struct LoadedCorpus {
    pub label: String,
    pub kind: CorpusKind,
    pub sentences: Vec<Sentence>,
}

#[derive(Debug, Clone)]
pub struct AnalysisConfig {
    pub verbs: Vec<String>,
    pub inflections: InflectionTable,
    pub encoder: PathEncoder,
    pub path_target: PathTarget,
    pub top_k: usize,
    pub relations: RelationConfig,
    /// Overrides the manifest's pairs when set.
    pub pairs: Option<Vec<(String, String)>>,
    pub workers: usize,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            verbs: DEFAULT_TARGET_VERBS.iter().map(|v| v.to_string()).collect(),
            inflections: InflectionTable::english_defaults(),
            encoder: PathEncoder::default(),
            path_target: PathTarget::Preterminal,
            top_k: 3,
            relations: RelationConfig::default(),
            pairs: None,
            workers: 1,
        }
    }
}

impl AnalysisConfig {
    fn check(&self) -> Result<()> {
        if self.verbs.is_empty() {
            return Err(PipelineError::Config("no target verbs given".into()));
        }
        if self.top_k == 0 {
            return Err(PipelineError::Config("top-k must be at least 1".into()));
        }
        Ok(())
    }

    fn target_set(&self) -> BTreeSet<String> {
        self.verbs.iter().map(|v| v.to_lowercase()).collect()
    }
}

/// Reads trees, sentence ids and (when `with_deps`) dependency graphs.
///
/// Fails if the numbers of trees and graphs differ.
pub fn load_corpora(manifest: &CorpusManifest, with_deps: bool) -> Result<Vec<LoadedCorpus>> {
    manifest.corpora.iter().map(|entry| {
        let trees_path = entry.trees.as_ref().ok_or_else(|| {
            PipelineError::Config(format!("corpus `{}` has no trees file", entry.label))
        })?;
        let mut trees = parse_ptb(&read_text(trees_path)?).map_err(|source| PipelineError::Trees {
            corpus: entry.label.clone(),
            path: trees_path.clone(),
            source,
        })?;
        let mut doc_ids = vec![String::new(); trees.len()];
        if let Some(ids_path) = &entry.ids {
            let text = read_text(ids_path)?;
            let bad = |message: String| PipelineError::BadInput { path: ids_path.clone(), message };
            let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
            if lines.len() != trees.len() {
                return Err(bad(format!("{} ids for {} trees", lines.len(), trees.len())));
            }
            let mut seen = HashSet::new();
            for ((tree, doc_id), line) in trees.iter_mut().zip(&mut doc_ids).zip(lines) {
                let (doc, sid) = match line.split_once('\t') {
                    Some((doc, sid)) => (doc.trim(), sid.trim()),
                    None => ("", line.trim()),
                };
                if !seen.insert(sid.to_string()) {
                    return Err(bad(format!("duplicate sentence id `{sid}`")));
                }
                tree.sentence_id = sid.to_string();
                *doc_id = doc.to_string();
            }
        }
        let mut graphs: Vec<Option<DepGraph>> = vec![None; trees.len()];
        if with_deps {
            let deps_path = entry.deps.as_ref().ok_or_else(|| {
                PipelineError::Config(format!("corpus `{}` has no dependency file", entry.label))
            })?;
            let parsed = parse_deps(&read_text(deps_path)?, entry.deps_format).map_err(|source| {
                PipelineError::Deps { corpus: entry.label.clone(), path: deps_path.clone(), source }
            })?;
            if parsed.len() != trees.len() {
                return Err(PipelineError::SentenceAlignmentMismatch {
                    corpus: entry.label.clone(),
                    message: format!("{} trees but {} dependency graphs", trees.len(), parsed.len()),
                });
            }
            for ((slot, mut graph), tree) in graphs.iter_mut().zip(parsed).zip(&trees) {
                graph.sentence_id = tree.sentence_id.clone();
                *slot = Some(graph);
            }
        }
        let sentences = trees
            .into_iter()
            .zip(doc_ids)
            .zip(graphs)
            .map(|((tree, doc_id), graph)| Sentence { doc_id, tree, graph })
            .collect();
        Ok(LoadedCorpus { label: entry.label.clone(), kind: entry.kind, sentences })
    }).collect()
}

/// Runs `work` over contiguous chunks of `0..n`, returning results in chunk order.
fn chunked<T: Send>(n: usize, workers: usize, work: impl Fn(Range<usize>) -> T + Sync) -> Vec<T> {
    let workers = workers.clamp(1, n.max(1));
    if workers == 1 {
        return vec![work(0..n)];
    }
    let size = n.div_ceil(workers);
    let work = &work;
    std::thread::scope(|s| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let range = (w * size).min(n)..((w + 1) * size).min(n);
                s.spawn(move || work(range))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
    })
}

// (sentence position, occurrence, item) orders examples by first encounter
type Position = (usize, usize, usize);

#[derive(Default)]
struct Examples(BTreeMap<(String, String), (Position, Example)>);

impl Examples {
    fn offer(&mut self, verb: &str, key: &str, pos: Position, example: impl FnOnce() -> Example) {
        let slot = (verb.to_string(), key.to_string());
        match self.0.get(&slot) {
            Some((existing, _)) if *existing <= pos => {}
            _ => {
                self.0.insert(slot, (pos, example()));
            }
        }
    }

    fn merge(&mut self, other: Examples) {
        for ((verb, key), (pos, example)) in other.0 {
            self.offer(&verb, &key, pos, || example);
        }
    }

    fn get(&self, verb: &str, key: &str) -> Example {
        self.0
            .get(&(verb.to_string(), key.to_string()))
            .map(|(_, e)| e.clone())
            .expect("every counted key has an example")
    }
}

fn merge_counters<K>(into: &mut BTreeMap<String, Counter<K>>, from: BTreeMap<String, Counter<K>>) {
    for (verb, counter) in from {
        into.entry(verb).or_default().merge_from(&counter);
    }
}

fn occurrences_in(
    sentence: &Sentence,
    targets: &BTreeSet<String>,
    inflections: &InflectionTable,
) -> Vec<VerbOccurrence> {
    find_target_occurrences_in_doc(&sentence.tree, &sentence.doc_id, targets, inflections)
}

#[derive(Default)]
struct PathCounts {
    occurrences: BTreeMap<String, u64>,
    vectors: BTreeMap<String, PathVector>,
    examples: Examples,
}

impl PathCounts {
    fn merge(&mut self, other: PathCounts) {
        for (verb, n) in other.occurrences {
            *self.occurrences.entry(verb).or_default() += n;
        }
        merge_counters(&mut self.vectors, other.vectors);
        self.examples.merge(other.examples);
    }
}

fn count_paths(corpus: &LoadedCorpus, config: &AnalysisConfig) -> PathCounts {
    let targets = config.target_set();
    let parts = chunked(corpus.sentences.len(), config.workers, |range| {
        let mut counts = PathCounts::default();
        for pos in range {
            let sentence = &corpus.sentences[pos];
            let tree = &sentence.tree;
            for (o, occ) in occurrences_in(sentence, &targets, &config.inflections).iter().enumerate() {
                *counts.occurrences.entry(occ.target_lemma.clone()).or_default() += 1;
                let paths = extract_paths(tree, occ, config.path_target)
                    .expect("occurrence was found in this tree");
                let vector = counts.vectors.entry(occ.target_lemma.clone()).or_default();
                for (p, path) in paths.iter().enumerate() {
                    let key = config.encoder.encode(path);
                    vector.add(&key);
                    counts.examples.offer(&occ.target_lemma, &key, (pos, o, p), || {
                        let target = match path.end_token_index {
                            Some(i) => tree.tokens()[i - 1].to_string(),
                            None => path.steps.last().map(|s| s.label.clone()).unwrap_or_default(),
                        };
                        Example {
                            sentence_id: tree.sentence_id.clone(),
                            doc_id: sentence.doc_id.clone(),
                            text: tree.sentence_text(),
                            verb: occ.surface_form.clone(),
                            target,
                        }
                    });
                }
            }
        }
        counts
    });
    let mut total = PathCounts::default();
    for part in parts {
        total.merge(part);
    }
    total
}

fn resolve_pairs(
    corpora: &[LoadedCorpus],
    config: &AnalysisConfig,
    manifest_pairs: Vec<(String, String)>,
) -> Result<Vec<(String, String)>> {
    let pairs = config.pairs.clone().unwrap_or(manifest_pairs);
    for (a, b) in &pairs {
        for label in [a, b] {
            if !corpora.iter().any(|c| &c.label == label) {
                return Err(PipelineError::Config(format!("pair refers to unknown corpus `{label}`")));
            }
        }
    }
    Ok(pairs)
}

fn cells<K>(
    verbs: &[String],
    pairs: &[(String, String)],
    by_corpus: &BTreeMap<&str, &BTreeMap<String, Counter<K>>>,
) -> Vec<SimilarityCell> {
    let empty = Counter::new();
    let mut out = Vec::new();
    for verb in verbs {
        for (a, b) in pairs {
            let vec_of = |label: &str| by_corpus[label].get(verb).unwrap_or(&empty);
            let score = match cosine(vec_of(a), vec_of(b)) {
                Ok(s) => Some(s),
                Err(StatsError::ZeroVector) => None,
                Err(e) => unreachable!("cosine: {e}"),
            };
            out.push(SimilarityCell {
                verb: verb.clone(),
                corpus_a: a.clone(),
                corpus_b: b.clone(),
                score,
            });
        }
    }
    out
}

fn verb_list(config: &AnalysisConfig) -> Vec<String> {
    let mut seen = HashSet::new();
    config.verbs.iter().map(|v| v.to_lowercase()).filter(|v| seen.insert(v.clone())).collect()
}

/// Per-verb path tables for every corpus and path cosines for every pair.
pub fn run_path_analysis(
    corpora: &[LoadedCorpus],
    config: &AnalysisConfig,
    pairs: &[(String, String)],
) -> Result<PathSection> {
    config.check()?;
    let verbs = verb_list(config);
    let pairs = resolve_pairs(corpora, config, pairs.to_vec())?;
    let counts: Vec<PathCounts> = corpora.iter().map(|c| count_paths(c, config)).collect();
    let mut tables = Vec::new();
    for verb in &verbs {
        for (corpus, count) in corpora.iter().zip(&counts) {
            let vector = count.vectors.get(verb);
            let rows = match vector.map(|v| v.top_k(config.top_k)) {
                Some(Ok(top)) => top
                    .into_iter()
                    .enumerate()
                    .map(|(i, e)| PathRow {
                        rank: i + 1,
                        example: count.examples.get(verb, &e.key),
                        path: e.key,
                        count: e.count,
                        percent: e.percent,
                    })
                    .collect(),
                _ => Vec::new(),
            };
            tables.push(PathTable {
                verb: verb.clone(),
                corpus: corpus.label.clone(),
                occurrences: count.occurrences.get(verb).copied().unwrap_or(0),
                total_paths: vector.map_or(0, |v| v.total()),
                distinct_paths: vector.map_or(0, |v| v.len()),
                rows,
            });
        }
    }
    let by_corpus = corpora.iter().zip(&counts).map(|(c, n)| (c.label.as_str(), &n.vectors)).collect();
    Ok(PathSection {
        encoding: config.encoder.encoding,
        path_target: config.path_target,
        cells: cells(&verbs, &pairs, &by_corpus),
        tables,
    })
}

#[derive(Default)]
struct ArgCounts {
    occurrences: BTreeMap<String, u64>,
    subjects: BTreeMap<String, FreqDist>,
    objects: BTreeMap<String, FreqDist>,
    subject_examples: Examples,
    object_examples: Examples,
}

impl ArgCounts {
    fn merge(&mut self, other: ArgCounts) {
        for (verb, n) in other.occurrences {
            *self.occurrences.entry(verb).or_default() += n;
        }
        merge_counters(&mut self.subjects, other.subjects);
        merge_counters(&mut self.objects, other.objects);
        self.subject_examples.merge(other.subject_examples);
        self.object_examples.merge(other.object_examples);
    }
}

fn count_args(corpus: &LoadedCorpus, config: &AnalysisConfig) -> Result<ArgCounts> {
    let targets = config.target_set();
    let parts = chunked(corpus.sentences.len(), config.workers, |range| -> Result<ArgCounts> {
        let mut counts = ArgCounts::default();
        for pos in range {
            let sentence = &corpus.sentences[pos];
            let graph = sentence.graph.as_ref().ok_or_else(|| {
                PipelineError::Config(format!("corpus `{}` was loaded without dependencies", corpus.label))
            })?;
            let occs = occurrences_in(sentence, &targets, &config.inflections);
            for occ in &occs {
                if let Some(tok) = graph.token(occ.token_index) {
                    if tok.form.to_lowercase() != occ.surface_form.to_lowercase() {
                        return Err(PipelineError::SentenceAlignmentMismatch {
                            corpus: corpus.label.clone(),
                            message: format!(
                                "sentence `{}` token {} is `{}` in the tree but `{}` in the dependencies",
                                occ.sentence_id, occ.token_index, occ.surface_form, tok.form
                            ),
                        });
                    }
                }
            }
            let records = collect_arg_records(std::slice::from_ref(graph), &occs, &config.relations)
                .expect("graph carries the tree's sentence id");
            let example = |occ: &VerbOccurrence| Example {
                sentence_id: sentence.tree.sentence_id.clone(),
                doc_id: sentence.doc_id.clone(),
                text: sentence.tree.sentence_text(),
                verb: occ.surface_form.clone(),
                target: String::new(),
            };
            for (o, rec) in records.iter().enumerate() {
                let verb = &rec.occurrence.target_lemma;
                *counts.occurrences.entry(verb.clone()).or_default() += 1;
                if let Some(tok) = &rec.subject {
                    let key = config.relations.key(tok);
                    counts.subjects.entry(verb.clone()).or_default().add(&key);
                    counts.subject_examples.offer(verb, &key, (pos, o, 0), || Example {
                        target: tok.form.clone(),
                        ..example(&rec.occurrence)
                    });
                }
                if let Some(tok) = &rec.object {
                    let key = config.relations.key(tok);
                    counts.objects.entry(verb.clone()).or_default().add(&key);
                    counts.object_examples.offer(verb, &key, (pos, o, 0), || Example {
                        target: tok.form.clone(),
                        ..example(&rec.occurrence)
                    });
                }
            }
        }
        Ok(counts)
    });
    let mut total = ArgCounts::default();
    for part in parts {
        total.merge(part?);
    }
    Ok(total)
}

fn arg_table(
    verb: &str,
    corpus: &str,
    occurrences: u64,
    dist: Option<&FreqDist>,
    examples: &Examples,
    k: usize,
) -> ArgTable {
    let rows = match dist.map(|d| d.top_k(k)) {
        Some(Ok(top)) => top
            .into_iter()
            .enumerate()
            .map(|(i, e)| ArgRow {
                rank: i + 1,
                example: examples.get(verb, &e.key),
                percent_of_occurrences: crate::stats::Percent::of(e.count, occurrences),
                form: e.key,
                count: e.count,
                percent: e.percent,
            })
            .collect(),
        _ => Vec::new(),
    };
    ArgTable {
        verb: verb.to_string(),
        corpus: corpus.to_string(),
        occurrences,
        extracted: dist.map_or(0, |d| d.total()),
        rows,
    }
}

/// Subject and object tables for every corpus and their cosines for every pair.
pub fn run_arg_analysis(
    corpora: &[LoadedCorpus],
    config: &AnalysisConfig,
    pairs: &[(String, String)],
) -> Result<ArgSection> {
    config.check()?;
    let verbs = verb_list(config);
    let pairs = resolve_pairs(corpora, config, pairs.to_vec())?;
    let counts = corpora.iter().map(|c| count_args(c, config)).collect::<Result<Vec<_>>>()?;
    let mut subjects = Vec::new();
    let mut objects = Vec::new();
    for verb in &verbs {
        for (corpus, count) in corpora.iter().zip(&counts) {
            let occurrences = count.occurrences.get(verb).copied().unwrap_or(0);
            subjects.push(arg_table(
                verb,
                &corpus.label,
                occurrences,
                count.subjects.get(verb),
                &count.subject_examples,
                config.top_k,
            ));
            objects.push(arg_table(
                verb,
                &corpus.label,
                occurrences,
                count.objects.get(verb),
                &count.object_examples,
                config.top_k,
            ));
        }
    }
    let subj = corpora.iter().zip(&counts).map(|(c, n)| (c.label.as_str(), &n.subjects)).collect();
    let obj = corpora.iter().zip(&counts).map(|(c, n)| (c.label.as_str(), &n.objects)).collect();
    Ok(ArgSection {
        subject_cells: cells(&verbs, &pairs, &subj),
        object_cells: cells(&verbs, &pairs, &obj),
        subjects,
        objects,
    })
}

/// Loads the manifest's corpora and runs the requested analyses.
pub fn analyze(
    manifest: &CorpusManifest,
    config: &AnalysisConfig,
    paths: bool,
    args: bool,
) -> Result<AnalysisReport> {
    config.check()?;
    let corpora = load_corpora(manifest, args)?;
    let pairs = resolve_pairs(&corpora, config, manifest.corpus_pairs())?;
    let verbs = verb_list(config);
    let targets = config.target_set();
    let summaries = corpora
        .iter()
        .map(|c| {
            let mut occurrences: BTreeMap<String, u64> = verbs.iter().map(|v| (v.clone(), 0)).collect();
            for s in &c.sentences {
                for occ in occurrences_in(s, &targets, &config.inflections) {
                    *occurrences.entry(occ.target_lemma).or_default() += 1;
                }
            }
            CorpusSummary {
                label: c.label.clone(),
                kind: c.kind,
                sentences: c.sentences.len(),
                occurrences,
            }
        })
        .collect();
    Ok(AnalysisReport {
        verbs: verbs.clone(),
        top_k: config.top_k,
        pairs: pairs.clone(),
        corpora: summaries,
        paths: if paths { Some(run_path_analysis(&corpora, config, &pairs)?) } else { None },
        args: if args { Some(run_arg_analysis(&corpora, config, &pairs)?) } else { None },
    })
}
