use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{read_text, PipelineError, Result};
use crate::depargs::DepFormat;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorpusKind {
    Phishing,
    Legitimate,
}

/// One labelled corpus. Paths are resolved against the manifest's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusEntry {
    pub label: String,
    pub kind: CorpusKind,
    pub bodies: Option<PathBuf>,
    pub trees: Option<PathBuf>,
    pub deps: Option<PathBuf>,
    pub deps_format: DepFormat,
    pub ids: Option<PathBuf>,
}

/// Corpora to analyse, in declaration order.
///
/// ```toml
/// pairs = [["phish-nazario", "legit"]]   # optional
///
/// [[corpus]]
/// label = "phish-nazario"
/// kind = "phishing"          # optional; inferred from the label
/// bodies = "nazario/bodies.jsonl"
/// trees = "nazario/trees.mrg"
/// deps = "nazario/deps.sd"
/// deps_format = "sd-text"    # or "conll-x"
/// ids = "nazario/ids.txt"    # optional
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CorpusManifest {
    pub corpora: Vec<CorpusEntry>,
    pub pairs: Option<Vec<(String, String)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawManifest {
    #[serde(default)]
    corpus: Vec<RawEntry>,
    pairs: Option<Vec<(String, String)>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawEntry {
    label: String,
    kind: Option<CorpusKind>,
    bodies: Option<PathBuf>,
    trees: Option<PathBuf>,
    deps: Option<PathBuf>,
    deps_format: Option<String>,
    ids: Option<PathBuf>,
}

impl CorpusManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = read_text(path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base).map_err(|message| PipelineError::Manifest {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Parses manifest text, resolving relative paths against `base` and
    /// checking that every referenced file exists.
    pub fn parse(text: &str, base: &Path) -> std::result::Result<Self, String> {
        let raw: RawManifest = toml::from_str(text).map_err(|e| e.to_string())?;
        if raw.corpus.is_empty() {
            return Err("no [[corpus]] entries".into());
        }
        let mut seen = BTreeSet::new();
        let mut corpora = Vec::new();
        for entry in raw.corpus {
            if entry.label.is_empty() {
                return Err("empty corpus label".into());
            }
            if !seen.insert(entry.label.clone()) {
                return Err(format!("duplicate corpus label `{}`", entry.label));
            }
            let resolve = |p: Option<PathBuf>| -> std::result::Result<Option<PathBuf>, String> {
                let Some(p) = p else { return Ok(None) };
                let p = if p.is_absolute() { p } else { base.join(p) };
                if !p.exists() {
                    return Err(format!("corpus `{}`: {} does not exist", entry.label, p.display()));
                }
                Ok(Some(p))
            };
            let deps_format = match &entry.deps_format {
                Some(f) => f.parse()?,
                None => DepFormat::default(),
            };
            corpora.push(CorpusEntry {
                kind: entry.kind.unwrap_or_else(|| infer_kind(&entry.label)),
                bodies: resolve(entry.bodies.clone())?,
                trees: resolve(entry.trees.clone())?,
                deps: resolve(entry.deps.clone())?,
                ids: resolve(entry.ids.clone())?,
                deps_format,
                label: entry.label,
            });
        }
        let manifest = CorpusManifest { corpora, pairs: raw.pairs };
        if let Some(pairs) = &manifest.pairs {
            manifest.check_pairs(pairs)?;
        }
        Ok(manifest)
    }

    pub fn get(&self, label: &str) -> Option<&CorpusEntry> {
        self.corpora.iter().find(|c| c.label == label)
    }

    pub fn check_pairs(&self, pairs: &[(String, String)]) -> std::result::Result<(), String> {
        for (a, b) in pairs {
            for label in [a, b] {
                if self.get(label).is_none() {
                    return Err(format!("pair refers to unknown corpus `{label}`"));
                }
            }
        }
        Ok(())
    }

    /// Pairs to compare: explicit ones if given, otherwise every phishing
    /// corpus against every legitimate one, then phishing against phishing.
    pub fn corpus_pairs(&self) -> Vec<(String, String)> {
        if let Some(pairs) = &self.pairs {
            return pairs.clone();
        }
        let of_kind = |k| self.corpora.iter().filter(move |c| c.kind == k).map(|c| c.label.clone());
        let phishing: Vec<String> = of_kind(CorpusKind::Phishing).collect();
        let mut out = Vec::new();
        for p in &phishing {
            for l in of_kind(CorpusKind::Legitimate) {
                out.push((p.clone(), l));
            }
        }
        for (i, a) in phishing.iter().enumerate() {
            for b in &phishing[i + 1..] {
                out.push((a.clone(), b.clone()));
            }
        }
        out
    }
}

fn infer_kind(label: &str) -> CorpusKind {
    let l = label.to_lowercase();
    if l.starts_with("legit") || l.starts_with("ham") || l.contains("enron") {
        CorpusKind::Legitimate
    } else {
        CorpusKind::Phishing
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_pairs() {
        let text = r#"
            [[corpus]]
            label = "phish-nazario"
            [[corpus]]
            label = "phish-apwg"
            [[corpus]]
            label = "legit"
        "#;
        let m = CorpusManifest::parse(text, Path::new(".")).unwrap();
        assert_eq!(m.corpora[2].kind, CorpusKind::Legitimate);
        let pairs = m.corpus_pairs();
        let pairs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        assert_eq!(
            pairs,
            vec![("phish-nazario", "legit"), ("phish-apwg", "legit"), ("phish-nazario", "phish-apwg")]
        );
    }

    #[test]
    fn rejects_bad_manifests() {
        let dup = "[[corpus]]\nlabel = \"a\"\n[[corpus]]\nlabel = \"a\"\n";
        assert!(CorpusManifest::parse(dup, Path::new(".")).unwrap_err().contains("duplicate"));
        let missing = "[[corpus]]\nlabel = \"a\"\ntrees = \"no/such/file.mrg\"\n";
        assert!(CorpusManifest::parse(missing, Path::new(".")).unwrap_err().contains("does not exist"));
        let pair = "pairs = [[\"a\", \"b\"]]\n[[corpus]]\nlabel = \"a\"\n";
        assert!(CorpusManifest::parse(pair, Path::new(".")).unwrap_err().contains("unknown corpus"));
        assert!(CorpusManifest::parse("", Path::new(".")).is_err());
        let fmt = "[[corpus]]\nlabel = \"a\"\ndeps_format = \"xml\"\n";
        assert!(CorpusManifest::parse(fmt, Path::new(".")).is_err());
    }
}
