use std::collections::HashSet;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::{read_text, PipelineError, Result};

/// A header-stripped plain-text email body.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusDoc {
    #[serde(rename = "id")]
    pub doc_id: String,
    pub body: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
}

/// Loads bodies from a JSON-lines file (`{"id": .., "body": ..}` per line)
/// or from a directory with one text file per email, taken in name order.
pub fn load_bodies(path: &Path, label: &str) -> Result<Vec<CorpusDoc>> {
    let io_err = |source| PipelineError::Io { path: path.to_path_buf(), source };
    let mut docs = Vec::new();
    if path.is_dir() {
        let mut files: Vec<_> = std::fs::read_dir(path)
            .map_err(io_err)?
            .collect::<std::io::Result<Vec<_>>>()
            .map_err(io_err)?
            .into_iter()
            .map(|e| e.path())
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for file in files {
            let body = read_text(&file)?;
            let doc_id = file.file_name().unwrap().to_string_lossy().into_owned();
            docs.push(CorpusDoc { doc_id, body, label: label.to_string() });
        }
    } else {
        for (n, line) in read_text(path)?.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let mut doc: CorpusDoc =
                serde_json::from_str(line).map_err(|e| PipelineError::BadInput {
                    path: path.to_path_buf(),
                    message: format!("line {}: {e}", n + 1),
                })?;
            doc.label = label.to_string();
            docs.push(doc);
        }
    }
    let mut ids = HashSet::new();
    if let Some(dup) = docs.iter().find(|d| !ids.insert(d.doc_id.as_str())) {
        return Err(PipelineError::BadInput {
            path: path.to_path_buf(),
            message: format!("duplicate document id `{}`", dup.doc_id),
        });
    }
    Ok(docs)
}

/// Writes documents as JSON lines.
pub fn write_bodies(path: &Path, docs: &[CorpusDoc]) -> Result<()> {
    let err = |source| PipelineError::UnwritableOutput { path: path.to_path_buf(), source };
    let mut file = std::io::BufWriter::new(std::fs::File::create(path).map_err(err)?);
    for doc in docs {
        let line = serde_json::to_string(&CorpusDoc { label: String::new(), ..doc.clone() })
            .expect("document serializes");
        writeln!(file, "{line}").map_err(err)?;
    }
    file.flush().map_err(err)
}

/// Lowercased body with whitespace runs collapsed to single spaces.
pub fn normalize_body(body: &str) -> String {
    body.split_whitespace().map(str::to_lowercase).collect::<Vec<_>>().join(" ")
}

/// Keeps the first document of each normalized body, preserving order.
pub fn dedup(docs: Vec<CorpusDoc>) -> Vec<CorpusDoc> {
    let mut seen = HashSet::new();
    docs.into_iter()
        .filter(|doc| {
            let digest: [u8; 32] = Sha256::digest(normalize_body(&doc.body).as_bytes()).into();
            seen.insert(digest)
        })
        .collect()
}

/// Thresholds for flagging non-English bodies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanguageFilter {
    /// Minimum share of alphabetic characters that are ASCII letters.
    pub min_ascii_letter_fraction: f64,
    /// Minimum share of word tokens found in the stopword list.
    pub min_stopword_rate: f64,
}

impl Default for LanguageFilter {
    fn default() -> Self {
        LanguageFilter { min_ascii_letter_fraction: 0.80, min_stopword_rate: 0.02 }
    }
}

const STOPWORDS: &[&str] = &[
    "a", "about", "above", "after", "again", "all", "am", "an", "and", "any", "are", "as", "at",
    "be", "because", "been", "before", "being", "below", "between", "both", "but", "by", "can",
    "could", "did", "do", "does", "doing", "down", "during", "each", "few", "for", "from",
    "further", "had", "has", "have", "having", "he", "her", "here", "hers", "him", "his", "how",
    "i", "if", "in", "into", "is", "it", "its", "just", "me", "more", "most", "my", "no", "nor",
    "not", "now", "of", "off", "on", "once", "only", "or", "other", "our", "ours", "out", "over",
    "own", "please", "same", "she", "should", "so", "some", "such", "than", "that", "the",
    "their", "them", "then", "there", "these", "they", "this", "those", "through", "to", "too",
    "under", "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
    "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
];

impl LanguageFilter {
    /// Share of alphabetic characters that are ASCII letters; `None` without letters.
    pub fn ascii_letter_fraction(body: &str) -> Option<f64> {
        let (mut letters, mut ascii) = (0usize, 0usize);
        for c in body.chars().filter(|c| c.is_alphabetic()) {
            letters += 1;
            if c.is_ascii_alphabetic() {
                ascii += 1;
            }
        }
        (letters > 0).then(|| ascii as f64 / letters as f64)
    }

    /// Share of word tokens that are English stopwords; `None` without words.
    pub fn stopword_rate(body: &str) -> Option<f64> {
        let words: Vec<String> = body
            .split(|c: char| !(c.is_alphabetic() || c == '\''))
            .filter(|w| w.chars().any(char::is_alphabetic))
            .map(str::to_lowercase)
            .collect();
        if words.is_empty() {
            return None;
        }
        let hits = words.iter().filter(|w| STOPWORDS.binary_search(&w.as_str()).is_ok()).count();
        Some(hits as f64 / words.len() as f64)
    }

    pub fn is_flagged(&self, body: &str) -> bool {
        match (Self::ascii_letter_fraction(body), Self::stopword_rate(body)) {
            (Some(ascii), Some(stop)) => {
                ascii < self.min_ascii_letter_fraction || stop < self.min_stopword_rate
            }
            _ => true,
        }
    }
}

/// Splits documents into (kept, flagged as non-English).
pub fn language_filter(
    docs: Vec<CorpusDoc>,
    filter: &LanguageFilter,
) -> (Vec<CorpusDoc>, Vec<CorpusDoc>) {
    docs.into_iter().partition(|d| !filter.is_flagged(&d.body))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn doc(id: &str, body: &str) -> CorpusDoc {
        CorpusDoc { doc_id: id.into(), body: body.into(), label: String::new() }
    }

    #[test]
    fn stopwords_sorted() {
        assert!(STOPWORDS.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn dedup_exact_and_whitespace() {
        let kept = dedup(vec![doc("1", "Click here now"), doc("2", "Click here now")]);
        assert_eq!(kept.len(), 1);
        let kept = dedup(vec![
            doc("a", "Please  update\n\nyour records."),
            doc("b", "x"),
            doc("c", "  please update your\trecords. "),
        ]);
        let ids: Vec<_> = kept.iter().map(|d| d.doc_id.as_str()).collect();
        assert_eq!(ids, vec!["a", "b"]);
    }

    #[test]
    fn language() {
        let f = LanguageFilter::default();
        assert!(!f.is_flagged("Please update your account information within 24 hours."));
        assert!(f.is_flagged("Пожалуйста, обновите данные вашей учетной записи."));
        assert!(f.is_flagged(""));
        assert!(f.is_flagged("Lorem ipsum dolor sit amet consectetur"));
    }

    #[test]
    fn ascii_threshold_boundary() {
        // 8 ASCII letters of 10 alphabetic characters: exactly 0.80
        let body = "to the abc жж";
        assert_eq!(LanguageFilter::ascii_letter_fraction(body), Some(0.8));
        let f = LanguageFilter { min_ascii_letter_fraction: 0.80, min_stopword_rate: 0.0 };
        assert!(!f.is_flagged(body));
        let f = LanguageFilter { min_ascii_letter_fraction: 0.81, min_stopword_rate: 0.0 };
        assert!(f.is_flagged(body));
    }

    #[test]
    fn partition_keeps_order() {
        let (kept, flagged) = language_filter(
            vec![doc("1", "you and me"), doc("2", "日本語のメール"), doc("3", "it is here")],
            &LanguageFilter::default(),
        );
        assert_eq!(kept.iter().map(|d| &d.doc_id[..]).collect::<Vec<_>>(), ["1", "3"]);
        assert_eq!(flagged.len(), 1);
    }
}
