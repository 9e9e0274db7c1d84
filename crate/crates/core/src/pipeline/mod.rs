//! Corpus-level analysis: manifest loading, deduplication, language
//! filtering, path and argument analysis, and report rendering.

mod analysis;
mod corpus;
mod manifest;
mod report;

use std::path::PathBuf;

use thiserror::Error;

pub use analysis::{
    analyze, load_corpora, run_arg_analysis, run_path_analysis, AnalysisConfig, LoadedCorpus,
    Sentence,
};
pub use corpus::{
    dedup, language_filter, load_bodies, normalize_body, write_bodies, CorpusDoc, LanguageFilter,
};
pub use manifest::{CorpusEntry, CorpusKind, CorpusManifest};
pub use report::{
    render, render_files, AnalysisReport, ArgRow, ArgSection, ArgTable, CorpusSummary, Example,
    OutputFormat, PathRow, PathSection, PathTable, RenderOptions, SimilarityCell,
};

use crate::depargs::DepError;
use crate::treebank::TreeError;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("manifest {path}: {message}")]
    Manifest { path: PathBuf, message: String },
    #[error("{path}: {message}")]
    BadInput { path: PathBuf, message: String },
    #[error("{0}")]
    Config(String),
    #[error("corpus `{corpus}`, {path}: {source}")]
    Trees { corpus: String, path: PathBuf, source: TreeError },
    #[error("corpus `{corpus}`, {path}: {source}")]
    Deps { corpus: String, path: PathBuf, source: DepError },
    #[error("corpus `{corpus}`: {message}")]
    SentenceAlignmentMismatch { corpus: String, message: String },
    #[error("cannot write {path}: {source}")]
    UnwritableOutput { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    /// Process exit code: 1 for input problems, 2 for parse or alignment failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Trees { .. }
            | PipelineError::Deps { .. }
            | PipelineError::SentenceAlignmentMismatch { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

pub(crate) fn read_text(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| PipelineError::Io { path: path.to_path_buf(), source })
}
