//! Corpus files, trace output, distribution tables and the `centering` CLI
//! on top of [`centering_core`].

pub mod analysis;
pub mod corpus;
pub mod report;

use std::path::{Path, PathBuf};

use centering_core::{
    analyze, validate_discourse, CenteringError, Discourse, DiscourseReport, EngineConfig,
};

pub use crate::corpus::{parse_corpus, write_corpus, CorpusError};

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{source}")]
    Corpus { path: PathBuf, source: CorpusError },
    #[error("{path}: discourse `{discourse}`: {message}")]
    Invalid {
        path: PathBuf,
        discourse: String,
        message: String,
    },
}

/// Read and parse a corpus file.
pub fn load_corpus(path: &Path) -> Result<Vec<Discourse>, LoadError> {
    let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
        path: path.to_owned(),
        source,
    })?;
    parse_corpus(&text).map_err(|source| LoadError::Corpus {
        path: path.to_owned(),
        source,
    })
}

/// Read a corpus and reject discourses that break the well-formedness rules.
pub fn load_valid_corpus(path: &Path) -> Result<Vec<Discourse>, LoadError> {
    let corpus = load_corpus(path)?;
    for d in &corpus {
        if let Some(v) = validate_discourse(d).first() {
            return Err(LoadError::Invalid {
                path: path.to_owned(),
                discourse: d.id.clone(),
                message: v.to_string(),
            });
        }
    }
    Ok(corpus)
}

/// Analyse every discourse of a corpus.
pub fn analyze_corpus(
    corpus: &[Discourse],
    cfg: &EngineConfig,
) -> Result<Vec<DiscourseReport>, CenteringError> {
    corpus.iter().map(|d| analyze(d, cfg)).collect()
}
