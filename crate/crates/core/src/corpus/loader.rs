use std::collections::HashSet;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::conll::{parse_conll, ConllError};
use super::types::Document;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ConllError },
}

/// Filters applied while loading a training corpus.
#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    /// Skip documents with fewer sentences than this.
    pub min_sentences: Option<usize>,
    /// Skip documents whose token surface sequence was already seen.
    pub dedup: bool,
}

impl LoadOptions {
    /// The training filters: drop documents under three sentences and
    /// exact duplicates.
    pub fn training() -> Self {
        LoadOptions {
            min_sentences: Some(3),
            dedup: true,
        }
    }
}

/// Loaded documents plus filter bookkeeping. Read-only after construction.
#[derive(Debug, Clone, Default)]
pub struct Corpus {
    pub documents: Vec<Document>,
    pub skipped_short: usize,
    pub skipped_duplicate: usize,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Document> {
        self.documents.iter()
    }
}

/// Digest of the surface sequence, sentence boundaries included.
pub fn surface_fingerprint(doc: &Document) -> [u8; 32] {
    let mut hasher = Sha256::new();
    for sentence in &doc.sentences {
        for token in &sentence.tokens {
            hasher.update(token.surface.as_bytes());
            hasher.update([0x1f]);
        }
        hasher.update([0x1e]);
    }
    hasher.finalize().into()
}

/// Applies `options` to already-parsed documents.
pub fn filter_documents<I>(docs: I, options: &LoadOptions) -> Corpus
where
    I: IntoIterator<Item = Document>,
{
    let mut corpus = Corpus::default();
    let mut seen = HashSet::new();
    for doc in docs {
        if let Some(min) = options.min_sentences {
            if doc.sentences.len() < min {
                corpus.skipped_short += 1;
                continue;
            }
        }
        if options.dedup && !seen.insert(surface_fingerprint(&doc)) {
            corpus.skipped_duplicate += 1;
            continue;
        }
        corpus.documents.push(doc);
    }
    corpus
}

/// Reads and parses every path in order, then applies the filters.
pub fn load_corpus<P: AsRef<Path>>(paths: &[P], options: &LoadOptions) -> Result<Corpus, LoadError> {
    let mut docs = Vec::new();
    for path in paths {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LoadError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let parsed = parse_conll(&text).map_err(|source| LoadError::Parse {
            path: path.to_path_buf(),
            source,
        })?;
        docs.extend(parsed);
    }
    Ok(filter_documents(docs, options))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Token;

    fn doc(id: &str, sentences: usize) -> Document {
        Document::new(
            id,
            0,
            (0..sentences)
                .map(|i| vec![Token::new(&format!("w{i}"), "NN", "*")])
                .collect(),
        )
    }

    #[test]
    fn short_documents_are_skipped() {
        let c = filter_documents(vec![doc("a", 2)], &LoadOptions::training());
        assert_eq!(c.len(), 0);
        assert_eq!(c.skipped_short, 1);
    }

    #[test]
    fn duplicates_are_skipped() {
        let c = filter_documents(vec![doc("a", 3), doc("b", 3)], &LoadOptions::training());
        assert_eq!(c.len(), 1);
        assert_eq!(c.skipped_duplicate, 1);
    }

    #[test]
    fn no_filters_keeps_everything() {
        let c = filter_documents(
            vec![doc("a", 1), doc("a", 1), doc("b", 5)],
            &LoadOptions::default(),
        );
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn missing_path_is_named() {
        let err = load_corpus(&["/nonexistent/x.conll"], &LoadOptions::default()).unwrap_err();
        assert!(err.to_string().contains("/nonexistent/x.conll"));
    }
}
