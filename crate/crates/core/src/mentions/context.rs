use crate::corpus::Document;

use super::lexicon::LexiconSet;
use super::tree::{Tree, TreeError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("document {doc_id}, sentence {sentence}: {source}")]
pub struct DetectionError {
    pub doc_id: String,
    pub sentence: usize,
    pub source: TreeError,
}

/// A document with its rebuilt parse trees and the lexicons used for
/// attribute lookup. Shared read-only by detection, attributes and sieves.
#[derive(Debug)]
pub struct DocumentContext<'a> {
    pub doc: &'a Document,
    pub lexicons: &'a LexiconSet,
    /// `None` for sentences whose parse column could not be read.
    pub trees: Vec<Option<Tree>>,
    pub errors: Vec<DetectionError>,
}

impl<'a> DocumentContext<'a> {
    pub fn new(doc: &'a Document, lexicons: &'a LexiconSet) -> Self {
        let mut errors = Vec::new();
        let trees = doc
            .sentences
            .iter()
            .enumerate()
            .map(|(i, s)| match Tree::from_sentence(s) {
                Ok(t) => Some(t),
                Err(source) => {
                    errors.push(DetectionError {
                        doc_id: doc.doc_id.clone(),
                        sentence: i,
                        source,
                    });
                    None
                }
            })
            .collect();
        DocumentContext {
            doc,
            lexicons,
            trees,
            errors,
        }
    }

    pub fn tree(&self, sentence: usize) -> Option<&Tree> {
        self.trees.get(sentence).and_then(Option::as_ref)
    }

    /// Speaker column at a token; empty when unknown.
    pub fn speaker_at(&self, sentence: usize, token: usize) -> &str {
        &self.doc.sentences[sentence].tokens[token].speaker
    }
}
