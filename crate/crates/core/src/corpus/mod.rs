//! Documents, spans and partitions, plus CoNLL-2012 I/O.

mod conll;
mod loader;
mod types;

pub use conll::{emit_conll, emit_corpus, parse_conll, ConllError, MIN_COLUMNS};
pub use loader::{
    filter_documents, load_corpus, surface_fingerprint, Corpus, LoadError, LoadOptions,
};
pub use types::{Document, OverlappingChains, Partition, Passthrough, Sentence, Span, Token};
