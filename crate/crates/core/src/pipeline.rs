//! Wiring from documents to encoded training data, decoded partitions and
//! scores.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::corpus::{Document, Partition};
use crate::mentions::{
    assign_modes, attribute_all, detect_mentions, DetectionError, DocumentContext, LexiconSet,
    MentionSequence, ModePrecedence,
};
use crate::metrics::{score_corpus, ScoreTable};
use crate::model::{decode_document, posterior_row, Decoded, ModelError, ParameterTables, PosteriorRow};
use crate::num::Real;
use crate::representation::{encode_document, BucketScheme, EncodedDocument};

/// Everything that shapes mention analysis and encoding.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub lexicons: LexiconSet,
    pub precedence: ModePrecedence,
    pub buckets: BucketScheme,
    /// Smallest decoded chain written out or scored (2 drops singletons).
    pub min_chain_size: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            lexicons: LexiconSet::bundled(),
            precedence: ModePrecedence::default(),
            buckets: BucketScheme::default(),
            min_chain_size: 2,
        }
    }
}

/// A document's mentions with attributes and modes, plus their encoding.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub mentions: MentionSequence,
    pub encoded: EncodedDocument,
    /// Sentences skipped because their parse could not be rebuilt.
    pub errors: Vec<DetectionError>,
}

pub fn analyze_document(doc: &Document, config: &PipelineConfig) -> Analysis {
    let ctx = DocumentContext::new(doc, &config.lexicons);
    let mut mentions = detect_mentions(&ctx);
    attribute_all(&mut mentions, doc, &config.lexicons);
    assign_modes(&mut mentions, &ctx, config.precedence);
    let id = format!("{} part {}", doc.doc_id, doc.part_id);
    let encoded = encode_document(&id, &mentions, &config.buckets);
    Analysis {
        mentions,
        encoded,
        errors: ctx.errors,
    }
}

/// Analyzes documents in parallel; output order follows input order.
pub fn analyze_corpus(docs: &[Document], config: &PipelineConfig, pool: &rayon::ThreadPool) -> Vec<Analysis> {
    pool.install(|| docs.par_iter().map(|d| analyze_document(d, config)).collect())
}

/// Maps decoded clusters of mention indices to spans.
pub fn clusters_to_partition(mentions: &MentionSequence, decoded: &Decoded, min_chain_size: usize) -> Partition {
    let chains = decoded
        .clusters
        .iter()
        .filter(|c| c.len() >= min_chain_size)
        .map(|c| c.iter().map(|&j| mentions.mention(j).span).collect::<Vec<_>>());
    Partition::new(chains).expect("mention spans are distinct")
}

/// Decodes one analyzed document into a response partition.
pub fn resolve<T: Real>(analysis: &Analysis, theta: &ParameterTables<T>, min_chain_size: usize) -> Partition {
    let decoded = decode_document(&analysis.encoded, theta);
    clusters_to_partition(&analysis.mentions, &decoded, min_chain_size)
}

/// Posteriors of every mention, for inspection.
pub fn posteriors<T: Real>(analysis: &Analysis, theta: &ParameterTables<T>) -> Result<Vec<PosteriorRow<T>>, ModelError> {
    (1..=analysis.encoded.len())
        .map(|j| posterior_row(&analysis.encoded, j, theta))
        .collect()
}

/// Scores decoded partitions of gold-annotated documents. Documents without
/// gold chains are skipped.
pub fn evaluate<T: Real>(
    docs: &[Document],
    analyses: &[Analysis],
    theta: &ParameterTables<T>,
    min_chain_size: usize,
) -> ScoreTable<T> {
    let pairs: Vec<(&Partition, Partition)> = docs
        .iter()
        .zip(analyses)
        .filter_map(|(d, a)| Some((d.gold_chains.as_ref()?, resolve(a, theta, min_chain_size))))
        .collect();
    score_corpus(pairs.iter().map(|(k, r)| (*k, r)))
}

/// Key and response documents that could not be paired up, by
/// `"doc_id part N"`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unmatched documents: key only {key_only:?}, response only {response_only:?}")]
pub struct UnmatchedDocuments {
    pub key_only: Vec<String>,
    pub response_only: Vec<String>,
}

/// Pairs documents by (doc id, part), in key order.
pub fn align_documents<'a>(
    key: &'a [Document],
    response: &'a [Document],
) -> Result<Vec<(&'a Document, &'a Document)>, UnmatchedDocuments> {
    let name = |d: &Document| format!("{} part {}", d.doc_id, d.part_id);
    let by_key: BTreeMap<(String, u32), &Document> = response.iter().map(|d| (d.key(), d)).collect();
    let key_ids: std::collections::BTreeSet<(String, u32)> = key.iter().map(Document::key).collect();
    let key_only: Vec<String> = key
        .iter()
        .filter(|d| !by_key.contains_key(&d.key()))
        .map(name)
        .collect();
    let response_only: Vec<String> = response
        .iter()
        .filter(|d| !key_ids.contains(&d.key()))
        .map(name)
        .collect();
    if !key_only.is_empty() || !response_only.is_empty() {
        return Err(UnmatchedDocuments {
            key_only,
            response_only,
        });
    }
    Ok(key.iter().map(|d| (d, by_key[&d.key()])).collect())
}
