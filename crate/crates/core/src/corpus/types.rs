use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

/// One row of a CoNLL-2012 sentence, minus the coreference column.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Token {
    pub surface: String,
    /// Predicate lemma column; empty when the file has "-".
    pub lemma: String,
    pub pos: String,
    /// Constituent-tree piece with `*` standing for the token itself.
    pub parse_fragment: String,
    /// Named-entity column, usually bracket notation (`(PERSON*`, `*`, `*)`).
    pub ner: String,
    /// Empty when the file has "-".
    pub speaker: String,
    /// Columns the model does not interpret, kept verbatim for round-trips.
    #[serde(skip)]
    pub passthrough: Passthrough,
}

/// Uninterpreted CoNLL-2012 columns.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Passthrough {
    pub frameset: String,
    pub word_sense: String,
    pub predicate_args: Vec<String>,
}

impl Token {
    pub fn new(surface: &str, pos: &str, parse_fragment: &str) -> Self {
        Token {
            surface: surface.to_string(),
            lemma: String::new(),
            pos: pos.to_string(),
            parse_fragment: parse_fragment.to_string(),
            ner: "*".to_string(),
            speaker: String::new(),
            passthrough: Passthrough {
                frameset: "-".to_string(),
                word_sense: "-".to_string(),
                predicate_args: Vec::new(),
            },
        }
    }

    pub fn with_ner(mut self, ner: &str) -> Self {
        self.ner = ner.to_string();
        self
    }

    pub fn with_speaker(mut self, speaker: &str) -> Self {
        self.speaker = speaker.to_string();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Sentence {
    pub index: usize,
    pub tokens: Vec<Token>,
}

impl Sentence {
    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Document {
    pub doc_id: String,
    pub part_id: u32,
    pub sentences: Vec<Sentence>,
    pub gold_chains: Option<Partition>,
}

impl Document {
    pub fn new(doc_id: &str, part_id: u32, sentences: Vec<Vec<Token>>) -> Self {
        Document {
            doc_id: doc_id.to_string(),
            part_id,
            sentences: sentences
                .into_iter()
                .enumerate()
                .map(|(index, tokens)| Sentence { index, tokens })
                .collect(),
            gold_chains: None,
        }
    }

    /// `(doc_id, part_id)`, the identity used to pair key and response files.
    pub fn key(&self) -> (String, u32) {
        (self.doc_id.clone(), self.part_id)
    }

    pub fn token_count(&self) -> usize {
        self.sentences.iter().map(Sentence::len).sum()
    }

    pub fn contains(&self, span: &Span) -> bool {
        self.sentences
            .get(span.sentence)
            .is_some_and(|s| span.start <= span.end && span.end < s.len())
    }

    pub fn span_text(&self, span: &Span) -> String {
        let sentence = &self.sentences[span.sentence];
        sentence.tokens[span.start..=span.end]
            .iter()
            .map(|t| t.surface.as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Inclusive token range within one sentence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub sentence: usize,
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(sentence: usize, start: usize, end: usize) -> Self {
        assert!(start <= end, "span start {start} after end {end}");
        Span { sentence, start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// True when `other` lies inside `self` (same sentence).
    pub fn contains(&self, other: &Span) -> bool {
        self.sentence == other.sentence && self.start <= other.start && other.end <= self.end
    }

    pub fn nested_with(&self, other: &Span) -> bool {
        self.contains(other) || other.contains(self)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}-{}", self.sentence, self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("span {0} appears in more than one chain")]
pub struct OverlappingChains(pub Span);

/// A clustering of spans. Chains are kept in canonical order: spans sorted
/// inside each chain, chains sorted by their first span.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Partition {
    chains: Vec<Vec<Span>>,
}

impl Partition {
    pub fn new<I, C>(chains: I) -> Result<Self, OverlappingChains>
    where
        I: IntoIterator<Item = C>,
        C: IntoIterator<Item = Span>,
    {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for chain in chains {
            let mut spans: Vec<Span> = chain.into_iter().collect();
            spans.sort();
            spans.dedup();
            if spans.is_empty() {
                continue;
            }
            for span in &spans {
                if !seen.insert(*span) {
                    return Err(OverlappingChains(*span));
                }
            }
            out.push(spans);
        }
        out.sort();
        Ok(Partition { chains: out })
    }

    pub fn empty() -> Self {
        Partition::default()
    }

    pub fn chains(&self) -> &[Vec<Span>] {
        &self.chains
    }

    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    pub fn mentions(&self) -> impl Iterator<Item = &Span> {
        self.chains.iter().flatten()
    }

    pub fn mention_count(&self) -> usize {
        self.chains.iter().map(Vec::len).sum()
    }

    /// Drops chains with fewer than `min_size` spans.
    pub fn filter_min_size(&self, min_size: usize) -> Partition {
        Partition {
            chains: self
                .chains
                .iter()
                .filter(|c| c.len() >= min_size)
                .cloned()
                .collect(),
        }
    }
}
