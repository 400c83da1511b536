use std::collections::BTreeMap;

use crate::corpus::{Document, Sentence, Span};

use super::context::DocumentContext;
use super::lexicon::is_pronoun_word;
use super::tree::{is_np, is_punct};
use super::types::{AttributeBundle, Mention, MentionSequence, MentionType};

/// Entity labels that never yield a mention on their own.
pub const NON_REFERENTIAL_NER: &[&str] = &["CARDINAL", "PERCENT", "QUANTITY"];

/// Named-entity spans `(start, end, label)` of a sentence. Accepts bracket
/// notation (`(ORG*`, `*`, `*)`, `(PERSON)`) and plain per-token tags,
/// including `B-`/`I-` prefixes.
pub fn ner_spans(sentence: &Sentence) -> Vec<(usize, usize, String)> {
    let mut spans = Vec::new();
    let mut open: Option<(usize, String)> = None;
    let mut plain: Option<(usize, String)> = None;
    let flush_plain = |plain: &mut Option<(usize, String)>, end: usize, spans: &mut Vec<_>| {
        if let Some((start, label)) = plain.take() {
            spans.push((start, end, label));
        }
    };
    for (i, tok) in sentence.tokens.iter().enumerate() {
        let field = tok.ner.as_str();
        if field.contains('*') || field.starts_with('(') || field.ends_with(')') {
            flush_plain(&mut plain, i.saturating_sub(1), &mut spans);
            if let Some(rest) = field.strip_prefix('(') {
                let label: String = rest
                    .chars()
                    .take_while(|c| !matches!(c, '*' | ')'))
                    .collect();
                open = Some((i, label));
            }
            if field.ends_with(')') {
                if let Some((start, label)) = open.take() {
                    spans.push((start, i, label));
                }
            }
            continue;
        }
        let (begin, label) = match field {
            "-" | "O" | "" => {
                flush_plain(&mut plain, i.saturating_sub(1), &mut spans);
                continue;
            }
            f if f.starts_with("B-") => (true, &f[2..]),
            f if f.starts_with("I-") => (false, &f[2..]),
            f => (false, f),
        };
        match &plain {
            Some((_, l)) if !begin && l == label => {}
            _ => {
                flush_plain(&mut plain, i.saturating_sub(1), &mut spans);
                plain = Some((i, label.to_string()));
            }
        }
    }
    flush_plain(&mut plain, sentence.len().saturating_sub(1), &mut spans);
    spans
}

const BE_AND_AUX: &[&str] = &[
    "is", "was", "'s", "be", "been", "being", "are", "were", "am", "will", "would", "'ll", "has",
    "have", "had", "does", "did", "may", "might", "can", "could", "should", "must", "not", "n't",
];
const BE_FORMS: &[&str] = &["is", "was", "'s", "be", "been", "being", "are", "were", "am"];
const WEATHER: &[&str] = &[
    "rain", "rains", "rained", "raining", "snow", "snows", "snowed", "snowing", "hail", "hails",
    "hailed", "hailing", "drizzle", "drizzles", "drizzled", "drizzling", "pour", "pours",
    "poured", "pouring", "thunder", "thunders", "thundered", "thundering", "sleet", "sleeting",
    "storm", "storms", "stormed", "storming", "freezing", "sunny", "cloudy", "rainy", "windy",
    "foggy", "hot", "cold", "warm", "chilly",
];
const TIME_WORDS: &[&str] = &[
    "time", "late", "early", "noon", "midnight", "dark", "morning", "night", "evening",
    "afternoon", "o'clock",
];
const RAISING_VERBS: &[&str] = &[
    "seem", "seems", "seemed", "appear", "appears", "appeared", "mean", "means", "meant",
    "follow", "follows", "followed",
];
const CLAUSE_MARKERS: &[&str] = &["that", "to", "whether", "if"];

/// Non-referential "it" at token `i`: weather and time predicates,
/// "it is ADJ that/to", and "it seems/appears/means/follows that".
pub fn is_pleonastic_it(sentence: &Sentence, i: usize) -> bool {
    let words: Vec<String> = sentence.words().map(str::to_lowercase).collect();
    if words.get(i).map(String::as_str) != Some("it") {
        return false;
    }
    let word = |k: usize| words.get(k).map(String::as_str).unwrap_or("");
    let pos = |k: usize| sentence.tokens.get(k).map(|t| t.pos.as_str()).unwrap_or("");
    let mut k = i + 1;
    let mut saw_be = false;
    while k <= i + 3 && BE_AND_AUX.contains(&word(k)) {
        saw_be |= BE_FORMS.contains(&word(k));
        k += 1;
    }
    let w = word(k);
    if WEATHER.contains(&w) {
        return true;
    }
    if saw_be
        && (TIME_WORDS.contains(&w) || (pos(k) == "CD" && word(k + 1) == "o'clock"))
    {
        return true;
    }
    if saw_be {
        let mut m = k;
        if pos(m) == "RB" {
            m += 1;
        }
        if pos(m).starts_with("JJ") && CLAUSE_MARKERS.contains(&word(m + 1)) {
            return true;
        }
    }
    RAISING_VERBS.contains(&w) && word(k + 1) == "that"
}

/// Lower-cased surface with terminal punctuation removed.
pub fn surface_key(words: &[String]) -> String {
    let joined = words.join(" ").to_lowercase();
    joined
        .trim_end_matches(|c: char| !c.is_alphanumeric())
        .to_string()
}

pub fn mention_type(head_word: &str, head_pos: &str) -> MentionType {
    if matches!(head_pos, "PRP" | "PRP$") || is_pronoun_word(head_word) {
        MentionType::Pronoun
    } else if matches!(head_pos, "NNP" | "NNPS") {
        MentionType::Proper
    } else {
        MentionType::Nominal
    }
}

/// Builds a mention over `span` with the given head; attributes are left
/// unknown and the mode unset.
pub fn build_mention(doc: &Document, span: Span, head: usize) -> Mention {
    let sentence = &doc.sentences[span.sentence];
    let tokens = &sentence.tokens[span.start..=span.end];
    let words: Vec<String> = tokens.iter().map(|t| t.surface.clone()).collect();
    let pos: Vec<String> = tokens.iter().map(|t| t.pos.clone()).collect();
    let head_tok = &sentence.tokens[head];
    let ner = {
        let spans = ner_spans(sentence);
        spans
            .iter()
            .find(|(s, e, _)| *s == span.start && *e == span.end)
            .or_else(|| spans.iter().find(|(s, e, _)| *s <= head && head <= *e))
            .map(|(_, _, l)| l.clone())
    };
    Mention {
        span,
        head,
        mention_type: mention_type(&head_tok.surface, &head_tok.pos),
        attributes: AttributeBundle::UNKNOWN,
        mode: None,
        surface_key: surface_key(&words),
        head_key: head_tok.surface.to_lowercase(),
        words,
        pos,
        ner,
    }
}

/// NP constituents, pronoun tokens and named-entity spans, deduplicated by
/// span, with pleonastic "it" removed. Sentences whose parse failed are
/// skipped; their errors are on the context.
pub fn detect_mentions(ctx: &DocumentContext<'_>) -> MentionSequence {
    let doc = ctx.doc;
    // span -> head
    let mut found: BTreeMap<Span, usize> = BTreeMap::new();
    for (s, sentence) in doc.sentences.iter().enumerate() {
        let Some(tree) = ctx.trees[s].as_ref() else {
            continue;
        };
        for (id, node) in tree.nodes.iter().enumerate() {
            if !is_np(&node.label) {
                continue;
            }
            let tokens = &sentence.tokens[node.start..=node.end];
            if tokens.iter().all(|t| t.pos == "-NONE-" || is_punct(&t.pos)) {
                continue;
            }
            found
                .entry(Span::new(s, node.start, node.end))
                .or_insert_with(|| tree.head_of(id));
        }
        for (i, tok) in sentence.tokens.iter().enumerate() {
            if matches!(tok.pos.as_str(), "PRP" | "PRP$") || is_pronoun_word(&tok.surface) {
                found.entry(Span::new(s, i, i)).or_insert(i);
            }
        }
        for (start, end, label) in ner_spans(sentence) {
            if NON_REFERENTIAL_NER.contains(&label.as_str()) {
                continue;
            }
            let span = Span::new(s, start, end);
            let head = tree
                .np_with_span(start, end)
                .map(|id| tree.head_of(id))
                .unwrap_or(end);
            found.entry(span).or_insert(head);
        }
    }
    let mentions = found
        .into_iter()
        .filter(|(span, _)| {
            !(span.start == span.end
                && is_pleonastic_it(&doc.sentences[span.sentence], span.start))
        })
        .map(|(span, head)| build_mention(doc, span, head))
        .collect();
    MentionSequence::new(mentions)
}
