//! Pairwise matching predicates used to decide resolution modes and the
//! string-match features.
//!
//! Every predicate takes the later mention `m_j` first and a candidate
//! antecedent `m_k` second, and is false unless `m_k` strictly precedes
//! `m_j` in document order.
//!
//! These are compact restatements of the classic deterministic sieves:
//!
//! * string match: equal lower-cased surfaces, terminal punctuation ignored;
//! * relaxed match: equal surfaces after cutting at the first comma or
//!   WH-word following the head;
//! * strict head match A: same head, word inclusion against the candidate
//!   itself (not its chain), compatible modifiers, and no nesting;
//! * speaker identification: first-person pronouns against the speaker
//!   column;
//! * precise constructs: appositive, predicate nominative, acronym,
//!   relative pronoun and demonym. Role appositives are not covered.

use std::collections::HashSet;

use super::context::DocumentContext;
use super::lexicon::{is_first_person_plural, is_first_person_singular};
use super::tree::{base_label, is_punct, Item, Tree};
use super::types::Mention;

const STOP_WORDS: &[&str] = &[
    "a", "an", "the", "this", "that", "these", "those", "some", "any", "all", "each", "every",
    "its", "his", "her", "their", "our", "my", "your", "'s", "'", "of", "in", "on", "at", "for",
    "to", "and", "or", "with", "by", "from", "as", "about", "into", "such", "no", "other", "both",
    "either", "neither", "there",
];

const COPULAS: &[&str] = &[
    "is", "was", "are", "were", "am", "be", "been", "being", "'s", "'re", "'m", "become",
    "becomes", "became", "remain", "remains", "remained",
];

fn ordered(m_j: &Mention, m_k: &Mention) -> bool {
    m_k.precedes(m_j)
}

fn content_words(m: &Mention) -> impl Iterator<Item = String> + '_ {
    m.words
        .iter()
        .zip(&m.pos)
        .filter(|(w, p)| !is_punct(p) && !STOP_WORDS.contains(&w.to_lowercase().as_str()))
        .map(|(w, _)| w.to_lowercase())
}

/// Noun, adjective and number modifiers to the left of the head.
fn modifiers(m: &Mention) -> Vec<String> {
    let head_offset = m.head - m.span.start;
    m.words[..head_offset]
        .iter()
        .zip(&m.pos[..head_offset])
        .filter(|(_, p)| p.starts_with("NN") || p.starts_with("JJ") || *p == "CD")
        .map(|(w, _)| w.to_lowercase())
        .collect()
}

/// Surface cut at the first comma or WH-word after the head.
fn relaxed_key(m: &Mention) -> String {
    let head_offset = m.head - m.span.start;
    let cut = (head_offset + 1..m.words.len())
        .find(|&i| m.words[i] == "," || m.pos[i].starts_with('W'))
        .unwrap_or(m.words.len());
    super::detect::surface_key(&m.words[..cut])
}

pub fn sieve_string_match(m_j: &Mention, m_k: &Mention) -> bool {
    ordered(m_j, m_k)
        && !m_j.is_pronoun()
        && !m_k.is_pronoun()
        && !m_j.surface_key.is_empty()
        && m_j.surface_key == m_k.surface_key
}

pub fn sieve_relaxed_match(m_j: &Mention, m_k: &Mention) -> bool {
    if !ordered(m_j, m_k) || m_j.is_pronoun() || m_k.is_pronoun() {
        return false;
    }
    let key = relaxed_key(m_j);
    !key.is_empty() && key == relaxed_key(m_k)
}

pub fn sieve_strict_head_match_a(m_j: &Mention, m_k: &Mention) -> bool {
    if !ordered(m_j, m_k) || m_j.is_pronoun() || m_k.is_pronoun() {
        return false;
    }
    if m_j.head_key != m_k.head_key || m_j.span.nested_with(&m_k.span) {
        return false;
    }
    let antecedent_words: HashSet<String> = m_k.words.iter().map(|w| w.to_lowercase()).collect();
    if !content_words(m_j).all(|w| antecedent_words.contains(&w)) {
        return false;
    }
    let antecedent_mods: HashSet<String> = modifiers(m_k).into_iter().collect();
    modifiers(m_j).iter().all(|w| antecedent_mods.contains(w))
}

/// Any of the three string-matching sieves.
pub fn string_sieves(m_j: &Mention, m_k: &Mention) -> bool {
    sieve_string_match(m_j, m_k) || sieve_relaxed_match(m_j, m_k) || sieve_strict_head_match_a(m_j, m_k)
}

fn speaker_names(m: &Mention, speaker: &str) -> bool {
    if speaker.is_empty() || m.is_pronoun() {
        return false;
    }
    let normalized = speaker.replace('_', " ").to_lowercase();
    normalized == m.surface_key || normalized.split_whitespace().any(|t| t == m.head_key)
}

fn speaker_of<'a>(ctx: &'a DocumentContext<'_>, m: &Mention) -> &'a str {
    ctx.speaker_at(m.span.sentence, m.head)
}

pub fn sieve_speaker_identification(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    if !ordered(m_j, m_k) {
        return false;
    }
    let near = m_j.span.sentence - m_k.span.sentence <= 1;
    let first_sg = |m: &Mention| m.is_pronoun() && is_first_person_singular(m.head_word());
    let first_pl = |m: &Mention| m.is_pronoun() && is_first_person_plural(m.head_word());
    if near && first_sg(m_j) && speaker_names(m_k, speaker_of(ctx, m_j)) {
        return true;
    }
    if near && first_sg(m_k) && speaker_names(m_j, speaker_of(ctx, m_k)) {
        return true;
    }
    let (sj, sk) = (speaker_of(ctx, m_j), speaker_of(ctx, m_k));
    !sj.is_empty()
        && sj == sk
        && ((first_sg(m_j) && first_sg(m_k)) || (first_pl(m_j) && first_pl(m_k)))
}

fn phrase_with_span(tree: &Tree, item: Item, m: &Mention) -> bool {
    matches!(item, Item::Phrase(_)) && tree.item_span(item) == (m.span.start, m.span.end)
}

fn is_phrase(tree: &Tree, item: Item, label: &str) -> bool {
    match item {
        Item::Phrase(p) => base_label(&tree.node(p).label) == label,
        Item::Token(_) => false,
    }
}

/// `(NP (NP m_k) , (NP m_j) ...)` with no coordination in the parent.
pub fn appositive(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    if m_j.span.sentence != m_k.span.sentence || m_j.is_pronoun() || m_k.is_pronoun() {
        return false;
    }
    let Some(tree) = ctx.tree(m_j.span.sentence) else {
        return false;
    };
    (0..tree.nodes.len())
        .filter(|&i| base_label(&tree.node(i).label) == "NP")
        .any(|parent| {
        let items = tree.items(parent);
        if items.iter().any(|&it| {
            matches!(it, Item::Token(t) if tree.pos[t] == "CC") || is_phrase(tree, it, "CONJP")
        }) {
            return false;
        }
        items.windows(3).any(|w| {
            phrase_with_span(tree, w[0], m_k)
                && matches!(w[1], Item::Token(t) if tree.pos[t] == ",")
                && phrase_with_span(tree, w[2], m_j)
        })
    })
}

/// NP object of a copula inside a VP (descending through auxiliaries).
fn copular_object(tree: &Tree, vp: usize, words: &[String]) -> Option<(usize, usize)> {
    let items = tree.items(vp);
    for (i, &it) in items.iter().enumerate() {
        match it {
            Item::Token(t) if COPULAS.contains(&words[t].to_lowercase().as_str()) => {
                return items[i + 1..]
                    .iter()
                    .find(|&&x| is_phrase(tree, x, "NP"))
                    .map(|&x| tree.item_span(x));
            }
            Item::Phrase(p) if base_label(&tree.node(p).label) == "VP" => {
                return copular_object(tree, p, words);
            }
            _ => {}
        }
    }
    None
}

/// `(S (NP m_k) (VP copula (NP m_j)))`.
pub fn predicate_nominative(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    if m_j.span.sentence != m_k.span.sentence {
        return false;
    }
    let Some(tree) = ctx.tree(m_j.span.sentence) else {
        return false;
    };
    let words: Vec<String> = ctx.doc.sentences[m_j.span.sentence]
        .words()
        .map(str::to_string)
        .collect();
    (0..tree.nodes.len())
        .filter(|&i| base_label(&tree.node(i).label) == "S")
        .any(|s| {
            let items = tree.items(s);
            items.windows(2).any(|w| {
                phrase_with_span(tree, w[0], m_k)
                    && is_phrase(tree, w[0], "NP")
                    && match w[1] {
                        Item::Phrase(vp) if base_label(&tree.node(vp).label) == "VP" => {
                            copular_object(tree, vp, &words) == Some((m_j.span.start, m_j.span.end))
                        }
                        _ => false,
                    }
            })
        })
}

fn initials(words: &[String]) -> String {
    words
        .iter()
        .filter_map(|w| w.chars().next())
        .filter(|c| c.is_uppercase())
        .collect()
}

fn as_acronym(m: &Mention) -> Option<String> {
    if m.words.len() != 1 {
        return None;
    }
    let stripped: String = m.words[0].chars().filter(|&c| c != '.').collect();
    (stripped.chars().count() >= 2 && stripped.chars().all(|c| c.is_ascii_uppercase()))
        .then_some(stripped)
}

/// One side is a single all-caps token equal to the initials of the
/// other's capitalised words.
pub fn acronym(m_j: &Mention, m_k: &Mention) -> bool {
    let check = |short: &Mention, long: &Mention| {
        long.words.len() >= 2 && as_acronym(short).is_some_and(|a| a == initials(&long.words))
    };
    check(m_j, m_k) || check(m_k, m_j)
}

/// A WH relative pronoun heading the SBAR that modifies `m_k`.
pub fn relative_pronoun(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    if m_j.span.sentence != m_k.span.sentence || m_j.span.len() != 1 {
        return false;
    }
    if !matches!(m_j.pos[0].as_str(), "WP" | "WDT" | "WP$") {
        return false;
    }
    let Some(tree) = ctx.tree(m_j.span.sentence) else {
        return false;
    };
    (0..tree.nodes.len())
        .filter(|&i| base_label(&tree.node(i).label) == "NP")
        .any(|np| {
            let items = tree.items(np);
            items.iter().enumerate().any(|(i, &it)| {
                phrase_with_span(tree, it, m_k)
                    && items[i + 1..]
                        .iter()
                        .find(|&&x| !matches!(x, Item::Token(t) if tree.pos[t] == ","))
                        .is_some_and(|&x| {
                            is_phrase(tree, x, "SBAR") && tree.item_span(x).0 == m_j.span.start
                        })
            })
        })
}

pub fn demonym(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    let lex = ctx.lexicons;
    let pair = |a: &Mention, b: &Mention| {
        lex.is_demonym_of(&a.surface_key, &b.surface_key) || lex.is_demonym_of(&a.head_key, &b.surface_key)
    };
    pair(m_j, m_k) || pair(m_k, m_j)
}

pub fn sieve_precise_constructs(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    ordered(m_j, m_k)
        && (appositive(m_j, m_k, ctx)
            || predicate_nominative(m_j, m_k, ctx)
            || acronym(m_j, m_k)
            || relative_pronoun(m_j, m_k, ctx)
            || demonym(m_j, m_k, ctx))
}

/// Speaker identification or precise constructs.
pub fn precise_sieves(m_j: &Mention, m_k: &Mention, ctx: &DocumentContext<'_>) -> bool {
    sieve_speaker_identification(m_j, m_k, ctx) || sieve_precise_constructs(m_j, m_k, ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Document, Span, Token};
    use crate::mentions::detect::build_mention;
    use crate::mentions::LexiconSet;

    type Row<'a> = (&'a str, &'a str, &'a str);

    fn doc(sentences: &[&[Row<'_>]]) -> Document {
        Document::new(
            "t",
            0,
            sentences
                .iter()
                .map(|rows| rows.iter().map(|(w, p, f)| Token::new(w, p, f)).collect())
                .collect(),
        )
    }

    fn m(d: &Document, s: usize, a: usize, b: usize, head: usize) -> Mention {
        build_mention(d, Span::new(s, a, b), head)
    }

    fn flat(words: &[(&str, &str)]) -> Vec<(String, String, String)> {
        words
            .iter()
            .map(|(w, p)| (w.to_string(), p.to_string(), "*".to_string()))
            .collect()
    }

    fn flat_doc(sentences: &[&[(&str, &str)]]) -> Document {
        let owned: Vec<Vec<(String, String, String)>> = sentences.iter().map(|s| flat(s)).collect();
        Document::new(
            "t",
            0,
            owned
                .iter()
                .map(|rows| rows.iter().map(|(w, p, f)| Token::new(w, p, f)).collect())
                .collect(),
        )
    }

    #[test]
    fn string_match_ignores_case() {
        let d = flat_doc(&[
            &[("the", "DT"), ("United", "NNP"), ("States", "NNP")],
            &[("the", "DT"), ("united", "JJ"), ("states", "NNS"), (".", ".")],
        ]);
        let k = m(&d, 0, 0, 2, 2);
        let j = m(&d, 1, 0, 3, 2);
        assert!(sieve_string_match(&j, &k));
        assert!(!sieve_string_match(&k, &j), "antecedent must come first");
    }

    #[test]
    fn relaxed_match_cuts_relative_clause() {
        let d = flat_doc(&[
            &[("Clinton", "NNP"), (",", ","), ("who", "WP"), ("left", "VBD")],
            &[("Clinton", "NNP")],
        ]);
        let k = m(&d, 0, 0, 3, 0);
        let j = m(&d, 1, 0, 0, 0);
        assert!(!sieve_string_match(&j, &k));
        assert!(sieve_relaxed_match(&j, &k));
    }

    #[test]
    fn strict_head_match_needs_compatible_modifiers() {
        let d = flat_doc(&[
            &[("the", "DT"), ("president", "NN")],
            &[("the", "DT"), ("American", "JJ"), ("president", "NN")],
        ]);
        let k = m(&d, 0, 0, 1, 1);
        let j = m(&d, 1, 0, 2, 2);
        assert!(!sieve_strict_head_match_a(&j, &k));
        // the reverse direction (fewer modifiers later) is compatible
        let d2 = flat_doc(&[
            &[("the", "DT"), ("American", "JJ"), ("president", "NN")],
            &[("the", "DT"), ("president", "NN")],
        ]);
        let k2 = m(&d2, 0, 0, 2, 2);
        let j2 = m(&d2, 1, 0, 1, 1);
        assert!(sieve_strict_head_match_a(&j2, &k2));
    }

    #[test]
    fn strict_head_match_rejects_nesting() {
        let d = flat_doc(&[&[("the", "DT"), ("president", "NN"), ("'s", "POS"), ("president", "NN")]]);
        let outer = m(&d, 0, 0, 3, 3);
        let inner = m(&d, 0, 3, 3, 3);
        assert!(!sieve_strict_head_match_a(&inner, &outer));
    }

    #[test]
    fn pronouns_never_string_match() {
        let d = flat_doc(&[&[("he", "PRP")], &[("he", "PRP")]]);
        let k = m(&d, 0, 0, 0, 0);
        let j = m(&d, 1, 0, 0, 0);
        assert!(!string_sieves(&j, &k));
    }

    #[test]
    fn speaker_identification() {
        let mut d = flat_doc(&[
            &[("Barack", "NNP"), ("Obama", "NNP"), ("spoke", "VBD")],
            &[("I", "PRP"), ("agree", "VBP")],
        ]);
        for t in &mut d.sentences[1].tokens {
            t.speaker = "Obama".to_string();
        }
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        let k = m(&d, 0, 0, 1, 1);
        let j = m(&d, 1, 0, 0, 0);
        assert!(sieve_speaker_identification(&j, &k, &ctx));
        assert!(!sieve_speaker_identification(&k, &j, &ctx));
    }

    #[test]
    fn same_speaker_first_person() {
        let mut d = flat_doc(&[&[("I", "PRP"), ("think", "VBP")], &[("my", "PRP$"), ("dog", "NN")]]);
        for s in &mut d.sentences {
            for t in &mut s.tokens {
                t.speaker = "speaker_1".to_string();
            }
        }
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        assert!(sieve_speaker_identification(&m(&d, 1, 0, 0, 0), &m(&d, 0, 0, 0, 0), &ctx));
    }

    #[test]
    fn appositive_construct() {
        let d = doc(&[&[
            ("Barack", "NNP", "(TOP(S(NP(NP*"),
            ("Obama", "NNP", "*)"),
            (",", ",", "*"),
            ("the", "DT", "(NP*"),
            ("president", "NN", "*)"),
            (",", ",", "*)"),
            ("spoke", "VBD", "(VP*)"),
            (".", ".", "*))"),
        ]]);
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        let k = m(&d, 0, 0, 1, 1);
        let j = m(&d, 0, 3, 4, 4);
        assert!(appositive(&j, &k, &ctx));
        assert!(sieve_precise_constructs(&j, &k, &ctx));
    }

    #[test]
    fn coordination_is_not_apposition() {
        let d = doc(&[&[
            ("cats", "NNS", "(TOP(NP(NP*)"),
            (",", ",", "*"),
            ("dogs", "NNS", "(NP*)"),
            ("and", "CC", "*"),
            ("birds", "NNS", "(NP*)))"),
        ]]);
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        assert!(!appositive(&m(&d, 0, 2, 2, 2), &m(&d, 0, 0, 0, 0), &ctx));
    }

    #[test]
    fn predicate_nominative_construct() {
        let d = doc(&[&[
            ("Obama", "NNP", "(TOP(S(NP*)"),
            ("is", "VBZ", "(VP*"),
            ("the", "DT", "(NP*"),
            ("president", "NN", "*))"),
            (".", ".", "*))"),
        ]]);
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        assert!(predicate_nominative(&m(&d, 0, 2, 3, 3), &m(&d, 0, 0, 0, 0), &ctx));
        assert!(!predicate_nominative(&m(&d, 0, 0, 0, 0), &m(&d, 0, 2, 3, 3), &ctx));
    }

    #[test]
    fn acronyms() {
        let d = flat_doc(&[
            &[("International", "NNP"), ("Business", "NNP"), ("Machines", "NNPS")],
            &[("IBM", "NNP")],
        ]);
        let long = m(&d, 0, 0, 2, 2);
        let short = m(&d, 1, 0, 0, 0);
        assert!(acronym(&short, &long));
        assert!(acronym(&long, &short));
        let d2 = flat_doc(&[&[("Intel", "NNP"), ("Corp", "NNP")], &[("IBM", "NNP")]]);
        assert!(!acronym(&m(&d2, 1, 0, 0, 0), &m(&d2, 0, 0, 1, 1)));
    }

    #[test]
    fn relative_pronoun_construct() {
        let d = doc(&[&[
            ("the", "DT", "(TOP(NP(NP*"),
            ("man", "NN", "*)"),
            ("who", "WP", "(SBAR(WHNP*)"),
            ("left", "VBD", "(S(VP*)))))"),
        ]]);
        let lex = LexiconSet::empty();
        let ctx = DocumentContext::new(&d, &lex);
        assert!(relative_pronoun(&m(&d, 0, 2, 2, 2), &m(&d, 0, 0, 1, 1), &ctx));
    }

    #[test]
    fn demonym_construct() {
        let d = flat_doc(&[&[("France", "NNP")], &[("French", "JJ")]]);
        let lex = LexiconSet::bundled();
        let ctx = DocumentContext::new(&d, &lex);
        assert!(sieve_precise_constructs(&m(&d, 1, 0, 0, 0), &m(&d, 0, 0, 0, 0), &ctx));
    }
}
