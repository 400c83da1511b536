//! Mention detection, attributes, pairwise sieves and resolution modes.

mod attributes;
mod context;
mod detect;
mod lexicon;
mod modes;
pub mod sieves;
pub mod tree;
mod types;

pub use attributes::{attribute_all, compute_attributes};
pub use context::{DetectionError, DocumentContext};
pub use detect::{
    build_mention, detect_mentions, is_pleonastic_it, mention_type, ner_spans, surface_key,
    NON_REFERENTIAL_NER,
};
pub use lexicon::{
    is_first_person_plural, is_first_person_singular, is_pronoun_word, pronoun_attributes,
    LexEntry, LexiconError, LexiconSet,
};
pub use modes::{assign_modes, mode_of, ModePrecedence};
pub use sieves::{
    sieve_precise_constructs, sieve_relaxed_match, sieve_speaker_identification,
    sieve_strict_head_match_a, sieve_string_match,
};
pub use types::{
    order_key, Animacy, AttributeBundle, Candidate, Gender, Mention, MentionSequence,
    MentionType, Number, Person, ResolutionMode, SemClass, UnknownLabel,
};
