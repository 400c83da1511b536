use crate::corpus::Document;

use super::lexicon::{pronoun_attributes, LexiconSet};
use super::types::{Animacy, AttributeBundle, Gender, Mention, MentionSequence, MentionType, Number, Person, SemClass};

fn ner_semclass(label: &str) -> Option<SemClass> {
    Some(match label {
        "PERSON" | "PER" => SemClass::Person,
        "ORG" | "ORGANIZATION" => SemClass::Organization,
        "GPE" | "LOC" | "LOCATION" => SemClass::Gpe,
        "DATE" | "TIME" => SemClass::Date,
        "EVENT" => SemClass::Event,
        "FAC" | "PRODUCT" | "WORK_OF_ART" | "LAW" | "LANGUAGE" => SemClass::Object,
        _ => return None,
    })
}

fn ner_animacy(label: &str) -> Animacy {
    match label {
        "PERSON" | "PER" | "NORP" => Animacy::Animate,
        _ => Animacy::Inanimate,
    }
}

/// Number, gender, person, animacy and semantic class of a mention.
///
/// Pronouns come straight from the pronoun table. Everything else goes
/// through POS, entity label and lexicon fallbacks, ending at `Unknown`.
pub fn compute_attributes(mention: &Mention, _doc: &Document, lexicons: &LexiconSet) -> AttributeBundle {
    if mention.mention_type == MentionType::Pronoun {
        if let Some(bundle) = pronoun_attributes(mention.head_word()) {
            return bundle;
        }
    }
    let head_entry = lexicons.get(&mention.head_key);
    let ner = mention.ner.as_deref();

    let number = match mention.head_pos() {
        "NNS" | "NNPS" => Number::Plural,
        "NN" | "NNP" => Number::Singular,
        _ => head_entry.and_then(|e| e.number).unwrap_or(Number::Unknown),
    };

    let mut gender = head_entry.and_then(|e| e.gender);
    if gender.is_none() && matches!(ner, Some("PERSON" | "PER")) {
        // first names carry gender for multi-word person names
        gender = lexicons.get(&mention.words[0]).and_then(|e| e.gender);
    }
    let gender = gender.unwrap_or(Gender::Unknown);

    let animacy = ner
        .map(ner_animacy)
        .or_else(|| head_entry.and_then(|e| e.animacy))
        .unwrap_or(Animacy::Unknown);

    let semclass = ner
        .and_then(ner_semclass)
        .or_else(|| head_entry.and_then(|e| e.semclass))
        .unwrap_or(SemClass::Unknown);

    AttributeBundle {
        number,
        gender,
        person: Person::Third,
        animacy,
        semclass,
    }
}

/// Fills in attributes for every mention of a sequence.
pub fn attribute_all(ms: &mut MentionSequence, doc: &Document, lexicons: &LexiconSet) {
    for m in &mut ms.mentions {
        m.attributes = compute_attributes(m, doc, lexicons);
    }
}
